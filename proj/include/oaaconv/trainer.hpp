/* Copyright 2026 The oaaconv Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef OAACONV_TRAINER_HPP_
#define OAACONV_TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "oaaconv/dataset.hpp"
#include "oaaconv/layer.hpp"

namespace oaaconv {

// One convolutional layer (C = 1, Valid) -> rectifier -> dense softmax
// classifier over the flattened feature maps.
class MiniNet {
 public:
  struct Activations {
    Tensor3D conv_out;              // before the rectifier
    std::vector<double> features;   // rectified, k-major flattening
    std::vector<double> scores;
  };

  MiniNet(ConvLayer conv, Real2D dense_weights, std::vector<double> dense_bias);

  // Uniform [-r, r] weights with r = 1/sqrt(fan_in), zero biases. The draw
  // depends only on the seed, so every backend starts from the same weights.
  static MiniNet initialize(std::size_t image_size, std::size_t kernels,
                            std::size_t kernel_size, std::size_t classes,
                            std::uint64_t seed, const LayerConfig& config);

  const ConvLayer& conv() const { return conv_; }
  ConvLayer& conv() { return conv_; }
  const Real2D& dense_weights() const { return dense_weights_; }
  const std::vector<double>& dense_bias() const { return dense_bias_; }
  std::size_t classes() const { return dense_bias_.size(); }

  void set_dense(Real2D weights, std::vector<double> bias);

  Activations forward(const Real2D& image) const;
  std::vector<double> scores(const Real2D& image) const;
  // Argmax of the scores; ties go to the lowest class index.
  std::size_t predict(const Real2D& image) const;

 private:
  ConvLayer conv_;
  Real2D dense_weights_;  // classes x features
  std::vector<double> dense_bias_;
};

struct TrainConfig {
  ConvBackend backend = ConvBackend::Space;
  std::uint64_t seed = 1;
  double learning_rate = 0.05;
  std::size_t epochs = 3;
  std::size_t batch_size = 10;
  // "synthetic" or a directory with MNIST IDX files.
  std::string dataset = "synthetic";
  std::size_t kernels = 4;
  std::size_t kernel_size = 5;
  bool cache_spectra = true;
  // Synthetic dataset shape.
  std::size_t classes = 4;
  std::size_t per_class = 50;
  std::size_t image_size = 16;
  double noise = 0.1;
};

struct EpochStats {
  std::size_t epoch = 0;   // 0 is the untrained network
  double mean_loss = 0.0;  // softmax cross-entropy over the dataset
  double accuracy = 0.0;
};

struct TrainResult {
  MiniNet net;
  std::vector<EpochStats> trace;
};

void validate(const TrainConfig& config);

// Softmax cross-entropy of one sample.
double sample_loss(const MiniNet& net, const Real2D& image, std::size_t label);
double mean_loss(const MiniNet& net, const Dataset& data);

// One SGD step on the mean gradient of the listed samples; returns the mean
// loss before the step.
double train_step(MiniNet& net, const Dataset& data,
                  std::span<const std::size_t> batch, double learning_rate);

// Mini-batch SGD. The trace holds epoch 0 (initial network) and every epoch,
// each evaluated on the full training set after that epoch.
TrainResult train(const TrainConfig& config, const Dataset& data);
// Loads or synthesizes the dataset named by the config.
TrainResult train(const TrainConfig& config);

Dataset load_dataset(const TrainConfig& config);

// Fraction of argmax-correct predictions. Throws for an empty dataset.
double evaluate(const MiniNet& net, const Dataset& data);
std::vector<std::size_t> predict_all(const MiniNet& net, const Dataset& data);

// CSV columns: epoch, mean_loss, accuracy.
void write_trace_csv(const std::vector<EpochStats>& trace,
                     const std::filesystem::path& path);

}  // namespace oaaconv

#endif  // OAACONV_TRAINER_HPP_
