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

#include "oaaconv/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace oaaconv {
namespace {

std::vector<double> softmax(const std::vector<double>& s) {
  const double m = *std::max_element(s.begin(), s.end());
  std::vector<double> p(s.size());
  double z = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) z += p[i] = std::exp(s[i] - m);
  for (double& v : p) v /= z;
  return p;
}

double cross_entropy(const std::vector<double>& scores, std::size_t label) {
  const double m = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double s : scores) z += std::exp(s - m);
  return -(scores[label] - m - std::log(z));
}

void check_sample(const MiniNet& net, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("dataset is empty");
  if (data.labels.size() != data.images.size()) {
    throw std::invalid_argument("dataset has mismatched image and label counts");
  }
  for (std::size_t label : data.labels) {
    if (label >= net.classes()) {
      throw std::invalid_argument("label " + std::to_string(label) +
                                  " outside the network's " +
                                  std::to_string(net.classes()) + " classes");
    }
  }
}

}  // namespace

MiniNet::MiniNet(ConvLayer conv, Real2D dense_weights, std::vector<double> dense_bias)
    : conv_(std::move(conv)),
      dense_weights_(std::move(dense_weights)),
      dense_bias_(std::move(dense_bias)) {
  if (conv_.channels() != 1) {
    throw std::invalid_argument("MiniNet: convolution must have one input channel");
  }
  if (dense_weights_.rows() != dense_bias_.size()) {
    throw std::invalid_argument("MiniNet: dense weights/bias size mismatch");
  }
}

MiniNet MiniNet::initialize(std::size_t image_size, std::size_t kernels,
                            std::size_t kernel_size, std::size_t classes,
                            std::uint64_t seed, const LayerConfig& config) {
  if (kernel_size > image_size) {
    throw std::invalid_argument("MiniNet: kernel larger than the image");
  }
  std::mt19937_64 rng(seed);
  const double conv_r = 1.0 / std::sqrt(static_cast<double>(kernel_size * kernel_size));
  std::uniform_real_distribution<double> conv_dist(-conv_r, conv_r);
  KernelSet ks(kernels, 1, {kernel_size, kernel_size});
  for (std::size_t k = 0; k < kernels; ++k) {
    for (double& w : ks[k][0].values()) w = conv_dist(rng);
  }
  const std::size_t side = image_size - kernel_size + 1;
  const std::size_t features = kernels * side * side;
  const double dense_r = 1.0 / std::sqrt(static_cast<double>(features));
  std::uniform_real_distribution<double> dense_dist(-dense_r, dense_r);
  Real2D dense(classes, features);
  for (double& w : dense.values()) w = dense_dist(rng);
  return MiniNet(ConvLayer(std::move(ks), std::vector<double>(kernels, 0.0), config),
                 std::move(dense), std::vector<double>(classes, 0.0));
}

void MiniNet::set_dense(Real2D weights, std::vector<double> bias) {
  if (weights.shape() != dense_weights_.shape() || bias.size() != dense_bias_.size()) {
    throw std::invalid_argument("MiniNet::set_dense: shape mismatch");
  }
  dense_weights_ = std::move(weights);
  dense_bias_ = std::move(bias);
}

MiniNet::Activations MiniNet::forward(const Real2D& image) const {
  Tensor3D conv_out = conv_.forward(Tensor3D({image}));
  const std::size_t per_map = conv_out.shape().size();
  if (per_map * conv_out.channels() != dense_weights_.cols()) {
    throw std::invalid_argument("MiniNet: image " + to_string(image.shape()) +
                                " does not match the classifier input size");
  }
  std::vector<double> features(dense_weights_.cols());
  for (std::size_t k = 0; k < conv_out.channels(); ++k) {
    const auto v = conv_out[k].values();
    for (std::size_t i = 0; i < per_map; ++i) features[k * per_map + i] = std::max(0.0, v[i]);
  }
  std::vector<double> scores(dense_bias_);
  for (std::size_t c = 0; c < scores.size(); ++c) {
    const auto w = dense_weights_.row(c);
    scores[c] += std::inner_product(w.begin(), w.end(), features.begin(), 0.0);
  }
  return {std::move(conv_out), std::move(features), std::move(scores)};
}

std::vector<double> MiniNet::scores(const Real2D& image) const {
  return forward(image).scores;
}

std::size_t MiniNet::predict(const Real2D& image) const {
  const auto s = scores(image);
  return static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
}

void validate(const TrainConfig& config) {
  if (config.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (config.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (!(config.learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (config.kernels < 1 || config.kernel_size < 1) {
    throw std::invalid_argument("kernel count and size must be >= 1");
  }
}

double sample_loss(const MiniNet& net, const Real2D& image, std::size_t label) {
  return cross_entropy(net.scores(image), label);
}

double mean_loss(const MiniNet& net, const Dataset& data) {
  check_sample(net, data);
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total += sample_loss(net, data.images[i], data.labels[i]);
  }
  return total / static_cast<double>(data.size());
}

double train_step(MiniNet& net, const Dataset& data,
                  std::span<const std::size_t> batch, double learning_rate) {
  if (batch.empty()) throw std::invalid_argument("train_step: empty batch");
  const ConvLayer& layer = net.conv();
  const std::size_t classes = net.classes();
  const std::size_t features = net.dense_weights().cols();

  Real2D grad_dense(classes, features);
  std::vector<double> grad_dense_bias(classes, 0.0);
  LayerGradients conv_grads{Tensor3D(1, data.images[batch[0]].shape()),
                            KernelSet(layer.num_kernels(), 1, layer.kernels().shape()),
                            std::vector<double>(layer.num_kernels(), 0.0)};
  double loss = 0.0;

  for (std::size_t idx : batch) {
    const Real2D& image = data.images.at(idx);
    const std::size_t label = data.labels.at(idx);
    if (label >= classes) throw std::invalid_argument("train_step: label out of range");
    const MiniNet::Activations act = net.forward(image);
    loss += cross_entropy(act.scores, label);

    std::vector<double> dscores = softmax(act.scores);
    dscores[label] -= 1.0;

    std::vector<double> dfeatures(features, 0.0);
    for (std::size_t c = 0; c < classes; ++c) {
      const auto w = net.dense_weights().row(c);
      auto g = grad_dense.row(c);
      for (std::size_t f = 0; f < features; ++f) {
        g[f] += dscores[c] * act.features[f];
        dfeatures[f] += dscores[c] * w[f];
      }
      grad_dense_bias[c] += dscores[c];
    }

    Tensor3D delta(layer.num_kernels(), act.conv_out.shape());
    const std::size_t per_map = act.conv_out.shape().size();
    for (std::size_t k = 0; k < layer.num_kernels(); ++k) {
      const auto pre = act.conv_out[k].values();
      auto d = delta[k].values();
      for (std::size_t i = 0; i < per_map; ++i) {
        d[i] = pre[i] > 0.0 ? dfeatures[k * per_map + i] : 0.0;
      }
    }
    const LayerGradients g = layer.backward(Tensor3D({image}), delta);
    for (std::size_t k = 0; k < layer.num_kernels(); ++k) {
      accumulate_at(conv_grads.grad_kernels[k][0], g.grad_kernels[k][0], 0, 0);
      conv_grads.grad_bias[k] += g.grad_bias[k];
    }
  }

  const double scale = 1.0 / static_cast<double>(batch.size());
  for (std::size_t k = 0; k < layer.num_kernels(); ++k) {
    for (double& v : conv_grads.grad_kernels[k][0].values()) v *= scale;
    conv_grads.grad_bias[k] *= scale;
  }
  net.conv().apply_gradients(conv_grads, learning_rate);

  Real2D dense = net.dense_weights();
  std::vector<double> dense_bias = net.dense_bias();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    dense.data()[i] -= learning_rate * scale * grad_dense.data()[i];
  }
  for (std::size_t c = 0; c < classes; ++c) {
    dense_bias[c] -= learning_rate * scale * grad_dense_bias[c];
  }
  net.set_dense(std::move(dense), std::move(dense_bias));
  return loss * scale;
}

Dataset load_dataset(const TrainConfig& config) {
  if (config.dataset == "synthetic") {
    return synthesize_dataset(config.seed, config.classes, config.per_class,
                              config.image_size, config.noise);
  }
  return load_mnist(config.dataset);
}

TrainResult train(const TrainConfig& config, const Dataset& data) {
  validate(config);
  if (data.size() == 0) throw std::invalid_argument("train: dataset is empty");
  const Shape shape = data.images.front().shape();
  if (shape.rows != shape.cols) {
    throw std::invalid_argument("train: images must be square, got " + to_string(shape));
  }
  for (const Real2D& img : data.images) {
    if (img.shape() != shape) throw std::invalid_argument("train: image shapes differ");
  }

  MiniNet net = MiniNet::initialize(
      shape.rows, config.kernels, config.kernel_size, data.classes, config.seed,
      {.backend = config.backend, .cache_spectra = config.cache_spectra});

  std::vector<EpochStats> trace;
  trace.push_back({0, mean_loss(net, data), evaluate(net, data)});

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t len = std::min(config.batch_size, order.size() - start);
      train_step(net, data, std::span(order).subspan(start, len), config.learning_rate);
    }
    trace.push_back({epoch, mean_loss(net, data), evaluate(net, data)});
  }
  return {std::move(net), std::move(trace)};
}

TrainResult train(const TrainConfig& config) {
  validate(config);
  return train(config, load_dataset(config));
}

std::vector<std::size_t> predict_all(const MiniNet& net, const Dataset& data) {
  std::vector<std::size_t> out;
  out.reserve(data.size());
  for (const Real2D& img : data.images) out.push_back(net.predict(img));
  return out;
}

double evaluate(const MiniNet& net, const Dataset& data) {
  check_sample(net, data);
  const auto predicted = predict_all(net, data);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

void write_trace_csv(const std::vector<EpochStats>& trace,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace to " + path.string());
  out << "epoch,mean_loss,accuracy\n";
  char line[128];
  for (const EpochStats& e : trace) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", e.epoch, e.mean_loss, e.accuracy);
    out << line;
  }
  if (!out) throw std::runtime_error("error writing trace to " + path.string());
}

}  // namespace oaaconv
