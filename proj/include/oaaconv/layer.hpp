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

#ifndef OAACONV_LAYER_HPP_
#define OAACONV_LAYER_HPP_

#include <cstddef>
#include <vector>

#include "oaaconv/conv.hpp"
#include "oaaconv/tensor.hpp"

namespace oaaconv {

enum class Phase { Forward, Backward };

struct LayerConfig {
  ConvBackend backend = ConvBackend::Space;
  // Treat stored kernels as correlation filters (flipped at the boundary).
  bool correlation = false;
  // Reuse kernel spectra across calls until the parameters change.
  bool cache_spectra = true;
  // Worker threads handed to the overlap-and-add backend.
  unsigned threads = 1;
};

struct LayerGradients {
  Tensor3D grad_input;
  KernelSet grad_kernels;
  std::vector<double> grad_bias;
};

// Convolutional layer with K kernels over C input channels, stride 1, Valid
// output:
//   y_k = bias_k + sum_c conv(x_c, w_{k,c}, Valid)
// Forward dispatches K*C backend convolutions and backward 2*K*C, all through
// the configured backend.
class ConvLayer {
 public:
  ConvLayer(KernelSet kernels, std::vector<double> bias, LayerConfig config = {});

  const KernelSet& kernels() const { return kernels_; }
  const std::vector<double>& bias() const { return bias_; }
  const LayerConfig& config() const { return config_; }
  std::size_t num_kernels() const { return kernels_.kernels(); }
  std::size_t channels() const { return kernels_.channels(); }

  void set_backend(ConvBackend backend);
  void set_parameters(KernelSet kernels, std::vector<double> bias);
  // parameters -= learning_rate * gradients
  void apply_gradients(const LayerGradients& grads, double learning_rate);

  Shape output_shape(Shape input) const;

  Tensor3D forward(const Tensor3D& input) const;
  LayerGradients backward(const Tensor3D& input, const Tensor3D& delta) const;

 private:
  void rebuild_effective();
  void check_input(const Tensor3D& input) const;
  Real2D dispatch(const Real2D& input, const Real2D& kernel, std::uint64_t key,
                  ConvMode mode) const;

  KernelSet kernels_;
  std::vector<double> bias_;
  LayerConfig config_;
  // Kernels as applied by true convolution (flipped when correlation is set).
  KernelSet effective_;
  mutable SpectrumCache cache_;
};

// K*C for the forward pass, 2*K*C for the backward pass.
std::size_t count_backend_convolutions(const ConvLayer& layer, Phase phase);

}  // namespace oaaconv

#endif  // OAACONV_LAYER_HPP_
