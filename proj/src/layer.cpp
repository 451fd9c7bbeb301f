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

#include "oaaconv/layer.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "oaaconv/counters.hpp"

namespace oaaconv {
namespace {

// Cache keys: one slot per (k, c) for the forward kernel and one for its
// flipped copy used by the input gradient.
std::uint64_t forward_key(std::size_t k, std::size_t c, std::size_t channels) {
  return 2 * (k * channels + c);
}
std::uint64_t flipped_key(std::size_t k, std::size_t c, std::size_t channels) {
  return 2 * (k * channels + c) + 1;
}

}  // namespace

ConvLayer::ConvLayer(KernelSet kernels, std::vector<double> bias, LayerConfig config)
    : kernels_(std::move(kernels)),
      bias_(std::move(bias)),
      config_(config),
      effective_(kernels_),
      cache_(config.cache_spectra) {
  if (bias_.size() != kernels_.kernels()) {
    throw std::invalid_argument("ConvLayer: bias length " +
                                std::to_string(bias_.size()) + " != kernel count " +
                                std::to_string(kernels_.kernels()));
  }
  rebuild_effective();
}

void ConvLayer::rebuild_effective() {
  effective_ = kernels_;
  if (config_.correlation) {
    for (std::size_t k = 0; k < effective_.kernels(); ++k) {
      for (std::size_t c = 0; c < effective_.channels(); ++c) {
        effective_[k][c] = flip180(kernels_[k][c]);
      }
    }
  }
  cache_.clear();
}

void ConvLayer::set_backend(ConvBackend backend) {
  config_.backend = backend;
  cache_.clear();
}

void ConvLayer::set_parameters(KernelSet kernels, std::vector<double> bias) {
  if (kernels.channels() != kernels_.channels() || kernels.shape() != kernels_.shape() ||
      kernels.kernels() != kernels_.kernels() || bias.size() != bias_.size()) {
    throw std::invalid_argument("ConvLayer::set_parameters: shape mismatch");
  }
  kernels_ = std::move(kernels);
  bias_ = std::move(bias);
  rebuild_effective();
}

void ConvLayer::apply_gradients(const LayerGradients& grads, double learning_rate) {
  if (grads.grad_kernels.kernels() != kernels_.kernels() ||
      grads.grad_kernels.channels() != kernels_.channels() ||
      grads.grad_kernels.shape() != kernels_.shape() ||
      grads.grad_bias.size() != bias_.size()) {
    throw std::invalid_argument("ConvLayer::apply_gradients: shape mismatch");
  }
  for (std::size_t k = 0; k < kernels_.kernels(); ++k) {
    for (std::size_t c = 0; c < kernels_.channels(); ++c) {
      auto w = kernels_[k][c].values();
      auto g = grads.grad_kernels[k][c].values();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * g[i];
    }
    bias_[k] -= learning_rate * grads.grad_bias[k];
  }
  rebuild_effective();
}

Shape ConvLayer::output_shape(Shape input) const {
  return mode_window(input, kernels_.shape(), ConvMode::Valid).shape;
}

void ConvLayer::check_input(const Tensor3D& input) const {
  if (input.channels() != kernels_.channels()) {
    throw std::invalid_argument("ConvLayer: input has " +
                                std::to_string(input.channels()) +
                                " channels, kernels expect " +
                                std::to_string(kernels_.channels()));
  }
  const Shape in = input.shape();
  const Shape k = kernels_.shape();
  if (k.rows > in.rows || k.cols > in.cols) {
    throw std::invalid_argument("ConvLayer: kernel " + to_string(k) +
                                " larger than input " + to_string(in));
  }
}

Real2D ConvLayer::dispatch(const Real2D& input, const Real2D& kernel,
                           std::uint64_t key, ConvMode mode) const {
  counters::add_backend_convolution();
  switch (config_.backend) {
    case ConvBackend::Space:
      return space_conv(input, kernel, mode);
    case ConvBackend::Fft: {
      const auto prepared =
          cache_.get(key, kernel, fft_padded_shape(input.shape(), kernel.shape()));
      return fft_conv(input, *prepared, mode);
    }
    case ConvBackend::Oaa: {
      const auto prepared = cache_.get(key, kernel, oaa_padded_shape(kernel.shape()));
      return oaa_conv(input, *prepared, mode, {.threads = config_.threads});
    }
  }
  throw std::invalid_argument("ConvLayer: unknown backend");
}

Tensor3D ConvLayer::forward(const Tensor3D& input) const {
  check_input(input);
  const Shape out_shape = output_shape(input.shape());
  const std::size_t channels = kernels_.channels();
  std::vector<Real2D> outputs;
  outputs.reserve(kernels_.kernels());
  for (std::size_t k = 0; k < kernels_.kernels(); ++k) {
    Real2D y(out_shape);
    y.fill(bias_[k]);
    for (std::size_t c = 0; c < channels; ++c) {
      accumulate_at(y, dispatch(input[c], effective_[k][c], forward_key(k, c, channels),
                                ConvMode::Valid),
                    0, 0);
    }
    outputs.push_back(std::move(y));
  }
  return Tensor3D(std::move(outputs));
}

LayerGradients ConvLayer::backward(const Tensor3D& input, const Tensor3D& delta) const {
  check_input(input);
  const Shape out_shape = output_shape(input.shape());
  if (delta.channels() != kernels_.kernels() || delta.shape() != out_shape) {
    throw std::invalid_argument(
        "ConvLayer::backward: delta must have " + std::to_string(kernels_.kernels()) +
        " channels of " + to_string(out_shape) + ", got " +
        std::to_string(delta.channels()) + " of " + to_string(delta.shape()));
  }
  const std::size_t channels = kernels_.channels();
  const std::size_t kernels = kernels_.kernels();

  // dL/dx_c = sum_k Full-conv(delta_k, flip(w_kc))
  Tensor3D grad_input(channels, input.shape());
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t k = 0; k < kernels; ++k) {
      accumulate_at(grad_input[c],
                    dispatch(delta[k], flip180(effective_[k][c]),
                             flipped_key(k, c, channels), ConvMode::Full),
                    0, 0);
    }
  }

  // dL/dw_kc = flip(Valid-conv(x_c, flip(delta_k))), i.e. the flipped Valid
  // correlation of x_c with delta_k.
  KernelSet grad_kernels(kernels, channels, kernels_.shape());
  std::vector<double> grad_bias(kernels);
  for (std::size_t k = 0; k < kernels; ++k) {
    const Real2D flipped_delta = flip180(delta[k]);
    for (std::size_t c = 0; c < channels; ++c) {
      counters::add_backend_convolution();
      const Real2D corr = conv(input[c], flipped_delta, ConvMode::Valid,
                               config_.backend, {.threads = config_.threads});
      grad_kernels[k][c] = config_.correlation ? corr : flip180(corr);
    }
    grad_bias[k] = std::accumulate(delta[k].values().begin(), delta[k].values().end(), 0.0);
  }
  return {std::move(grad_input), std::move(grad_kernels), std::move(grad_bias)};
}

std::size_t count_backend_convolutions(const ConvLayer& layer, Phase phase) {
  const std::size_t kc = layer.num_kernels() * layer.channels();
  return phase == Phase::Forward ? kc : 2 * kc;
}

}  // namespace oaaconv
