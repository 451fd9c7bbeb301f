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

#include "oaaconv/tensor.hpp"

#include <cmath>

namespace oaaconv {

std::string to_string(const Shape& s) {
  return std::to_string(s.rows) + "x" + std::to_string(s.cols);
}

Tensor3D::Tensor3D(std::vector<Real2D> channels) : channels_(std::move(channels)) {
  if (channels_.empty()) {
    throw std::invalid_argument("Tensor3D: at least one channel required");
  }
  for (const auto& ch : channels_) {
    if (ch.shape() != channels_.front().shape()) {
      throw std::invalid_argument("Tensor3D: channel shapes differ (" +
                                  to_string(ch.shape()) + " vs " +
                                  to_string(channels_.front().shape()) + ")");
    }
  }
}

Tensor3D::Tensor3D(std::size_t channels, Shape shape)
    : Tensor3D(std::vector<Real2D>(channels, Real2D(shape))) {}

KernelSet::KernelSet(std::vector<Tensor3D> kernels) : kernels_(std::move(kernels)) {
  if (kernels_.empty()) {
    throw std::invalid_argument("KernelSet: at least one kernel required");
  }
  for (const auto& k : kernels_) {
    if (k.channels() != kernels_.front().channels() ||
        k.shape() != kernels_.front().shape()) {
      throw std::invalid_argument(
          "KernelSet: kernels must share channel count and shape");
    }
  }
}

KernelSet::KernelSet(std::size_t kernels, std::size_t channels, Shape shape)
    : KernelSet(std::vector<Tensor3D>(kernels, Tensor3D(channels, shape))) {}

Real2D zero_pad(const Real2D& a, std::size_t out_rows, std::size_t out_cols) {
  if (out_rows < a.rows() || out_cols < a.cols()) {
    throw std::invalid_argument("zero_pad: target " +
                                to_string({out_rows, out_cols}) +
                                " smaller than source " + to_string(a.shape()));
  }
  Real2D out(out_rows, out_cols);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
  }
  return out;
}

Real2D crop(const Real2D& a, std::size_t row_off, std::size_t col_off,
            std::size_t out_rows, std::size_t out_cols) {
  if (row_off + out_rows > a.rows() || col_off + out_cols > a.cols()) {
    throw std::out_of_range("crop: window " + to_string({out_rows, out_cols}) +
                            " at (" + std::to_string(row_off) + "," +
                            std::to_string(col_off) + ") exceeds " +
                            to_string(a.shape()));
  }
  Real2D out(out_rows, out_cols);
  for (std::size_t i = 0; i < out_rows; ++i) {
    const auto src = a.row(row_off + i).subspan(col_off, out_cols);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Real2D flip180(const Real2D& a) {
  Real2D out(a.shape());
  std::reverse_copy(a.values().begin(), a.values().end(), out.values().begin());
  return out;
}

void accumulate_at(Real2D& dst, const Real2D& src, std::size_t row_off,
                   std::size_t col_off) {
  if (row_off + src.rows() > dst.rows() || col_off + src.cols() > dst.cols()) {
    throw std::out_of_range("accumulate_at: " + to_string(src.shape()) +
                            " at (" + std::to_string(row_off) + "," +
                            std::to_string(col_off) + ") exceeds " +
                            to_string(dst.shape()));
  }
  for (std::size_t i = 0; i < src.rows(); ++i) {
    auto d = dst.row(row_off + i).subspan(col_off, src.cols());
    auto s = src.row(i);
    for (std::size_t j = 0; j < s.size(); ++j) d[j] += s[j];
  }
}

double max_abs(const Real2D& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Real2D& a, const Real2D& b) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch " +
                                to_string(a.shape()) + " vs " +
                                to_string(b.shape()));
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

}  // namespace oaaconv
