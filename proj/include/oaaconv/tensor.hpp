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

#ifndef OAACONV_TENSOR_HPP_
#define OAACONV_TENSOR_HPP_

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace oaaconv {

using Complex = std::complex<double>;

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

// Dense row-major 2-D array with a top-left origin. Both dimensions are at
// least one.
template <typename T>
class Array2D {
 public:
  Array2D(std::size_t rows, std::size_t cols) : Array2D(Shape{rows, cols}) {}

  explicit Array2D(Shape shape) : shape_(shape) {
    check_shape(shape);
    data_.assign(shape.size(), T{});
  }

  Array2D(std::size_t rows, std::size_t cols, std::vector<T> data)
      : shape_{rows, cols}, data_(std::move(data)) {
    check_shape(shape_);
    if (data_.size() != shape_.size()) {
      throw std::invalid_argument("Array2D: data length " +
                                  std::to_string(data_.size()) +
                                  " does not match shape " +
                                  to_string(shape_));
    }
  }

  // Rows given as nested braces; every row must have the same length.
  static Array2D from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    if (rows.size() == 0 || rows.begin()->size() == 0) {
      throw std::invalid_argument("Array2D::from_rows: empty array");
    }
    const std::size_t cols = rows.begin()->size();
    std::vector<T> data;
    data.reserve(rows.size() * cols);
    for (const auto& row : rows) {
      if (row.size() != cols) {
        throw std::invalid_argument("Array2D::from_rows: ragged rows");
      }
      data.insert(data.end(), row.begin(), row.end());
    }
    return Array2D(rows.size(), cols, std::move(data));
  }

  std::size_t rows() const { return shape_.rows; }
  std::size_t cols() const { return shape_.cols; }
  Shape shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * shape_.cols + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * shape_.cols + c];
  }

  std::span<T> row(std::size_t r) {
    return {data_.data() + r * shape_.cols, shape_.cols};
  }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * shape_.cols, shape_.cols};
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void fill(const T& v) { std::fill(data_.begin(), data_.end(), v); }

  friend bool operator==(const Array2D&, const Array2D&) = default;

 private:
  static void check_shape(Shape s) {
    if (s.rows == 0 || s.cols == 0) {
      throw std::invalid_argument("Array2D: dimensions must be positive, got " +
                                  to_string(s));
    }
  }

  Shape shape_;
  std::vector<T> data_;
};

using Real2D = Array2D<double>;
using Complex2D = Array2D<Complex>;

// C channels of identical shape.
class Tensor3D {
 public:
  explicit Tensor3D(std::vector<Real2D> channels);
  Tensor3D(std::size_t channels, Shape shape);

  std::size_t channels() const { return channels_.size(); }
  Shape shape() const { return channels_.front().shape(); }

  Real2D& operator[](std::size_t c) { return channels_[c]; }
  const Real2D& operator[](std::size_t c) const { return channels_[c]; }

  auto begin() const { return channels_.begin(); }
  auto end() const { return channels_.end(); }

  friend bool operator==(const Tensor3D&, const Tensor3D&) = default;

 private:
  std::vector<Real2D> channels_;
};

// K kernels, each with C channels of identical n_r x n_c shape.
class KernelSet {
 public:
  explicit KernelSet(std::vector<Tensor3D> kernels);
  KernelSet(std::size_t kernels, std::size_t channels, Shape shape);

  std::size_t kernels() const { return kernels_.size(); }
  std::size_t channels() const { return kernels_.front().channels(); }
  Shape shape() const { return kernels_.front().shape(); }

  Tensor3D& operator[](std::size_t k) { return kernels_[k]; }
  const Tensor3D& operator[](std::size_t k) const { return kernels_[k]; }

  friend bool operator==(const KernelSet&, const KernelSet&) = default;

 private:
  std::vector<Tensor3D> kernels_;
};

// Copies `a` into the top-left corner of a zero array of the requested shape.
Real2D zero_pad(const Real2D& a, std::size_t out_rows, std::size_t out_cols);

Real2D crop(const Real2D& a, std::size_t row_off, std::size_t col_off,
            std::size_t out_rows, std::size_t out_cols);

// result(i, j) = a(rows-1-i, cols-1-j)
Real2D flip180(const Real2D& a);

// dst(row_off+i, col_off+j) += src(i, j)
void accumulate_at(Real2D& dst, const Real2D& src, std::size_t row_off,
                   std::size_t col_off);

double max_abs(const Real2D& a);
double max_abs_diff(const Real2D& a, const Real2D& b);

}  // namespace oaaconv

#endif  // OAACONV_TENSOR_HPP_
