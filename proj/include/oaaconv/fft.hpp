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

#ifndef OAACONV_FFT_HPP_
#define OAACONV_FFT_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "oaaconv/tensor.hpp"

namespace oaaconv::fft {

enum class Direction { Forward, Inverse };

bool is_pow2(std::size_t m);

// Smallest power of two >= m. Throws for m == 0.
std::size_t next_pow2(std::size_t m);

// Radix-2 transforms. Forward is unnormalized; inverse scales by 1/L per
// dimension. Lengths must be powers of two.
std::vector<Complex> fft1d(std::span<const Complex> x, Direction dir);
Complex2D fft2d(const Complex2D& x, Direction dir);

// Forward transform of `x` zero-padded to padded_rows x padded_cols.
Complex2D fft2d_real(const Real2D& x, std::size_t padded_rows,
                     std::size_t padded_cols);

void fft1d_inplace(std::span<Complex> x, Direction dir);
// Rows first, then columns.
void fft2d_inplace(Complex2D& x, Direction dir);

// Zeroes `dst` and writes `src` into its top-left corner as real parts.
void pad_into(Complex2D& dst, const Real2D& src);

// Elementwise dst *= other.
void hadamard_inplace(Complex2D& dst, const Complex2D& other);

}  // namespace oaaconv::fft

#endif  // OAACONV_FFT_HPP_
