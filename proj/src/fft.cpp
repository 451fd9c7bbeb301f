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

#include "oaaconv/fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "oaaconv/counters.hpp"

namespace oaaconv::fft {
namespace {

struct Plan {
  std::size_t length = 1;
  unsigned log2_length = 0;
  std::vector<Complex> twiddles;  // exp(-2*pi*i*k/L), k < L/2
  std::vector<std::uint32_t> bit_reverse;
};

std::unique_ptr<Plan> make_plan(std::size_t length) {
  auto plan = std::make_unique<Plan>();
  plan->length = length;
  plan->log2_length = static_cast<unsigned>(std::countr_zero(length));
  plan->twiddles.resize(length / 2);
  for (std::size_t k = 0; k < length / 2; ++k) {
    const double angle =
        -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(length);
    plan->twiddles[k] = {std::cos(angle), std::sin(angle)};
  }
  plan->bit_reverse.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    std::uint32_t r = 0;
    for (unsigned b = 0; b < plan->log2_length; ++b) {
      r |= static_cast<std::uint32_t>((i >> b) & 1U) << (plan->log2_length - 1 - b);
    }
    plan->bit_reverse[i] = r;
  }
  return plan;
}

// Plans are created on first use and never released, so references stay valid.
const Plan& plan_for(std::size_t length) {
  thread_local std::size_t last_length = 0;
  thread_local const Plan* last_plan = nullptr;
  if (length == last_length) return *last_plan;

  static std::shared_mutex mutex;
  static std::map<std::size_t, std::unique_ptr<Plan>> plans;
  {
    std::shared_lock lock(mutex);
    if (auto it = plans.find(length); it != plans.end()) {
      last_length = length;
      last_plan = it->second.get();
      return *last_plan;
    }
  }
  std::unique_lock lock(mutex);
  auto& slot = plans[length];
  if (!slot) slot = make_plan(length);
  last_length = length;
  last_plan = slot.get();
  return *last_plan;
}

// std::complex operator* carries NaN/Inf recovery that is slow in the inner
// loop.
inline Complex mul(const Complex& a, const Complex& b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

inline Complex mul_conj(const Complex& a, const Complex& b) {
  return {a.real() * b.real() + a.imag() * b.imag(),
          a.imag() * b.real() - a.real() * b.imag()};
}

void require_pow2(std::size_t m, const char* what) {
  if (!is_pow2(m)) {
    throw std::invalid_argument(std::string(what) + ": length " +
                                std::to_string(m) + " is not a power of two");
  }
}

void transform(Complex* x, const Plan& plan, Direction dir) {
  const std::size_t n = plan.length;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = plan.bit_reverse[i];
    if (i < j) std::swap(x[i], x[j]);
  }
  // The first two stages only use the twiddles 1 and -i (+i for the inverse).
  if (n >= 2) {
    for (std::size_t i = 0; i < n; i += 2) {
      const Complex a = x[i];
      x[i] = a + x[i + 1];
      x[i + 1] = a - x[i + 1];
    }
  }
  if (n >= 4) {
    const bool forward = dir == Direction::Forward;
    for (std::size_t i = 0; i < n; i += 4) {
      const Complex a0 = x[i];
      const Complex a1 = x[i + 1];
      const Complex b0 = x[i + 2];
      const Complex h = x[i + 3];
      const Complex b1 = forward ? Complex{h.imag(), -h.real()}
                                 : Complex{-h.imag(), h.real()};
      x[i] = a0 + b0;
      x[i + 2] = a0 - b0;
      x[i + 1] = a1 + b1;
      x[i + 3] = a1 - b1;
    }
  }
  const Complex* tw = plan.twiddles.data();
  for (std::size_t len = 8; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      Complex* lo = x + start;
      Complex* hi = lo + half;
      for (std::size_t j = 0; j < half; ++j) {
        const Complex v = dir == Direction::Forward ? mul(hi[j], tw[j * stride])
                                                    : mul_conj(hi[j], tw[j * stride]);
        hi[j] = lo[j] - v;
        lo[j] += v;
      }
    }
  }
  counters::add_butterflies(static_cast<std::uint64_t>(n / 2) * plan.log2_length);
  if (dir == Direction::Inverse && n > 1) {
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) x[i] *= scale;
  }
}

// Column transforms of every column at once: the radix-2 butterflies of a
// column transform are applied to whole rows, which keeps memory access
// sequential.
void transform_columns(Complex2D& x, const Plan& plan, Direction dir) {
  const std::size_t n = plan.length;
  const std::size_t width = x.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = plan.bit_reverse[i];
    if (i < j) std::swap_ranges(x.row(i).begin(), x.row(i).end(), x.row(j).begin());
  }
  const Complex* tw = plan.twiddles.data();
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        Complex* lo = x.row(start + j).data();
        Complex* hi = x.row(start + j + half).data();
        const Complex w = dir == Direction::Forward ? tw[j * stride] : std::conj(tw[j * stride]);
        if (j == 0) {
          for (std::size_t c = 0; c < width; ++c) {
            const Complex v = hi[c];
            hi[c] = lo[c] - v;
            lo[c] += v;
          }
        } else {
          for (std::size_t c = 0; c < width; ++c) {
            const Complex v = mul(hi[c], w);
            hi[c] = lo[c] - v;
            lo[c] += v;
          }
        }
      }
    }
  }
  counters::add_butterflies(static_cast<std::uint64_t>(width) * (n / 2) *
                            plan.log2_length);
  if (dir == Direction::Inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (Complex& v : x.values()) v *= scale;
  }
}

}  // namespace

bool is_pow2(std::size_t m) { return std::has_single_bit(m); }

std::size_t next_pow2(std::size_t m) {
  if (m == 0) throw std::invalid_argument("next_pow2: argument must be >= 1");
  return std::bit_ceil(m);
}

void fft1d_inplace(std::span<Complex> x, Direction dir) {
  require_pow2(x.size(), "fft1d");
  transform(x.data(), plan_for(x.size()), dir);
}

std::vector<Complex> fft1d(std::span<const Complex> x, Direction dir) {
  std::vector<Complex> out(x.begin(), x.end());
  fft1d_inplace(out, dir);
  return out;
}

void fft2d_inplace(Complex2D& x, Direction dir) {
  require_pow2(x.rows(), "fft2d rows");
  require_pow2(x.cols(), "fft2d cols");
  counters::add_transform(x.shape());

  const Plan& row_plan = plan_for(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    transform(x.row(r).data(), row_plan, dir);
  }

  if (x.rows() > 1) transform_columns(x, plan_for(x.rows()), dir);
}

Complex2D fft2d(const Complex2D& x, Direction dir) {
  Complex2D out = x;
  fft2d_inplace(out, dir);
  return out;
}

void pad_into(Complex2D& dst, const Real2D& src) {
  if (src.rows() > dst.rows() || src.cols() > dst.cols()) {
    throw std::invalid_argument("pad_into: source " + to_string(src.shape()) +
                                " larger than destination " +
                                to_string(dst.shape()));
  }
  for (std::size_t r = 0; r < src.rows(); ++r) {
    auto s = src.row(r);
    auto d = dst.row(r);
    for (std::size_t c = 0; c < s.size(); ++c) d[c] = Complex{s[c], 0.0};
    std::fill(d.begin() + static_cast<std::ptrdiff_t>(s.size()), d.end(), Complex{});
  }
  for (std::size_t r = src.rows(); r < dst.rows(); ++r) {
    std::fill(dst.row(r).begin(), dst.row(r).end(), Complex{});
  }
}

Complex2D fft2d_real(const Real2D& x, std::size_t padded_rows,
                     std::size_t padded_cols) {
  if (padded_rows < x.rows() || padded_cols < x.cols()) {
    throw std::invalid_argument("fft2d_real: padded size " +
                                to_string({padded_rows, padded_cols}) +
                                " smaller than input " + to_string(x.shape()));
  }
  require_pow2(padded_rows, "fft2d_real rows");
  require_pow2(padded_cols, "fft2d_real cols");
  Complex2D out(padded_rows, padded_cols);
  pad_into(out, x);
  fft2d_inplace(out, Direction::Forward);
  return out;
}

void hadamard_inplace(Complex2D& dst, const Complex2D& other) {
  if (dst.shape() != other.shape()) {
    throw std::invalid_argument("hadamard: shape mismatch " +
                                to_string(dst.shape()) + " vs " +
                                to_string(other.shape()));
  }
  Complex* d = dst.data();
  const Complex* o = other.data();
  for (std::size_t i = 0; i < dst.size(); ++i) d[i] = mul(d[i], o[i]);
  counters::add_hadamard(dst.size());
}

}  // namespace oaaconv::fft
