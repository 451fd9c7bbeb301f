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

#ifndef OAACONV_CONV_HPP_
#define OAACONV_CONV_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <tuple>
#include <vector>

#include "oaaconv/tensor.hpp"

namespace oaaconv {

// Output extent of a 2-D convolution of an N_r x N_c input with an
// n_r x n_c kernel:
//   Full  : (N_r+n_r-1) x (N_c+n_c-1)
//   Valid : (N_r-n_r+1) x (N_c-n_c+1), kernel must fit inside the input
//   Same  : N_r x N_c, Full cropped at offset floor((n-1)/2) per dimension
enum class ConvMode { Full, Valid, Same };

enum class ConvBackend { Space, Fft, Oaa };

std::string_view to_string(ConvMode mode);
std::string_view to_string(ConvBackend backend);
std::optional<ConvBackend> parse_backend(std::string_view name);

// Region of the Full result selected by a mode.
struct ConvWindow {
  std::size_t row_off = 0;
  std::size_t col_off = 0;
  Shape shape;
};

// Throws std::invalid_argument for Valid mode with a kernel larger than the
// input.
ConvWindow mode_window(Shape input, Shape kernel, ConvMode mode);

struct ConvOptions {
  // Worker threads for overlap-and-add block convolutions. Other backends
  // ignore it.
  unsigned threads = 1;
};

struct Block {
  std::size_t row_origin = 0;
  std::size_t col_origin = 0;
  Real2D data;
};

// Non-overlapping row-major tiling of an input into fixed-size blocks. Edge
// blocks are zero-padded up to the full block size.
struct BlockPartition {
  std::size_t block_rows = 0;
  std::size_t block_cols = 0;
  std::size_t grid_rows = 0;
  std::size_t grid_cols = 0;
  std::vector<Block> blocks;
};

BlockPartition partition_blocks(const Real2D& input, std::size_t block_rows,
                                std::size_t block_cols);

// Inverse of partition_blocks: places every block at its origin and drops
// edge padding.
Real2D reassemble(const BlockPartition& partition, Shape original);

// Transform sizes: next_pow2(N+n-1) per dimension for the whole-array FFT,
// next_pow2(2n-1) per dimension for overlap-and-add.
Shape fft_padded_shape(Shape input, Shape kernel);
Shape oaa_padded_shape(Shape kernel);

// A kernel together with its spectrum at one padded size.
class PreparedKernel {
 public:
  PreparedKernel(Real2D kernel, Shape padded);

  const Real2D& kernel() const { return kernel_; }
  Shape padded() const { return spectrum_.shape(); }
  const Complex2D& spectrum() const { return spectrum_; }

 private:
  Real2D kernel_;
  Complex2D spectrum_;
};

// Prepared kernels keyed by a caller-chosen kernel identity and padded size.
// When disabled, get() prepares a fresh kernel on every call and stores
// nothing. Safe for concurrent use.
class SpectrumCache {
 public:
  explicit SpectrumCache(bool enabled = true) : enabled_(enabled) {}
  SpectrumCache(const SpectrumCache& other) : enabled_(other.enabled()) {}
  SpectrumCache& operator=(const SpectrumCache& other);

  std::shared_ptr<const PreparedKernel> get(std::uint64_t key,
                                            const Real2D& kernel, Shape padded);

  bool enabled() const;
  void set_enabled(bool on);
  void clear();
  std::size_t size() const;

 private:
  using Key = std::tuple<std::uint64_t, std::size_t, std::size_t>;
  mutable std::mutex mutex_;
  bool enabled_;
  std::map<Key, std::shared_ptr<const PreparedKernel>> entries_;
};

// Direct convolution: every output element is a dot product over the whole
// n_r x n_c kernel window of the zero-extended input. This is the reference
// the frequency-domain backends are checked against.
Real2D space_conv(const Real2D& input, const Real2D& kernel, ConvMode mode);

Real2D fft_conv(const Real2D& input, const Real2D& kernel, ConvMode mode);
// `kernel.padded()` must equal fft_padded_shape(input, kernel).
Real2D fft_conv(const Real2D& input, const PreparedKernel& kernel, ConvMode mode);

Real2D oaa_conv(const Real2D& input, const Real2D& kernel, ConvMode mode,
                const ConvOptions& options = {});
// `kernel.padded()` must equal oaa_padded_shape(kernel).
Real2D oaa_conv(const Real2D& input, const PreparedKernel& kernel, ConvMode mode,
                const ConvOptions& options = {});

Real2D conv(const Real2D& input, const Real2D& kernel, ConvMode mode,
            ConvBackend backend, const ConvOptions& options = {});

// Wall-time split of one Full-mode convolution, in seconds. `setup` covers
// partitioning, zero-padding, overlap-add bookkeeping and cropping;
// `other` is whatever the phase timers did not attribute.
struct PhaseTimings {
  double setup = 0.0;
  double transform = 0.0;
  double pointwise = 0.0;
  double other = 0.0;
  double total = 0.0;

  double setup_fraction() const { return total > 0.0 ? setup / total : 0.0; }
  PhaseTimings& operator+=(const PhaseTimings& o);
};

// Only Fft and Oaa; the direct backend has no setup phase.
PhaseTimings overhead_breakdown(const Real2D& input, const Real2D& kernel,
                                ConvBackend backend);

}  // namespace oaaconv

#endif  // OAACONV_CONV_HPP_
