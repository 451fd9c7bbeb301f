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

#include "oaaconv/conv.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "oaaconv/counters.hpp"
#include "oaaconv/fft.hpp"

namespace oaaconv {
namespace {

enum class Phase { Setup, Transform, Pointwise };

struct NoTimer {
  void start() {}
  void lap(Phase) {}
};

// Attributes the time since the previous lap to the named phase.
class LapTimer {
 public:
  explicit LapTimer(PhaseTimings& out) : out_(out) {}

  void start() { last_ = Clock::now(); }

  void lap(Phase phase) {
    const auto now = Clock::now();
    const double dt = std::chrono::duration<double>(now - last_).count();
    switch (phase) {
      case Phase::Setup: out_.setup += dt; break;
      case Phase::Transform: out_.transform += dt; break;
      case Phase::Pointwise: out_.pointwise += dt; break;
    }
    last_ = now;
  }

 private:
  using Clock = std::chrono::steady_clock;
  PhaseTimings& out_;
  Clock::time_point last_;
};

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Copies the real parts of the window at (row_off, col_off) into `out`.
void take_real(const Complex2D& work, std::size_t row_off, std::size_t col_off,
               Real2D& out) {
#ifndef NDEBUG
  double max_re = 0.0;
  double max_im = 0.0;
  for (const Complex& z : work.values()) {
    max_re = std::max(max_re, std::abs(z.real()));
    max_im = std::max(max_im, std::abs(z.imag()));
  }
  assert(max_im <= 1e-8 * std::max(max_re, 1e-300) || max_re == 0.0);
#endif
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const Complex* src = &work(row_off + r, col_off);
    double* dst = out.row(r).data();
    for (std::size_t c = 0; c < out.cols(); ++c) dst[c] = src[c].real();
  }
}

void check_prepared(const PreparedKernel& kernel, Shape expected, const char* who) {
  if (kernel.padded() != expected) {
    throw std::invalid_argument(std::string(who) + ": prepared kernel padded to " +
                                to_string(kernel.padded()) + ", expected " +
                                to_string(expected));
  }
}

// `kernel_spectrum` may be null, in which case the kernel is transformed here.
template <class Timer>
Real2D fft_conv_impl(const Real2D& input, const Real2D& kernel,
                     const Complex2D* kernel_spectrum, ConvMode mode, Timer& timer) {
  const ConvWindow window = mode_window(input.shape(), kernel.shape(), mode);
  const Shape padded = fft_padded_shape(input.shape(), kernel.shape());

  timer.start();
  Complex2D work(padded);
  fft::pad_into(work, input);
  timer.lap(Phase::Setup);
  fft::fft2d_inplace(work, fft::Direction::Forward);
  timer.lap(Phase::Transform);

  std::optional<Complex2D> local_spectrum;
  if (kernel_spectrum == nullptr) {
    local_spectrum.emplace(padded);
    fft::pad_into(*local_spectrum, kernel);
    timer.lap(Phase::Setup);
    fft::fft2d_inplace(*local_spectrum, fft::Direction::Forward);
    timer.lap(Phase::Transform);
    kernel_spectrum = &*local_spectrum;
  }

  fft::hadamard_inplace(work, *kernel_spectrum);
  timer.lap(Phase::Pointwise);
  fft::fft2d_inplace(work, fft::Direction::Inverse);
  timer.lap(Phase::Transform);

  Real2D out(window.shape);
  take_real(work, window.row_off, window.col_off, out);
  timer.lap(Phase::Setup);
  return out;
}

// Kernel-sized tiling of the input; same geometry as partition_blocks.
struct BlockGrid {
  std::size_t block_rows = 0;
  std::size_t block_cols = 0;
  std::size_t grid_rows = 0;
  std::size_t grid_cols = 0;

  std::size_t count() const { return grid_rows * grid_cols; }
};

BlockGrid block_grid(Shape input, Shape block) {
  return {block.rows, block.cols, ceil_div(input.rows, block.rows),
          ceil_div(input.cols, block.cols)};
}

// Zero-pads block (br, bc) of `input` into `work`, clipping edge blocks.
void load_block(const Real2D& input, const BlockGrid& grid, std::size_t br,
                std::size_t bc, Complex2D& work) {
  const std::size_t r0 = br * grid.block_rows;
  const std::size_t c0 = bc * grid.block_cols;
  const std::size_t rows = std::min(grid.block_rows, input.rows() - r0);
  const std::size_t cols = std::min(grid.block_cols, input.cols() - c0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* s = &input(r0 + r, c0);
    auto d = work.row(r);
    for (std::size_t c = 0; c < cols; ++c) d[c] = Complex{s[c], 0.0};
    std::fill(d.begin() + static_cast<std::ptrdiff_t>(cols), d.end(), Complex{});
  }
  for (std::size_t r = rows; r < work.rows(); ++r) {
    std::fill(work.row(r).begin(), work.row(r).end(), Complex{});
  }
}

// Convolves blocks [first, last) (row-major block order) and overlap-adds them
// into `acc`, whose (0,0) is the origin of the Full result.
template <class Timer>
void oaa_block_range(const Real2D& input, const BlockGrid& grid,
                     std::size_t first, std::size_t last,
                     const Complex2D& kernel_spectrum, Real2D& acc, Timer& timer) {
  Complex2D work(kernel_spectrum.shape());
  const std::size_t out_rows = 2 * grid.block_rows - 1;
  const std::size_t out_cols = 2 * grid.block_cols - 1;
  for (std::size_t i = first; i < last; ++i) {
    const std::size_t br = i / grid.grid_cols;
    const std::size_t bc = i % grid.grid_cols;
    load_block(input, grid, br, bc, work);
    timer.lap(Phase::Setup);
    fft::fft2d_inplace(work, fft::Direction::Forward);
    timer.lap(Phase::Transform);
    fft::hadamard_inplace(work, kernel_spectrum);
    timer.lap(Phase::Pointwise);
    fft::fft2d_inplace(work, fft::Direction::Inverse);
    timer.lap(Phase::Transform);
    for (std::size_t r = 0; r < out_rows; ++r) {
      const Complex* src = &work(r, 0);
      double* dst = &acc(br * grid.block_rows + r, bc * grid.block_cols);
      for (std::size_t c = 0; c < out_cols; ++c) dst[c] += src[c].real();
    }
    timer.lap(Phase::Setup);
  }
}

template <class Timer>
Real2D oaa_conv_impl(const Real2D& input, const Real2D& kernel,
                     const Complex2D* kernel_spectrum, ConvMode mode,
                     unsigned threads, Timer& timer) {
  const ConvWindow window = mode_window(input.shape(), kernel.shape(), mode);
  const Shape padded = oaa_padded_shape(kernel.shape());

  timer.start();
  std::optional<Complex2D> local_spectrum;
  if (kernel_spectrum == nullptr) {
    local_spectrum.emplace(padded);
    fft::pad_into(*local_spectrum, kernel);
    timer.lap(Phase::Setup);
    fft::fft2d_inplace(*local_spectrum, fft::Direction::Forward);
    timer.lap(Phase::Transform);
    kernel_spectrum = &*local_spectrum;
  }

  const BlockGrid grid = block_grid(input.shape(), kernel.shape());
  const Shape acc_shape{grid.grid_rows * grid.block_rows + grid.block_rows - 1,
                        grid.grid_cols * grid.block_cols + grid.block_cols - 1};
  Real2D acc(acc_shape);
  timer.lap(Phase::Setup);

  const std::size_t count = grid.count();
  const std::size_t workers = std::min<std::size_t>(std::max(1U, threads), count);
  if (workers <= 1) {
    oaa_block_range(input, grid, 0, count, *kernel_spectrum, acc, timer);
  } else {
    // Each worker owns a private accumulator; partials are summed in worker
    // order so the result depends only on the worker count.
    std::vector<Real2D> partials(workers, Real2D(acc_shape));
    std::vector<counters::OpCounts> worker_counts(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t first = count * w / workers;
        const std::size_t last = count * (w + 1) / workers;
        pool.emplace_back([&, w, first, last] {
          NoTimer none;
          oaa_block_range(input, grid, first, last, *kernel_spectrum, partials[w],
                          none);
          worker_counts[w] = counters::snapshot();
        });
      }
    }
    for (std::size_t w = 0; w < workers; ++w) {
      accumulate_at(acc, partials[w], 0, 0);
      counters::merge(worker_counts[w]);
    }
  }

  Real2D out = crop(acc, window.row_off, window.col_off, window.shape.rows,
                    window.shape.cols);
  timer.lap(Phase::Setup);
  return out;
}

}  // namespace

std::string_view to_string(ConvMode mode) {
  switch (mode) {
    case ConvMode::Full: return "full";
    case ConvMode::Valid: return "valid";
    case ConvMode::Same: return "same";
  }
  return "?";
}

std::string_view to_string(ConvBackend backend) {
  switch (backend) {
    case ConvBackend::Space: return "space";
    case ConvBackend::Fft: return "fft";
    case ConvBackend::Oaa: return "oaa";
  }
  return "?";
}

std::optional<ConvBackend> parse_backend(std::string_view name) {
  if (name == "space") return ConvBackend::Space;
  if (name == "fft") return ConvBackend::Fft;
  if (name == "oaa") return ConvBackend::Oaa;
  return std::nullopt;
}

ConvWindow mode_window(Shape input, Shape kernel, ConvMode mode) {
  switch (mode) {
    case ConvMode::Full:
      return {0, 0, {input.rows + kernel.rows - 1, input.cols + kernel.cols - 1}};
    case ConvMode::Valid:
      if (kernel.rows > input.rows || kernel.cols > input.cols) {
        throw std::invalid_argument("valid convolution: kernel " +
                                    to_string(kernel) + " larger than input " +
                                    to_string(input));
      }
      return {kernel.rows - 1, kernel.cols - 1,
              {input.rows - kernel.rows + 1, input.cols - kernel.cols + 1}};
    case ConvMode::Same:
      return {(kernel.rows - 1) / 2, (kernel.cols - 1) / 2, input};
  }
  throw std::invalid_argument("unknown convolution mode");
}

BlockPartition partition_blocks(const Real2D& input, std::size_t block_rows,
                                std::size_t block_cols) {
  if (block_rows == 0 || block_cols == 0) {
    throw std::invalid_argument("partition_blocks: block dimensions must be >= 1");
  }
  BlockPartition part;
  part.block_rows = block_rows;
  part.block_cols = block_cols;
  part.grid_rows = ceil_div(input.rows(), block_rows);
  part.grid_cols = ceil_div(input.cols(), block_cols);
  part.blocks.reserve(part.grid_rows * part.grid_cols);
  for (std::size_t br = 0; br < part.grid_rows; ++br) {
    for (std::size_t bc = 0; bc < part.grid_cols; ++bc) {
      const std::size_t r0 = br * block_rows;
      const std::size_t c0 = bc * block_cols;
      const std::size_t rows = std::min(block_rows, input.rows() - r0);
      const std::size_t cols = std::min(block_cols, input.cols() - c0);
      Real2D data(block_rows, block_cols);
      for (std::size_t r = 0; r < rows; ++r) {
        const auto src = input.row(r0 + r).subspan(c0, cols);
        std::copy(src.begin(), src.end(), data.row(r).begin());
      }
      part.blocks.push_back({r0, c0, std::move(data)});
    }
  }
  return part;
}

Real2D reassemble(const BlockPartition& partition, Shape original) {
  Real2D padded(partition.grid_rows * partition.block_rows,
                partition.grid_cols * partition.block_cols);
  for (const Block& b : partition.blocks) {
    accumulate_at(padded, b.data, b.row_origin, b.col_origin);
  }
  return crop(padded, 0, 0, original.rows, original.cols);
}

Shape fft_padded_shape(Shape input, Shape kernel) {
  return {fft::next_pow2(input.rows + kernel.rows - 1),
          fft::next_pow2(input.cols + kernel.cols - 1)};
}

Shape oaa_padded_shape(Shape kernel) {
  return {fft::next_pow2(2 * kernel.rows - 1), fft::next_pow2(2 * kernel.cols - 1)};
}

PreparedKernel::PreparedKernel(Real2D kernel, Shape padded)
    : kernel_(std::move(kernel)),
      spectrum_(fft::fft2d_real(kernel_, padded.rows, padded.cols)) {}

SpectrumCache& SpectrumCache::operator=(const SpectrumCache& other) {
  if (this != &other) {
    const bool on = other.enabled();
    std::lock_guard lock(mutex_);
    enabled_ = on;
    entries_.clear();
  }
  return *this;
}

std::shared_ptr<const PreparedKernel> SpectrumCache::get(std::uint64_t key,
                                                         const Real2D& kernel,
                                                         Shape padded) {
  std::unique_lock lock(mutex_);
  if (!enabled_) {
    lock.unlock();
    return std::make_shared<const PreparedKernel>(kernel, padded);
  }
  const Key k{key, padded.rows, padded.cols};
  if (auto it = entries_.find(k); it != entries_.end()) {
    if (it->second->kernel().shape() != kernel.shape()) {
      throw std::invalid_argument("SpectrumCache: key reused for a kernel of shape " +
                                  to_string(kernel.shape()));
    }
    return it->second;
  }
  auto prepared = std::make_shared<const PreparedKernel>(kernel, padded);
  entries_.emplace(k, prepared);
  return prepared;
}

bool SpectrumCache::enabled() const {
  std::lock_guard lock(mutex_);
  return enabled_;
}

void SpectrumCache::set_enabled(bool on) {
  std::lock_guard lock(mutex_);
  enabled_ = on;
  if (!on) entries_.clear();
}

void SpectrumCache::clear() {
  std::lock_guard lock(mutex_);
  entries_.clear();
}

std::size_t SpectrumCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

Real2D space_conv(const Real2D& input, const Real2D& kernel, ConvMode mode) {
  const ConvWindow window = mode_window(input.shape(), kernel.shape(), mode);
  const std::size_t kr = kernel.rows();
  const std::size_t kc = kernel.cols();
  const Real2D flipped = flip180(kernel);

  // out(p,q) = sum_{u,v} flipped(u,v) * ext(p+row_off+u, q+col_off+v), where
  // ext is the input with kr-1 / kc-1 zeros on every side. Valid windows never
  // touch the zero border, so they read the input directly.
  std::optional<Real2D> extended;
  const Real2D* src = &input;
  std::size_t base_r = 0;
  std::size_t base_c = 0;
  if (mode != ConvMode::Valid) {
    extended.emplace(input.rows() + 2 * (kr - 1), input.cols() + 2 * (kc - 1));
    accumulate_at(*extended, input, kr - 1, kc - 1);
    src = &*extended;
    base_r = window.row_off;
    base_c = window.col_off;
  }

  Real2D out(window.shape);
  for (std::size_t p = 0; p < out.rows(); ++p) {
    for (std::size_t q = 0; q < out.cols(); ++q) {
      double sum = 0.0;
      for (std::size_t u = 0; u < kr; ++u) {
        const double* s = &(*src)(base_r + p + u, base_c + q);
        const double* k = flipped.row(u).data();
        for (std::size_t v = 0; v < kc; ++v) sum += k[v] * s[v];
      }
      out(p, q) = sum;
    }
  }
  counters::add_real(static_cast<std::uint64_t>(out.size()) * kr * kc);
  return out;
}

Real2D fft_conv(const Real2D& input, const Real2D& kernel, ConvMode mode) {
  NoTimer none;
  return fft_conv_impl(input, kernel, nullptr, mode, none);
}

Real2D fft_conv(const Real2D& input, const PreparedKernel& kernel, ConvMode mode) {
  check_prepared(kernel, fft_padded_shape(input.shape(), kernel.kernel().shape()),
                 "fft_conv");
  NoTimer none;
  return fft_conv_impl(input, kernel.kernel(), &kernel.spectrum(), mode, none);
}

Real2D oaa_conv(const Real2D& input, const Real2D& kernel, ConvMode mode,
                const ConvOptions& options) {
  NoTimer none;
  return oaa_conv_impl(input, kernel, nullptr, mode, options.threads, none);
}

Real2D oaa_conv(const Real2D& input, const PreparedKernel& kernel, ConvMode mode,
                const ConvOptions& options) {
  check_prepared(kernel, oaa_padded_shape(kernel.kernel().shape()), "oaa_conv");
  NoTimer none;
  return oaa_conv_impl(input, kernel.kernel(), &kernel.spectrum(), mode,
                       options.threads, none);
}

Real2D conv(const Real2D& input, const Real2D& kernel, ConvMode mode,
            ConvBackend backend, const ConvOptions& options) {
  switch (backend) {
    case ConvBackend::Space: return space_conv(input, kernel, mode);
    case ConvBackend::Fft: return fft_conv(input, kernel, mode);
    case ConvBackend::Oaa: return oaa_conv(input, kernel, mode, options);
  }
  throw std::invalid_argument("conv: unknown backend");
}

PhaseTimings& PhaseTimings::operator+=(const PhaseTimings& o) {
  setup += o.setup;
  transform += o.transform;
  pointwise += o.pointwise;
  other += o.other;
  total += o.total;
  return *this;
}

PhaseTimings overhead_breakdown(const Real2D& input, const Real2D& kernel,
                                ConvBackend backend) {
  if (backend == ConvBackend::Space) {
    throw std::invalid_argument(
        "overhead_breakdown: the direct backend has no setup phase");
  }
  PhaseTimings t;
  LapTimer timer(t);
  const auto begin = std::chrono::steady_clock::now();
  if (backend == ConvBackend::Fft) {
    (void)fft_conv_impl(input, kernel, nullptr, ConvMode::Full, timer);
  } else {
    (void)oaa_conv_impl(input, kernel, nullptr, ConvMode::Full, 1, timer);
  }
  t.total = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin)
                .count();
  t.other = std::max(0.0, t.total - (t.setup + t.transform + t.pointwise));
  return t;
}

}  // namespace oaaconv
