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

#include "oaaconv/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

#include "oaaconv/counters.hpp"

namespace oaaconv::bench {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kCrossCheckLimit = 128;
constexpr double kCrossCheckTolerance = 1e-8;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::mt19937_64 point_rng(std::uint64_t seed, std::size_t point) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(point)};
  return std::mt19937_64(seq);
}

Real2D uniform_array(std::mt19937_64& rng, Shape s) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Real2D a(s);
  for (double& v : a.values()) v = dist(rng);
  return a;
}

std::vector<Phase> phases_of(PhaseSelection p) {
  switch (p) {
    case PhaseSelection::Forward: return {Phase::Forward};
    case PhaseSelection::Backward: return {Phase::Backward};
    case PhaseSelection::Both: return {Phase::Forward, Phase::Backward};
  }
  return {};
}

// Space first so its result and time serve as the reference.
std::vector<ConvBackend> timing_order(const std::vector<ConvBackend>& selected) {
  std::vector<ConvBackend> order{ConvBackend::Space};
  for (ConvBackend b : selected) {
    if (std::find(order.begin(), order.end(), b) == order.end()) order.push_back(b);
  }
  return order;
}

bool selected(const ExperimentSpec& spec, ConvBackend b) {
  return std::find(spec.backends.begin(), spec.backends.end(), b) != spec.backends.end();
}

double relative_diff(const Real2D& a, const Real2D& ref) {
  return max_abs_diff(a, ref) / std::max(1.0, max_abs(ref));
}

using LayerResult = std::variant<Tensor3D, LayerGradients>;

double relative_diff(const LayerResult& a, const LayerResult& ref) {
  double d = 0.0;
  if (const auto* t = std::get_if<Tensor3D>(&a)) {
    const auto& r = std::get<Tensor3D>(ref);
    for (std::size_t k = 0; k < t->channels(); ++k) d = std::max(d, relative_diff((*t)[k], r[k]));
    return d;
  }
  const auto& g = std::get<LayerGradients>(a);
  const auto& r = std::get<LayerGradients>(ref);
  for (std::size_t c = 0; c < g.grad_input.channels(); ++c) {
    d = std::max(d, relative_diff(g.grad_input[c], r.grad_input[c]));
  }
  for (std::size_t k = 0; k < g.grad_kernels.kernels(); ++k) {
    for (std::size_t c = 0; c < g.grad_kernels.channels(); ++c) {
      d = std::max(d, relative_diff(g.grad_kernels[k][c], r.grad_kernels[k][c]));
    }
  }
  return d;
}

void check_against_space(double diff, ConvBackend backend, Shape input, Shape kernel) {
  if (!(diff <= kCrossCheckTolerance)) {
    char msg[256];
    std::snprintf(msg, sizeof msg,
                  "cross-check failed: %s differs from space by %.3g (relative) for "
                  "input %s, kernel %s",
                  std::string(to_string(backend)).c_str(), diff,
                  to_string(input).c_str(), to_string(kernel).c_str());
    throw CrossCheckError(msg);
  }
}

struct Measurement {
  std::vector<double> times;
  counters::OpCounts counts;
};

template <typename F>
Measurement measure(std::size_t repeats, F&& call) {
  Measurement m;
  {
    counters::ScopedCounting scope;
    call();
    m.counts = scope.counts();
  }
  m.times.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    call();
    m.times.push_back(seconds_since(start));
  }
  return m;
}

TimingRecord make_record(const ExperimentSpec& spec, Phase phase, ConvBackend backend,
                         Shape input, Shape kernel, std::size_t num_kernels,
                         const Measurement& m) {
  TimingRecord rec;
  rec.experiment = spec.experiment;
  rec.phase = phase;
  rec.backend = backend;
  rec.input = input;
  rec.kernel = kernel;
  rec.num_kernels = num_kernels;
  rec.channels = 1;
  rec.repeats = spec.repeats;
  rec.seed = spec.seed;
  rec.threads = spec.threads;
  rec.repeat_seconds = m.times;
  rec.mean_seconds = mean_of(m.times);
  rec.complex_multiplies = m.counts.complex_multiplies();
  rec.real_multiplies = m.counts.real_multiplies;
  return rec;
}

// One single-channel layer configuration, every selected phase and backend.
void run_layer_point(const ExperimentSpec& spec, std::size_t point, std::size_t N,
                     std::size_t n, std::size_t K, std::vector<TimingRecord>& out) {
  const Shape in_shape{N, N};
  const Shape k_shape{n, n};
  auto rng = point_rng(spec.seed, point);
  const Tensor3D input({uniform_array(rng, in_shape)});
  std::vector<Tensor3D> ks;
  ks.reserve(K);
  for (std::size_t k = 0; k < K; ++k) ks.push_back(Tensor3D({uniform_array(rng, k_shape)}));
  const KernelSet kernels(std::move(ks));
  std::vector<double> bias(K);
  for (double& b : bias) b = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  const Shape out_shape{N - n + 1, N - n + 1};
  std::vector<Real2D> dch;
  dch.reserve(K);
  for (std::size_t k = 0; k < K; ++k) dch.push_back(uniform_array(rng, out_shape));
  const Tensor3D delta(std::move(dch));

  for (Phase phase : phases_of(spec.phase)) {
    std::vector<std::pair<ConvBackend, Measurement>> measured;
    std::optional<LayerResult> reference;
    for (ConvBackend backend : timing_order(spec.backends)) {
      const ConvLayer layer(kernels, bias,
                            {.backend = backend,
                             .cache_spectra = spec.cache_kernel_spectra,
                             .threads = spec.threads});
      auto call = [&]() -> LayerResult {
        if (phase == Phase::Forward) return layer.forward(input);
        return layer.backward(input, delta);
      };
      LayerResult warm = call();
      if (N <= kCrossCheckLimit) {
        if (backend == ConvBackend::Space) {
          reference = std::move(warm);
        } else {
          check_against_space(relative_diff(warm, *reference), backend, in_shape, k_shape);
        }
      }
      measured.emplace_back(backend, measure(spec.repeats, [&] { (void)call(); }));
    }
    const double space_mean = mean_of(measured.front().second.times);
    for (ConvBackend backend : spec.backends) {
      const auto it = std::find_if(measured.begin(), measured.end(),
                                   [&](const auto& p) { return p.first == backend; });
      TimingRecord rec = make_record(spec, phase, backend, in_shape, k_shape, K, it->second);
      rec.speedup_vs_space =
          backend == ConvBackend::Space ? 1.0 : space_mean / rec.mean_seconds;
      out.push_back(std::move(rec));
    }
  }
}

void require_experiment(const ExperimentSpec& spec, Experiment e) {
  validate(spec);
  if (spec.experiment != e) {
    throw std::invalid_argument("spec is for experiment " +
                                std::string(to_string(spec.experiment)) + ", not " +
                                std::string(to_string(e)));
  }
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::KernelCount: return "kernel-count";
    case Experiment::KernelSize: return "kernel-size";
    case Experiment::InputSize: return "input-size";
    case Experiment::Overhead: return "overhead";
  }
  return "?";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (Experiment e : {Experiment::KernelCount, Experiment::KernelSize,
                       Experiment::InputSize, Experiment::Overhead}) {
    if (name == to_string(e)) return e;
  }
  return std::nullopt;
}

std::string_view to_string(Phase p) {
  return p == Phase::Forward ? "forward" : "backward";
}

std::optional<PhaseSelection> parse_phase(std::string_view name) {
  if (name == "forward") return PhaseSelection::Forward;
  if (name == "backward") return PhaseSelection::Backward;
  if (name == "both") return PhaseSelection::Both;
  return std::nullopt;
}

std::vector<std::size_t> SweepRange::values() const {
  std::vector<std::size_t> v;
  if (step == 0) return v;
  for (std::size_t x = first; x <= last; x += step) v.push_back(x);
  return v;
}

SweepRange parse_range(std::string_view text) {
  auto number = [&](std::string_view s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) {
      throw std::invalid_argument("bad range '" + std::string(text) +
                                  "': expected a..b:step");
    }
    return std::stoull(std::string(s));
  };
  SweepRange r;
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    r.first = r.last = number(text);
    r.step = 1;
    return r;
  }
  r.first = number(text.substr(0, dots));
  std::string_view rest = text.substr(dots + 2);
  const auto colon = rest.find(':');
  r.last = number(rest.substr(0, colon));
  r.step = colon == std::string_view::npos ? 1 : number(rest.substr(colon + 1));
  return r;
}

ExperimentSpec default_spec(Experiment e, PhaseSelection phase) {
  ExperimentSpec s;
  s.experiment = e;
  s.phase = phase;
  switch (e) {
    case Experiment::KernelCount:
      s.input_size = 32;
      s.kernel_size = 5;
      s.sweep = {25, 750, 25};
      break;
    case Experiment::KernelSize:
      s.input_size = 64;
      s.num_kernels = 100;
      s.sweep = {1, 64, 1};
      s.kernel_size = 0;
      break;
    case Experiment::InputSize:
      s.kernel_size = 5;
      s.num_kernels = 100;
      s.sweep = {4, 256, phase == PhaseSelection::Forward ? 4u : 8u};
      s.input_size = 0;
      break;
    case Experiment::Overhead:
      s.input_size = 224;
      s.kernel_size = 8;
      s.sweep = {1, 1, 1};
      s.num_kernels = 1;
      s.phase = PhaseSelection::Forward;
      s.backends = {ConvBackend::Fft, ConvBackend::Oaa};
      break;
  }
  return s;
}

void validate(const ExperimentSpec& spec) {
  if (spec.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (spec.backends.empty()) throw std::invalid_argument("no backends selected");
  if (spec.threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (spec.experiment != Experiment::Overhead) {
    if (spec.sweep.step < 1 || spec.sweep.first < 1 || spec.sweep.first > spec.sweep.last) {
      throw std::invalid_argument("sweep range must be non-empty with sizes >= 1");
    }
  }
  const bool sweeps_input = spec.experiment == Experiment::InputSize;
  const bool sweeps_kernel = spec.experiment == Experiment::KernelSize;
  if (!sweeps_input && spec.input_size < 1) {
    throw std::invalid_argument("input size must be >= 1");
  }
  if (!sweeps_kernel && spec.kernel_size < 1) {
    throw std::invalid_argument("kernel size must be >= 1");
  }
  if (spec.experiment != Experiment::KernelCount && spec.experiment != Experiment::Overhead &&
      spec.num_kernels < 1) {
    throw std::invalid_argument("kernel count must be >= 1");
  }
  if (spec.experiment == Experiment::Overhead &&
      std::none_of(spec.backends.begin(), spec.backends.end(),
                   [](ConvBackend b) { return b != ConvBackend::Space; })) {
    throw std::invalid_argument("overhead needs the fft or oaa backend");
  }
}

std::vector<TimingRecord> run_kernel_count_sweep(const ExperimentSpec& spec) {
  require_experiment(spec, Experiment::KernelCount);
  if (spec.kernel_size > spec.input_size) {
    throw std::invalid_argument("kernel larger than the input");
  }
  std::vector<TimingRecord> out;
  const auto counts = spec.sweep.values();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    run_layer_point(spec, i, spec.input_size, spec.kernel_size, counts[i], out);
  }
  return out;
}

// Points where the kernel does not fit inside the input are skipped.
std::vector<TimingRecord> run_kernel_size_sweep(const ExperimentSpec& spec) {
  require_experiment(spec, Experiment::KernelSize);
  std::vector<TimingRecord> out;
  const auto sizes = spec.sweep.values();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] > spec.input_size) continue;
    run_layer_point(spec, i, spec.input_size, sizes[i], spec.num_kernels, out);
  }
  return out;
}

std::vector<TimingRecord> run_input_size_sweep(const ExperimentSpec& spec) {
  require_experiment(spec, Experiment::InputSize);
  std::vector<TimingRecord> out;
  const auto sizes = spec.sweep.values();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (spec.kernel_size > sizes[i]) continue;
    run_layer_point(spec, i, sizes[i], spec.kernel_size, spec.num_kernels, out);
  }
  return out;
}

std::vector<TimingRecord> run_overhead(const ExperimentSpec& spec) {
  require_experiment(spec, Experiment::Overhead);
  const Shape in_shape{spec.input_size, spec.input_size};
  const Shape k_shape{spec.kernel_size, spec.kernel_size};
  auto rng = point_rng(spec.seed, 0);
  const Real2D input = uniform_array(rng, in_shape);
  const Real2D kernel = uniform_array(rng, k_shape);

  (void)space_conv(input, kernel, ConvMode::Full);
  const Measurement space = measure(
      spec.repeats, [&] { (void)space_conv(input, kernel, ConvMode::Full); });
  const double space_mean = mean_of(space.times);
  const Real2D reference = space_conv(input, kernel, ConvMode::Full);

  std::vector<TimingRecord> out;
  for (ConvBackend backend : {ConvBackend::Fft, ConvBackend::Oaa}) {
    if (!selected(spec, backend)) continue;
    const Real2D result = conv(input, kernel, ConvMode::Full, backend);
    if (spec.input_size <= kCrossCheckLimit) {
      check_against_space(relative_diff(result, reference), backend, in_shape, k_shape);
    }
    Measurement m;
    {
      counters::ScopedCounting scope;
      (void)conv(input, kernel, ConvMode::Full, backend);
      m.counts = scope.counts();
    }
    (void)overhead_breakdown(input, kernel, backend);
    PhaseTimings sum;
    for (std::size_t r = 0; r < spec.repeats; ++r) {
      const PhaseTimings t = overhead_breakdown(input, kernel, backend);
      sum += t;
      m.times.push_back(t.total);
    }
    TimingRecord rec = make_record(spec, Phase::Forward, backend, in_shape, k_shape, 1, m);
    rec.setup_fraction = sum.setup_fraction();
    rec.speedup_vs_space = space_mean / rec.mean_seconds;
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<TimingRecord> run(const ExperimentSpec& spec) {
  switch (spec.experiment) {
    case Experiment::KernelCount: return run_kernel_count_sweep(spec);
    case Experiment::KernelSize: return run_kernel_size_sweep(spec);
    case Experiment::InputSize: return run_input_size_sweep(spec);
    case Experiment::Overhead: return run_overhead(spec);
  }
  return {};
}

}  // namespace oaaconv::bench
