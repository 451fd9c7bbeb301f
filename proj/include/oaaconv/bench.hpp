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

#ifndef OAACONV_BENCH_HPP_
#define OAACONV_BENCH_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oaaconv/conv.hpp"
#include "oaaconv/layer.hpp"

namespace oaaconv::bench {

enum class Experiment { KernelCount, KernelSize, InputSize, Overhead };
enum class PhaseSelection { Forward, Backward, Both };

// kernel-count, kernel-size, input-size, overhead
std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);
std::string_view to_string(Phase p);
std::optional<PhaseSelection> parse_phase(std::string_view name);

// Inclusive arithmetic range first, first+step, ... <= last.
struct SweepRange {
  std::size_t first = 1;
  std::size_t last = 1;
  std::size_t step = 1;

  std::vector<std::size_t> values() const;
  friend bool operator==(const SweepRange&, const SweepRange&) = default;
};

// Parses "a..b:step" or "a..b" (step 1) or a single value.
SweepRange parse_range(std::string_view text);

struct ExperimentSpec {
  Experiment experiment = Experiment::KernelCount;
  std::size_t input_size = 32;
  std::size_t kernel_size = 5;
  // Kernel counts for KernelCount, kernel sizes for KernelSize, input sizes
  // for InputSize. Unused by Overhead.
  SweepRange sweep{25, 750, 25};
  // Kernel count when the sweep is over sizes.
  std::size_t num_kernels = 100;
  std::size_t repeats = 10;
  PhaseSelection phase = PhaseSelection::Forward;
  std::vector<ConvBackend> backends{ConvBackend::Space, ConvBackend::Fft, ConvBackend::Oaa};
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool cache_kernel_spectra = true;
};

// The configurations of the original experiments. The input-size sweep steps
// by 4 forward and by 8 otherwise.
ExperimentSpec default_spec(Experiment e, PhaseSelection phase = PhaseSelection::Forward);

void validate(const ExperimentSpec& spec);

struct TimingRecord {
  Experiment experiment = Experiment::KernelCount;
  Phase phase = Phase::Forward;
  ConvBackend backend = ConvBackend::Space;
  Shape input{0, 0};
  Shape kernel{0, 0};
  std::size_t num_kernels = 0;
  std::size_t channels = 0;
  std::size_t repeats = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double mean_seconds = 0.0;
  std::vector<double> repeat_seconds;
  std::uint64_t complex_multiplies = 0;
  std::uint64_t real_multiplies = 0;
  std::optional<double> setup_fraction;
  double speedup_vs_space = 0.0;
};

// Each sweep point draws its input and kernels uniform in [-1, 1] from the
// seed, runs one untimed warm-up per backend, then times `repeats` calls.
// Operation counts come from one steady-state call. The direct backend is
// always timed as the speedup reference but only reported when selected.
// Results of every backend are checked against the direct backend once per
// point when the input side is at most 128; a mismatch throws.
std::vector<TimingRecord> run_kernel_count_sweep(const ExperimentSpec& spec);
std::vector<TimingRecord> run_kernel_size_sweep(const ExperimentSpec& spec);
std::vector<TimingRecord> run_input_size_sweep(const ExperimentSpec& spec);
// Phase split of one Full-mode convolution for Fft and Oaa.
std::vector<TimingRecord> run_overhead(const ExperimentSpec& spec);
// Dispatches on spec.experiment.
std::vector<TimingRecord> run(const ExperimentSpec& spec);

class CrossCheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

extern const std::vector<std::string> kCsvColumns;

void write_csv(const std::vector<TimingRecord>& records, std::ostream& out);
void write_csv(const std::vector<TimingRecord>& records,
               const std::filesystem::path& path);
std::vector<TimingRecord> read_csv(std::istream& in);
std::vector<TimingRecord> read_csv(const std::filesystem::path& path);

// Aligned table with the CSV's columns, repeat times omitted.
void write_table(const std::vector<TimingRecord>& records, std::ostream& out);

}  // namespace oaaconv::bench

#endif  // OAACONV_BENCH_HPP_
