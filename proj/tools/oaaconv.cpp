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

// Command-line front end. Links only the C API.
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oaaconv/oaaconv.h"

namespace {

struct CliError {
  int code;
};

void check(oaa_status status) {
  if (status != OAA_OK) {
    std::fprintf(stderr, "error: %s: %s\n", oaa_status_string(status),
                 oaa_last_error_message());
    throw CliError{1};
  }
}

struct RecordsDeleter {
  void operator()(oaa_records* r) const { oaa_records_destroy(r); }
};
struct TrainingDeleter {
  void operator()(oaa_training* t) const { oaa_training_destroy(t); }
};

struct BenchOptions {
  std::string experiment;
  std::optional<std::size_t> input_size;
  std::optional<std::size_t> kernel_size;
  std::optional<std::size_t> num_kernels;
  std::string kernel_counts;
  std::string sizes;
  std::optional<std::size_t> repeats;
  std::string phase = "forward";
  std::string backends;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool no_cache = false;
  std::string csv;
};

struct TrainOptions {
  std::string backend = "space";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<double> lr;
  std::optional<std::size_t> batch;
  std::string data = "synthetic";
  std::string trace;
};

void apply_range(const std::string& text, oaa_bench_spec& spec) {
  check(oaa_parse_range(text.c_str(), &spec.sweep_first, &spec.sweep_last, &spec.sweep_step));
}

int run_bench(const BenchOptions& o) {
  oaa_experiment experiment;
  check(oaa_parse_experiment(o.experiment.c_str(), &experiment));
  oaa_phase phase;
  check(oaa_parse_phase(o.phase.c_str(), &phase));
  oaa_bench_spec spec;
  check(oaa_bench_spec_default(experiment, phase, &spec));

  if (o.input_size) spec.input_size = *o.input_size;
  if (o.kernel_size) spec.kernel_size = *o.kernel_size;
  if (o.num_kernels) spec.num_kernels = *o.num_kernels;
  if (!o.kernel_counts.empty()) {
    if (experiment != OAA_EXPERIMENT_KERNEL_COUNT) {
      std::fprintf(stderr, "error: --kernel-counts only applies to kernel-count\n");
      return 2;
    }
    apply_range(o.kernel_counts, spec);
  }
  if (!o.sizes.empty()) {
    if (experiment != OAA_EXPERIMENT_KERNEL_SIZE && experiment != OAA_EXPERIMENT_INPUT_SIZE) {
      std::fprintf(stderr, "error: --sizes only applies to kernel-size and input-size\n");
      return 2;
    }
    apply_range(o.sizes, spec);
  }
  if (o.repeats) spec.repeats = *o.repeats;
  if (o.seed) spec.seed = *o.seed;
  if (o.threads) spec.threads = *o.threads;
  if (o.no_cache) spec.cache_kernel_spectra = 0;
  if (!o.backends.empty()) {
    spec.backends = 0;
    std::stringstream ss(o.backends);
    std::string name;
    while (std::getline(ss, name, ',')) {
      oaa_backend b;
      check(oaa_parse_backend(name.c_str(), &b));
      spec.backends |= OAA_BACKEND_BIT(b);
    }
  }

  oaa_records* raw = nullptr;
  check(oaa_bench_run(&spec, &raw));
  std::unique_ptr<oaa_records, RecordsDeleter> records(raw);
  std::fputs(oaa_records_table(records.get()), stdout);
  std::printf("\ntimes cover convolution work only (no activation or bias overhead)\n");
  if (!o.csv.empty()) {
    check(oaa_records_write_csv(records.get(), o.csv.c_str()));
    std::printf("wrote %zu records to %s\n", oaa_records_count(records.get()), o.csv.c_str());
  }
  return 0;
}

int run_train(const TrainOptions& o) {
  oaa_train_config cfg = oaa_train_config_default();
  check(oaa_parse_backend(o.backend.c_str(), &cfg.backend));
  if (o.seed) cfg.seed = *o.seed;
  if (o.epochs) cfg.epochs = *o.epochs;
  if (o.lr) cfg.learning_rate = *o.lr;
  if (o.batch) cfg.batch_size = *o.batch;
  cfg.dataset = o.data.c_str();

  oaa_training* raw = nullptr;
  check(oaa_train(&cfg, &raw));
  std::unique_ptr<oaa_training, TrainingDeleter> training(raw);
  std::printf("backend %s, %zu samples\n", oaa_backend_name(cfg.backend),
              oaa_training_samples(training.get()));
  std::printf("%5s  %12s  %8s\n", "epoch", "mean_loss", "accuracy");
  for (std::size_t i = 0; i < oaa_training_trace_length(training.get()); ++i) {
    std::size_t epoch = 0;
    double loss = 0.0;
    double acc = 0.0;
    check(oaa_training_trace(training.get(), i, &epoch, &loss, &acc));
    std::printf("%5zu  %12.6f  %8.4f\n", epoch, loss, acc);
  }
  if (!o.trace.empty()) {
    check(oaa_training_write_trace(training.get(), o.trace.c_str()));
    std::printf("wrote trace to %s\n", o.trace.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct, FFT and overlap-and-add 2-D convolution benchmarks and trainer"};
  app.set_version_flag("--version", std::string(oaa_version()));
  app.require_subcommand(1);

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Run a timing experiment");
  b->add_option("experiment", bench.experiment,
                "kernel-count, kernel-size, input-size or overhead")
      ->required()
      ->check(CLI::IsMember({"kernel-count", "kernel-size", "input-size", "overhead"}));
  b->add_option("--input-size", bench.input_size, "Input side M");
  b->add_option("--kernel-size", bench.kernel_size, "Kernel side n");
  b->add_option("--kernels", bench.num_kernels, "Kernel count for size sweeps");
  auto* counts = b->add_option("--kernel-counts", bench.kernel_counts,
                               "Kernel-count sweep a..b:step");
  b->add_option("--sizes", bench.sizes, "Size sweep a..b:step")->excludes(counts);
  b->add_option("--repeats", bench.repeats, "Timed repeats per point")
      ->check(CLI::PositiveNumber);
  b->add_option("--phase", bench.phase, "forward, backward or both")
      ->check(CLI::IsMember({"forward", "backward", "both"}));
  b->add_option("--backends", bench.backends, "Comma-separated subset of space,fft,oaa");
  b->add_option("--seed", bench.seed, "Random seed");
  b->add_option("--threads", bench.threads, "Overlap-and-add worker threads")
      ->check(CLI::PositiveNumber);
  b->add_flag("--no-spectrum-cache", bench.no_cache, "Recompute kernel spectra on every call");
  b->add_option("--csv", bench.csv, "Write records to this CSV file");

  TrainOptions train;
  auto* t = app.add_subcommand("train", "Train the small network on one backend");
  t->add_option("--backend", train.backend, "space, fft or oaa")
      ->check(CLI::IsMember({"space", "fft", "oaa"}));
  t->add_option("--seed", train.seed, "Random seed");
  t->add_option("--epochs", train.epochs, "Epochs")->check(CLI::PositiveNumber);
  t->add_option("--lr", train.lr, "Learning rate")->check(CLI::PositiveNumber);
  t->add_option("--batch", train.batch, "Mini-batch size")->check(CLI::PositiveNumber);
  t->add_option("--data", train.data, "MNIST directory or 'synthetic'");
  t->add_option("--trace", train.trace, "Write the per-epoch trace CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (b->parsed()) return run_bench(bench);
    return run_train(train);
  } catch (const CliError& e) {
    return e.code;
  }
}
