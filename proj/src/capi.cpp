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

#include "oaaconv/oaaconv.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "oaaconv/bench.hpp"
#include "oaaconv/conv.hpp"
#include "oaaconv/counters.hpp"
#include "oaaconv/dataset.hpp"
#include "oaaconv/layer.hpp"
#include "oaaconv/trainer.hpp"

using namespace oaaconv;

struct oaa_array {
  Real2D value;
};

struct oaa_layer {
  ConvLayer value;
};

struct oaa_records {
  std::vector<bench::TimingRecord> value;
  std::string table;
};

struct oaa_training {
  TrainResult result;
  Dataset data;
};

namespace {

thread_local std::string last_error;

oaa_status fail(oaa_status status, const char* what) {
  last_error = what;
  return status;
}

oaa_status translate_current() {
  try {
    throw;
  } catch (const IdxError& e) {
    switch (e.kind()) {
      case IdxError::Kind::BadMagic: return fail(OAA_ERR_BAD_MAGIC, e.what());
      case IdxError::Kind::Truncated: return fail(OAA_ERR_TRUNCATED, e.what());
      case IdxError::Kind::CountMismatch: return fail(OAA_ERR_COUNT_MISMATCH, e.what());
      case IdxError::Kind::Io: return fail(OAA_ERR_IO, e.what());
    }
    return fail(OAA_ERR_IO, e.what());
  } catch (const bench::CrossCheckError& e) {
    return fail(OAA_ERR_CROSS_CHECK, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(OAA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(OAA_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(OAA_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::runtime_error& e) {
    return fail(OAA_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(OAA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(OAA_ERR_INTERNAL, "unknown error");
  }
}

template <typename F>
oaa_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return OAA_OK;
  } catch (...) {
    return translate_current();
  }
}

#define OAA_REQUIRE(cond, msg) \
  if (!(cond)) return fail(OAA_ERR_INVALID_ARGUMENT, msg)

ConvBackend to_cpp(oaa_backend b) {
  switch (b) {
    case OAA_BACKEND_SPACE: return ConvBackend::Space;
    case OAA_BACKEND_FFT: return ConvBackend::Fft;
    case OAA_BACKEND_OAA: return ConvBackend::Oaa;
  }
  throw std::invalid_argument("unknown backend " + std::to_string(static_cast<int>(b)));
}

oaa_backend to_c(ConvBackend b) {
  switch (b) {
    case ConvBackend::Space: return OAA_BACKEND_SPACE;
    case ConvBackend::Fft: return OAA_BACKEND_FFT;
    case ConvBackend::Oaa: return OAA_BACKEND_OAA;
  }
  return OAA_BACKEND_SPACE;
}

ConvMode to_cpp(oaa_mode m) {
  switch (m) {
    case OAA_MODE_FULL: return ConvMode::Full;
    case OAA_MODE_VALID: return ConvMode::Valid;
    case OAA_MODE_SAME: return ConvMode::Same;
  }
  throw std::invalid_argument("unknown convolution mode " + std::to_string(static_cast<int>(m)));
}

bench::Experiment to_cpp(oaa_experiment e) {
  switch (e) {
    case OAA_EXPERIMENT_KERNEL_COUNT: return bench::Experiment::KernelCount;
    case OAA_EXPERIMENT_KERNEL_SIZE: return bench::Experiment::KernelSize;
    case OAA_EXPERIMENT_INPUT_SIZE: return bench::Experiment::InputSize;
    case OAA_EXPERIMENT_OVERHEAD: return bench::Experiment::Overhead;
  }
  throw std::invalid_argument("unknown experiment " + std::to_string(static_cast<int>(e)));
}

oaa_experiment to_c(bench::Experiment e) {
  return static_cast<oaa_experiment>(static_cast<int>(e));
}

bench::PhaseSelection to_cpp(oaa_phase p) {
  switch (p) {
    case OAA_PHASE_FORWARD: return bench::PhaseSelection::Forward;
    case OAA_PHASE_BACKWARD: return bench::PhaseSelection::Backward;
    case OAA_PHASE_BOTH: return bench::PhaseSelection::Both;
  }
  throw std::invalid_argument("unknown phase " + std::to_string(static_cast<int>(p)));
}

Tensor3D tensor_from(const double* data, std::size_t channels, std::size_t rows,
                     std::size_t cols) {
  std::vector<Real2D> ch;
  ch.reserve(channels);
  const std::size_t per = rows * cols;
  for (std::size_t c = 0; c < channels; ++c) {
    ch.emplace_back(rows, cols, std::vector<double>(data + c * per, data + (c + 1) * per));
  }
  return Tensor3D(std::move(ch));
}

double* copy_out(const Real2D& a, double* dst) {
  return std::copy(a.values().begin(), a.values().end(), dst);
}

}  // namespace

extern "C" {

const char* oaa_version(void) { return "0.1.0"; }

const char* oaa_status_string(oaa_status status) {
  switch (status) {
    case OAA_OK: return "ok";
    case OAA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case OAA_ERR_OUT_OF_RANGE: return "out of range";
    case OAA_ERR_IO: return "i/o error";
    case OAA_ERR_BAD_MAGIC: return "bad magic number";
    case OAA_ERR_TRUNCATED: return "truncated file";
    case OAA_ERR_COUNT_MISMATCH: return "count mismatch";
    case OAA_ERR_CROSS_CHECK: return "cross-check failed";
    case OAA_ERR_OUT_OF_MEMORY: return "out of memory";
    case OAA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* oaa_last_error_message(void) { return last_error.c_str(); }

oaa_status oaa_parse_backend(const char* name, oaa_backend* out) {
  OAA_REQUIRE(name && out, "null argument");
  const auto b = parse_backend(name);
  if (!b) {
    return fail(OAA_ERR_INVALID_ARGUMENT,
                ("unknown backend '" + std::string(name) + "'").c_str());
  }
  *out = to_c(*b);
  last_error.clear();
  return OAA_OK;
}

const char* oaa_backend_name(oaa_backend backend) {
  switch (backend) {
    case OAA_BACKEND_SPACE: return "space";
    case OAA_BACKEND_FFT: return "fft";
    case OAA_BACKEND_OAA: return "oaa";
  }
  return "?";
}

oaa_status oaa_parse_experiment(const char* name, oaa_experiment* out) {
  OAA_REQUIRE(name && out, "null argument");
  const auto e = bench::parse_experiment(name);
  if (!e) {
    return fail(OAA_ERR_INVALID_ARGUMENT,
                ("unknown experiment '" + std::string(name) + "'").c_str());
  }
  *out = to_c(*e);
  last_error.clear();
  return OAA_OK;
}

oaa_status oaa_parse_phase(const char* name, oaa_phase* out) {
  OAA_REQUIRE(name && out, "null argument");
  const auto p = bench::parse_phase(name);
  if (!p) {
    return fail(OAA_ERR_INVALID_ARGUMENT, ("unknown phase '" + std::string(name) + "'").c_str());
  }
  *out = static_cast<oaa_phase>(static_cast<int>(*p));
  last_error.clear();
  return OAA_OK;
}

oaa_status oaa_parse_range(const char* text, size_t* first, size_t* last, size_t* step) {
  OAA_REQUIRE(text && first && last && step, "null argument");
  return guarded([&] {
    const auto r = bench::parse_range(text);
    *first = r.first;
    *last = r.last;
    *step = r.step;
  });
}

oaa_status oaa_array_create(size_t rows, size_t cols, const double* data, oaa_array** out) {
  OAA_REQUIRE(out, "null output pointer");
  return guarded([&] {
    Real2D a(rows, cols);
    if (data) std::copy(data, data + rows * cols, a.data());
    *out = new oaa_array{std::move(a)};
  });
}

void oaa_array_destroy(oaa_array* array) { delete array; }
size_t oaa_array_rows(const oaa_array* array) { return array ? array->value.rows() : 0; }
size_t oaa_array_cols(const oaa_array* array) { return array ? array->value.cols() : 0; }
const double* oaa_array_data(const oaa_array* array) {
  return array ? array->value.data() : nullptr;
}

oaa_status oaa_convolve(const oaa_array* input, const oaa_array* kernel, oaa_mode mode,
                        oaa_backend backend, unsigned threads, oaa_array** out) {
  OAA_REQUIRE(input && kernel && out, "null argument");
  return guarded([&] {
    Real2D r = conv(input->value, kernel->value, to_cpp(mode), to_cpp(backend),
                    {.threads = threads == 0 ? 1u : threads});
    *out = new oaa_array{std::move(r)};
  });
}

void oaa_counters_enable(int on) { counters::set_enabled(on != 0); }
void oaa_counters_reset(void) { counters::reset(); }

void oaa_counters_snapshot(oaa_op_counts* out) {
  if (!out) return;
  const counters::OpCounts c = counters::snapshot();
  *out = {c.butterfly_multiplies,     c.hadamard_multiplies,    c.complex_multiplies(),
          c.real_multiplies,          c.transforms_2d,          c.backend_convolutions,
          c.largest_transform.rows,   c.largest_transform.cols};
}

oaa_layer_config oaa_layer_config_default(void) {
  const LayerConfig d;
  return {to_c(d.backend), d.correlation ? 1 : 0, d.cache_spectra ? 1 : 0, d.threads};
}

oaa_status oaa_layer_create(size_t kernels, size_t channels, size_t kernel_rows,
                            size_t kernel_cols, const double* weights, const double* bias,
                            const oaa_layer_config* config, oaa_layer** out) {
  OAA_REQUIRE(weights && out, "null argument");
  OAA_REQUIRE(kernels > 0 && channels > 0, "kernel and channel counts must be positive");
  return guarded([&] {
    const oaa_layer_config cfg = config ? *config : oaa_layer_config_default();
    std::vector<Tensor3D> ks;
    ks.reserve(kernels);
    const std::size_t per_kernel = channels * kernel_rows * kernel_cols;
    for (std::size_t k = 0; k < kernels; ++k) {
      ks.push_back(tensor_from(weights + k * per_kernel, channels, kernel_rows, kernel_cols));
    }
    std::vector<double> b(kernels, 0.0);
    if (bias) std::copy(bias, bias + kernels, b.begin());
    LayerConfig lc{.backend = to_cpp(cfg.backend),
                   .correlation = cfg.correlation != 0,
                   .cache_spectra = cfg.cache_spectra != 0,
                   .threads = cfg.threads == 0 ? 1u : cfg.threads};
    *out = new oaa_layer{ConvLayer(KernelSet(std::move(ks)), std::move(b), lc)};
  });
}

void oaa_layer_destroy(oaa_layer* layer) { delete layer; }

oaa_status oaa_layer_set_backend(oaa_layer* layer, oaa_backend backend) {
  OAA_REQUIRE(layer, "null layer");
  return guarded([&] { layer->value.set_backend(to_cpp(backend)); });
}

oaa_status oaa_layer_output_shape(const oaa_layer* layer, size_t input_rows,
                                  size_t input_cols, size_t* out_rows, size_t* out_cols) {
  OAA_REQUIRE(layer && out_rows && out_cols, "null argument");
  return guarded([&] {
    const Shape s = layer->value.output_shape({input_rows, input_cols});
    *out_rows = s.rows;
    *out_cols = s.cols;
  });
}

oaa_status oaa_layer_forward(const oaa_layer* layer, size_t rows, size_t cols,
                             const double* input, double* output) {
  OAA_REQUIRE(layer && input && output, "null argument");
  return guarded([&] {
    const Tensor3D y =
        layer->value.forward(tensor_from(input, layer->value.channels(), rows, cols));
    double* dst = output;
    for (const Real2D& ch : y) dst = copy_out(ch, dst);
  });
}

oaa_status oaa_layer_backward(const oaa_layer* layer, size_t rows, size_t cols,
                              const double* input, const double* delta, double* grad_input,
                              double* grad_kernels, double* grad_bias) {
  OAA_REQUIRE(layer && input && delta, "null argument");
  return guarded([&] {
    const ConvLayer& l = layer->value;
    const Shape out = l.output_shape({rows, cols});
    const LayerGradients g = l.backward(tensor_from(input, l.channels(), rows, cols),
                                        tensor_from(delta, l.num_kernels(), out.rows, out.cols));
    if (grad_input) {
      double* dst = grad_input;
      for (const Real2D& ch : g.grad_input) dst = copy_out(ch, dst);
    }
    if (grad_kernels) {
      double* dst = grad_kernels;
      for (std::size_t k = 0; k < g.grad_kernels.kernels(); ++k)
        for (const Real2D& ch : g.grad_kernels[k]) dst = copy_out(ch, dst);
    }
    if (grad_bias) std::copy(g.grad_bias.begin(), g.grad_bias.end(), grad_bias);
  });
}

oaa_status oaa_bench_spec_default(oaa_experiment experiment, oaa_phase phase,
                                  oaa_bench_spec* out) {
  OAA_REQUIRE(out, "null output pointer");
  return guarded([&] {
    const bench::ExperimentSpec s = bench::default_spec(to_cpp(experiment), to_cpp(phase));
    unsigned mask = 0;
    for (ConvBackend b : s.backends) mask |= OAA_BACKEND_BIT(to_c(b));
    *out = {experiment,  s.input_size,     s.kernel_size, s.sweep.first,
            s.sweep.last, s.sweep.step,    s.num_kernels, s.repeats,
            phase,        mask,            s.seed,        s.threads,
            s.cache_kernel_spectra ? 1 : 0};
  });
}

oaa_status oaa_bench_run(const oaa_bench_spec* spec, oaa_records** out) {
  OAA_REQUIRE(spec && out, "null argument");
  return guarded([&] {
    bench::ExperimentSpec s;
    s.experiment = to_cpp(spec->experiment);
    s.input_size = spec->input_size;
    s.kernel_size = spec->kernel_size;
    s.sweep = {spec->sweep_first, spec->sweep_last, spec->sweep_step};
    s.num_kernels = spec->num_kernels;
    s.repeats = spec->repeats;
    s.phase = to_cpp(spec->phase);
    s.backends.clear();
    for (oaa_backend b : {OAA_BACKEND_SPACE, OAA_BACKEND_FFT, OAA_BACKEND_OAA}) {
      if (spec->backends & OAA_BACKEND_BIT(b)) s.backends.push_back(to_cpp(b));
    }
    s.seed = spec->seed;
    s.threads = spec->threads;
    s.cache_kernel_spectra = spec->cache_kernel_spectra != 0;
    auto records = bench::run(s);
    std::ostringstream table;
    bench::write_table(records, table);
    *out = new oaa_records{std::move(records), table.str()};
  });
}

size_t oaa_records_count(const oaa_records* records) {
  return records ? records->value.size() : 0;
}

oaa_status oaa_records_get(const oaa_records* records, size_t index, oaa_record* out) {
  OAA_REQUIRE(records && out, "null argument");
  if (index >= records->value.size()) return fail(OAA_ERR_OUT_OF_RANGE, "record index out of range");
  const bench::TimingRecord& r = records->value[index];
  *out = {to_c(r.experiment),
          r.phase == Phase::Forward ? OAA_PHASE_FORWARD : OAA_PHASE_BACKWARD,
          to_c(r.backend),
          r.input.rows,
          r.input.cols,
          r.kernel.rows,
          r.kernel.cols,
          r.num_kernels,
          r.channels,
          r.repeats,
          r.seed,
          r.threads,
          r.mean_seconds,
          r.complex_multiplies,
          r.real_multiplies,
          r.setup_fraction ? 1 : 0,
          r.setup_fraction.value_or(0.0),
          r.speedup_vs_space};
  last_error.clear();
  return OAA_OK;
}

oaa_status oaa_records_repeat_seconds(const oaa_records* records, size_t index, double* out,
                                      size_t capacity) {
  OAA_REQUIRE(records && out, "null argument");
  if (index >= records->value.size()) return fail(OAA_ERR_OUT_OF_RANGE, "record index out of range");
  const auto& t = records->value[index].repeat_seconds;
  std::copy_n(t.begin(), std::min(capacity, t.size()), out);
  last_error.clear();
  return OAA_OK;
}

oaa_status oaa_records_write_csv(const oaa_records* records, const char* path) {
  OAA_REQUIRE(records && path, "null argument");
  return guarded([&] { bench::write_csv(records->value, std::filesystem::path(path)); });
}

const char* oaa_records_table(const oaa_records* records) {
  return records ? records->table.c_str() : "";
}

void oaa_records_destroy(oaa_records* records) { delete records; }

oaa_train_config oaa_train_config_default(void) {
  const TrainConfig d;
  return {to_c(d.backend), d.seed,        d.learning_rate,   d.epochs,       d.batch_size,
          "synthetic",     d.kernels,     d.kernel_size,     d.cache_spectra ? 1 : 0,
          d.classes,       d.per_class,   d.image_size,      d.noise};
}

oaa_status oaa_train(const oaa_train_config* config, oaa_training** out) {
  OAA_REQUIRE(config && out, "null argument");
  return guarded([&] {
    TrainConfig c;
    c.backend = to_cpp(config->backend);
    c.seed = config->seed;
    c.learning_rate = config->learning_rate;
    c.epochs = config->epochs;
    c.batch_size = config->batch_size;
    c.dataset = config->dataset ? config->dataset : "synthetic";
    c.kernels = config->kernels;
    c.kernel_size = config->kernel_size;
    c.cache_spectra = config->cache_spectra != 0;
    c.classes = config->classes;
    c.per_class = config->per_class;
    c.image_size = config->image_size;
    c.noise = config->noise;
    validate(c);
    Dataset data = load_dataset(c);
    TrainResult result = train(c, data);
    *out = new oaa_training{std::move(result), std::move(data)};
  });
}

size_t oaa_training_trace_length(const oaa_training* training) {
  return training ? training->result.trace.size() : 0;
}

oaa_status oaa_training_trace(const oaa_training* training, size_t index, size_t* epoch,
                              double* mean_loss, double* accuracy) {
  OAA_REQUIRE(training, "null training");
  if (index >= training->result.trace.size()) {
    return fail(OAA_ERR_OUT_OF_RANGE, "trace index out of range");
  }
  const EpochStats& e = training->result.trace[index];
  if (epoch) *epoch = e.epoch;
  if (mean_loss) *mean_loss = e.mean_loss;
  if (accuracy) *accuracy = e.accuracy;
  last_error.clear();
  return OAA_OK;
}

oaa_status oaa_training_write_trace(const oaa_training* training, const char* path) {
  OAA_REQUIRE(training && path, "null argument");
  return guarded([&] { write_trace_csv(training->result.trace, std::filesystem::path(path)); });
}

size_t oaa_training_samples(const oaa_training* training) {
  return training ? training->data.size() : 0;
}

oaa_status oaa_training_predictions(const oaa_training* training, size_t* out) {
  OAA_REQUIRE(training && out, "null argument");
  return guarded([&] {
    const auto p = predict_all(training->result.net, training->data);
    std::copy(p.begin(), p.end(), out);
  });
}

void oaa_training_destroy(oaa_training* training) { delete training; }

}  // extern "C"
