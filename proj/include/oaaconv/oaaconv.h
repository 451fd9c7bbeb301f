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

/* C interface to the oaaconv library. All functions are safe to call from C;
 * failures return a status code and leave a message retrievable with
 * oaa_last_error_message() on the calling thread. Objects returned through
 * out-pointers are owned by the caller and released with the matching
 * *_destroy function. */
#ifndef OAACONV_OAACONV_H_
#define OAACONV_OAACONV_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(OAA_BUILDING_LIBRARY)
#define OAA_API __declspec(dllexport)
#else
#define OAA_API __declspec(dllimport)
#endif
#else
#define OAA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  OAA_OK = 0,
  OAA_ERR_INVALID_ARGUMENT = 1,
  OAA_ERR_OUT_OF_RANGE = 2,
  OAA_ERR_IO = 3,
  OAA_ERR_BAD_MAGIC = 4,
  OAA_ERR_TRUNCATED = 5,
  OAA_ERR_COUNT_MISMATCH = 6,
  OAA_ERR_CROSS_CHECK = 7,
  OAA_ERR_OUT_OF_MEMORY = 8,
  OAA_ERR_INTERNAL = 9
} oaa_status;

typedef enum { OAA_BACKEND_SPACE = 0, OAA_BACKEND_FFT = 1, OAA_BACKEND_OAA = 2 } oaa_backend;
typedef enum { OAA_MODE_FULL = 0, OAA_MODE_VALID = 1, OAA_MODE_SAME = 2 } oaa_mode;

typedef enum {
  OAA_EXPERIMENT_KERNEL_COUNT = 0,
  OAA_EXPERIMENT_KERNEL_SIZE = 1,
  OAA_EXPERIMENT_INPUT_SIZE = 2,
  OAA_EXPERIMENT_OVERHEAD = 3
} oaa_experiment;

typedef enum { OAA_PHASE_FORWARD = 0, OAA_PHASE_BACKWARD = 1, OAA_PHASE_BOTH = 2 } oaa_phase;

/* Bit set of backends, 1 << oaa_backend. */
#define OAA_BACKEND_BIT(b) (1u << (unsigned)(b))
#define OAA_ALL_BACKENDS \
  (OAA_BACKEND_BIT(OAA_BACKEND_SPACE) | OAA_BACKEND_BIT(OAA_BACKEND_FFT) | \
   OAA_BACKEND_BIT(OAA_BACKEND_OAA))

typedef struct oaa_array oaa_array;
typedef struct oaa_layer oaa_layer;
typedef struct oaa_records oaa_records;
typedef struct oaa_training oaa_training;

OAA_API const char* oaa_version(void);
OAA_API const char* oaa_status_string(oaa_status status);
/* Message of the last failure on this thread; empty after a success. */
OAA_API const char* oaa_last_error_message(void);

OAA_API oaa_status oaa_parse_backend(const char* name, oaa_backend* out);
OAA_API const char* oaa_backend_name(oaa_backend backend);
OAA_API oaa_status oaa_parse_experiment(const char* name, oaa_experiment* out);
OAA_API oaa_status oaa_parse_phase(const char* name, oaa_phase* out);
/* "a..b:step", "a..b" or "a". */
OAA_API oaa_status oaa_parse_range(const char* text, size_t* first, size_t* last,
                                   size_t* step);

/* Row-major real arrays. `data` may be NULL for a zero array. */
OAA_API oaa_status oaa_array_create(size_t rows, size_t cols, const double* data,
                                    oaa_array** out);
OAA_API void oaa_array_destroy(oaa_array* array);
OAA_API size_t oaa_array_rows(const oaa_array* array);
OAA_API size_t oaa_array_cols(const oaa_array* array);
OAA_API const double* oaa_array_data(const oaa_array* array);

/* True 2-D convolution. `threads` only affects OAA_BACKEND_OAA. */
OAA_API oaa_status oaa_convolve(const oaa_array* input, const oaa_array* kernel,
                                oaa_mode mode, oaa_backend backend, unsigned threads,
                                oaa_array** out);

typedef struct {
  uint64_t butterfly_multiplies;
  uint64_t hadamard_multiplies;
  uint64_t complex_multiplies;
  uint64_t real_multiplies;
  uint64_t transforms_2d;
  uint64_t backend_convolutions;
  size_t largest_transform_rows;
  size_t largest_transform_cols;
} oaa_op_counts;

/* Operation counters of the calling thread. */
OAA_API void oaa_counters_enable(int on);
OAA_API void oaa_counters_reset(void);
OAA_API void oaa_counters_snapshot(oaa_op_counts* out);

typedef struct {
  oaa_backend backend;
  int correlation;
  int cache_spectra;
  unsigned threads;
} oaa_layer_config;

OAA_API oaa_layer_config oaa_layer_config_default(void);

/* weights: K*C*rows*cols values, kernel-major then channel then row-major.
 * bias: K values, or NULL for zero. */
OAA_API oaa_status oaa_layer_create(size_t kernels, size_t channels, size_t kernel_rows,
                                    size_t kernel_cols, const double* weights,
                                    const double* bias, const oaa_layer_config* config,
                                    oaa_layer** out);
OAA_API void oaa_layer_destroy(oaa_layer* layer);
OAA_API oaa_status oaa_layer_set_backend(oaa_layer* layer, oaa_backend backend);
OAA_API oaa_status oaa_layer_output_shape(const oaa_layer* layer, size_t input_rows,
                                          size_t input_cols, size_t* out_rows,
                                          size_t* out_cols);
/* input: C*rows*cols values. output: K*out_rows*out_cols values. */
OAA_API oaa_status oaa_layer_forward(const oaa_layer* layer, size_t rows, size_t cols,
                                     const double* input, double* output);
/* delta: K*out_rows*out_cols. grad_input: C*rows*cols. grad_kernels: same
 * layout as the weights. grad_bias: K. Any output pointer may be NULL. */
OAA_API oaa_status oaa_layer_backward(const oaa_layer* layer, size_t rows, size_t cols,
                                      const double* input, const double* delta,
                                      double* grad_input, double* grad_kernels,
                                      double* grad_bias);

typedef struct {
  oaa_experiment experiment;
  size_t input_size;
  size_t kernel_size;
  /* Kernel counts, kernel sizes or input sizes depending on the experiment. */
  size_t sweep_first;
  size_t sweep_last;
  size_t sweep_step;
  size_t num_kernels;
  size_t repeats;
  oaa_phase phase;
  unsigned backends; /* OAA_BACKEND_BIT set */
  uint64_t seed;
  unsigned threads;
  int cache_kernel_spectra;
} oaa_bench_spec;

OAA_API oaa_status oaa_bench_spec_default(oaa_experiment experiment, oaa_phase phase,
                                          oaa_bench_spec* out);
OAA_API oaa_status oaa_bench_run(const oaa_bench_spec* spec, oaa_records** out);

typedef struct {
  oaa_experiment experiment;
  oaa_phase phase; /* forward or backward */
  oaa_backend backend;
  size_t input_rows;
  size_t input_cols;
  size_t kernel_rows;
  size_t kernel_cols;
  size_t num_kernels;
  size_t channels;
  size_t repeats;
  uint64_t seed;
  unsigned threads;
  double mean_seconds;
  uint64_t complex_multiplies;
  uint64_t real_multiplies;
  int has_setup_fraction;
  double setup_fraction;
  double speedup_vs_space;
} oaa_record;

OAA_API size_t oaa_records_count(const oaa_records* records);
OAA_API oaa_status oaa_records_get(const oaa_records* records, size_t index, oaa_record* out);
/* Copies min(capacity, repeats) per-repeat times. */
OAA_API oaa_status oaa_records_repeat_seconds(const oaa_records* records, size_t index,
                                              double* out, size_t capacity);
OAA_API oaa_status oaa_records_write_csv(const oaa_records* records, const char* path);
/* Aligned text table; the string lives as long as the records. */
OAA_API const char* oaa_records_table(const oaa_records* records);
OAA_API void oaa_records_destroy(oaa_records* records);

typedef struct {
  oaa_backend backend;
  uint64_t seed;
  double learning_rate;
  size_t epochs;
  size_t batch_size;
  /* "synthetic" or a directory with MNIST IDX files; NULL means synthetic. */
  const char* dataset;
  size_t kernels;
  size_t kernel_size;
  int cache_spectra;
  size_t classes;
  size_t per_class;
  size_t image_size;
  double noise;
} oaa_train_config;

OAA_API oaa_train_config oaa_train_config_default(void);
OAA_API oaa_status oaa_train(const oaa_train_config* config, oaa_training** out);
/* Trace rows: epoch 0 is the untrained network. */
OAA_API size_t oaa_training_trace_length(const oaa_training* training);
OAA_API oaa_status oaa_training_trace(const oaa_training* training, size_t index,
                                      size_t* epoch, double* mean_loss, double* accuracy);
OAA_API oaa_status oaa_training_write_trace(const oaa_training* training, const char* path);
/* Predicted class for every training sample; `out` holds samples values. */
OAA_API size_t oaa_training_samples(const oaa_training* training);
OAA_API oaa_status oaa_training_predictions(const oaa_training* training, size_t* out);
OAA_API void oaa_training_destroy(oaa_training* training);

#ifdef __cplusplus
}
#endif

#endif /* OAACONV_OAACONV_H_ */
