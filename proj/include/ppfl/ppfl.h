/*
 * Copyright 2026 The PPFL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the privacy-preserving federated learning simulator.
 *
 * Every function returning ppfl_status leaves a human-readable message in
 * ppfl_last_error() on failure (thread-local, valid until the next failing
 * call on the same thread). Handles are opaque and owned by the caller. */

#ifndef PPFL_PPFL_H_
#define PPFL_PPFL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PPFL_BUILDING_LIBRARY)
#    define PPFL_API __declspec(dllexport)
#  else
#    define PPFL_API __declspec(dllimport)
#  endif
#else
#  define PPFL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ppfl_status {
  PPFL_OK = 0,
  PPFL_ERR_PARAMETER = 1,
  PPFL_ERR_CONFIG = 2,
  PPFL_ERR_PROTOCOL = 3,
  PPFL_ERR_ENCODING = 4,
  PPFL_ERR_INGESTION = 5,
  PPFL_ERR_TRAINING = 6,
  PPFL_ERR_EVALUATION = 7,
  PPFL_ERR_KERNEL = 8,
  PPFL_ERR_INVALID_ARGUMENT = 9, /* null handle, bad index, short buffer */
  PPFL_ERR_INTERNAL = 10
} ppfl_status;

typedef struct ppfl_config ppfl_config;
typedef struct ppfl_result ppfl_result;

typedef struct ppfl_metrics {
  double loss;
  double mcc;
  uint64_t tp;
  uint64_t fp;
  uint64_t tn;
  uint64_t fn;
} ppfl_metrics;

/* Milliseconds; per-user figures are means over clients (and iterations). */
typedef struct ppfl_timing {
  size_t clients;
  size_t iterations;
  double total_ms;
  double server_ms_per_iteration;
  double dh_setup_ms;
  double training_ms;
  double encrypt_ms;
} ppfl_timing;

PPFL_API const char* ppfl_version(void);
PPFL_API const char* ppfl_last_error(void);
PPFL_API const char* ppfl_status_name(ppfl_status status);
/* Process exit code for a status: 0 success, 1 validation, 2 run abort. */
PPFL_API int ppfl_exit_code(ppfl_status status);

PPFL_API ppfl_status ppfl_config_create(ppfl_config** out);
PPFL_API void ppfl_config_destroy(ppfl_config* config);
PPFL_API ppfl_status ppfl_config_set(ppfl_config* config, const char* key,
                                     const char* value);
/* Copies the canonical value text including the terminator. When `capacity`
 * is too small, stores the required size in *needed and fails. */
PPFL_API ppfl_status ppfl_config_get(const ppfl_config* config, const char* key,
                                     char* buffer, size_t capacity,
                                     size_t* needed);
/* key = value text, or a manifest.json from an earlier run. */
PPFL_API ppfl_status ppfl_config_load_file(ppfl_config* config, const char* path);
PPFL_API ppfl_status ppfl_config_validate(const ppfl_config* config);

/* Runs one simulation; writes artifacts when the config's `out` is set. */
PPFL_API ppfl_status ppfl_run(const ppfl_config* config, ppfl_result** out);
PPFL_API void ppfl_result_destroy(ppfl_result* result);

PPFL_API size_t ppfl_result_iterations(const ppfl_result* result);
PPFL_API size_t ppfl_result_weight_count(const ppfl_result* result);
/* Broadcast model after `iteration` (0-based); `capacity` >= weight count. */
PPFL_API ppfl_status ppfl_result_weights(const ppfl_result* result,
                                         size_t iteration, double* out,
                                         size_t capacity);
PPFL_API ppfl_status ppfl_result_metrics(const ppfl_result* result,
                                         size_t iteration, ppfl_metrics* out);
PPFL_API ppfl_status ppfl_result_timing(const ppfl_result* result,
                                        ppfl_timing* out);
/* Hex SHA-256 over the delivery trace; owned by the result. */
PPFL_API const char* ppfl_result_trace_hash(const ppfl_result* result);
PPFL_API double ppfl_result_noise_scale(const ppfl_result* result);
PPFL_API ppfl_status ppfl_result_write(const ppfl_result* result,
                                       const char* directory);

/* Sweeps clients x epsilons x modes ("full"/"logn"); an empty axis takes the
 * config's value and all-empty is a no-op. Writes the combined CSV when
 * `csv_path` is non-null. Failing cells are counted, not fatal. */
PPFL_API ppfl_status ppfl_sweep(const ppfl_config* base, const size_t* clients,
                                size_t clients_count, const double* epsilons,
                                size_t epsilons_count, const char* const* modes,
                                size_t modes_count, const char* csv_path,
                                size_t* cells_run, size_t* cells_failed);

#ifdef __cplusplus
}
#endif

#endif /* PPFL_PPFL_H_ */
