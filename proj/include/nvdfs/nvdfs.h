// Copyright 2026 The nvdfs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the nvdfs toolkit.
 *
 * Every function returns an nvdfs_status; on failure nvdfs_last_error() holds
 * a message for the calling thread. Handles are opaque and owned by the
 * caller; release them with the matching *_free function. Strings returned
 * through char** are released with nvdfs_string_free. Options are JSON
 * objects passed as UTF-8 strings; NULL means defaults. */
#ifndef NVDFS_H
#define NVDFS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NVDFS_API __declspec(dllexport)
#else
#define NVDFS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nvdfs_status {
  NVDFS_OK = 0,
  NVDFS_INVALID_ARGUMENT = 1,
  NVDFS_IO = 2,
  NVDFS_LABELING_AMBIGUITY = 3,
  NVDFS_DEGENERATE_FIELD = 4,
  NVDFS_STEP_UNSTABLE = 5,
  NVDFS_BUDGET_EXHAUSTED = 6,
  NVDFS_ILL_CONDITIONED = 7,
  NVDFS_DEGENERATE_X = 8,
  NVDFS_FLAT_TRACE = 9,
  NVDFS_INTERNAL = 99
} nvdfs_status;

typedef struct nvdfs_params nvdfs_params;
typedef struct nvdfs_shape nvdfs_shape;
typedef struct nvdfs_result nvdfs_result;
typedef struct nvdfs_map nvdfs_map;

NVDFS_API const char* nvdfs_version(void);
NVDFS_API const char* nvdfs_last_error(void);
NVDFS_API const char* nvdfs_status_name(nvdfs_status status);
NVDFS_API void nvdfs_string_free(char* s);

/* System parameters. convention is "literal" or "angular" (NULL = literal). */
NVDFS_API nvdfs_status nvdfs_params_default(const char* convention, nvdfs_params** out);
NVDFS_API nvdfs_status nvdfs_params_from_json(const char* json, nvdfs_params** out);
NVDFS_API nvdfs_status nvdfs_params_to_json(const nvdfs_params* params, char** out);
/* energies[8] = E_1..E_8 in rad/us. */
NVDFS_API nvdfs_status nvdfs_params_energies(const nvdfs_params* params, double* energies);
NVDFS_API void nvdfs_params_free(nvdfs_params* params);

/* Pulse shapes. */
NVDFS_API nvdfs_status nvdfs_shape_from_json(const char* json, nvdfs_shape** out);
NVDFS_API nvdfs_status nvdfs_shape_gaussian(double amplitude, double sigma_us, double delay_us,
                                            nvdfs_shape** out);
NVDFS_API nvdfs_status nvdfs_shape_to_json(const nvdfs_shape* shape, char** out);
/* Fills times/omega_p/omega_s (each n_samples long) on [0, T], clipped. */
NVDFS_API nvdfs_status nvdfs_shape_sample(const nvdfs_shape* shape, double duration_us,
                                          size_t n_samples, double* times, double* omega_p,
                                          double* omega_s);
NVDFS_API void nvdfs_shape_free(nvdfs_shape* shape);

/* Transfer fidelity. Options: n_slices, initial_level, target_level, delta,
 * kappa, integrator ("taylor" | "rk4" | "liouvillian_exp"). */
NVDFS_API nvdfs_status nvdfs_fidelity(const nvdfs_params* params, const nvdfs_shape* shape,
                                      double duration_us, const char* options, double* out);

/* Optimization. method: stirap, grape_gaussian, grape_inverse_lambda, crab, pm.
 * Options are the optimizer keys (n_trials, seed, threads, n_slices, ...). */
NVDFS_API nvdfs_status nvdfs_optimize(const nvdfs_params* params, const char* method,
                                      double duration_us, const char* options,
                                      nvdfs_result** out);
NVDFS_API nvdfs_status nvdfs_result_fidelity(const nvdfs_result* result, double* out);
NVDFS_API nvdfs_status nvdfs_result_evaluations(const nvdfs_result* result, int* out);
NVDFS_API nvdfs_status nvdfs_result_shape(const nvdfs_result* result, nvdfs_shape** out);
NVDFS_API nvdfs_status nvdfs_result_to_json(const nvdfs_result* result, char** out);
NVDFS_API void nvdfs_result_free(nvdfs_result* result);

/* Robustness maps. grid: {"delta": [lo, hi, n], "kappa": [lo, hi, n]} or NULL
 * for the 50 x 50 default. Options: n_slices, threads, n_samples. */
NVDFS_API nvdfs_status nvdfs_map_brute(const nvdfs_params* params, const nvdfs_shape* shape,
                                       double duration_us, const char* grid, const char* options,
                                       nvdfs_map** out);
NVDFS_API nvdfs_status nvdfs_map_estimate(const nvdfs_params* params, const nvdfs_shape* shape,
                                          double duration_us, const char* grid,
                                          const char* options, uint64_t seed, nvdfs_map** out);
NVDFS_API nvdfs_status nvdfs_map_size(const nvdfs_map* map, size_t* n_delta, size_t* n_kappa);
/* Value at (delta index, kappa index). */
NVDFS_API nvdfs_status nvdfs_map_value(const nvdfs_map* map, size_t i, size_t j, double* out);
/* weights: {"sigma_delta": s, "sigma_kappa": s} or NULL for the defaults. */
NVDFS_API nvdfs_status nvdfs_map_average(const nvdfs_map* map, const char* weights, double* out);
NVDFS_API nvdfs_status nvdfs_map_rmse(const nvdfs_map* a, const nvdfs_map* b, double* out);
NVDFS_API nvdfs_status nvdfs_map_write_csv(const nvdfs_map* map, const char* path);
NVDFS_API void nvdfs_map_free(nvdfs_map* map);

/* Least-squares y = a x + b; stderr outputs may be NULL. */
NVDFS_API nvdfs_status nvdfs_linear_fit(const double* x, const double* y, size_t n, double* a,
                                        double* b, double* residual_rms, double* a_stderr,
                                        double* b_stderr);

/* Runs a full task from a JSON run config (see README) and returns the
 * manifest as JSON. */
NVDFS_API nvdfs_status nvdfs_run(const char* config, char** manifest);

#ifdef __cplusplus
}
#endif

#endif /* NVDFS_H */
