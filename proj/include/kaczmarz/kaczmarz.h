/*
 * Copyright 2026 The kzpar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KACZMARZ_KACZMARZ_H
#define KACZMARZ_KACZMARZ_H

/*
 * C interface to the Kaczmarz solver suite.
 *
 * Objects are opaque handles released with their *_free function (NULL is
 * accepted). Every fallible call returns a kz_status; on failure the message
 * of the last error on the calling thread is available from
 * kz_last_error_message(). Output arguments are left untouched on failure.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KZ_BUILDING_LIBRARY)
#    define KZ_API __declspec(dllexport)
#  else
#    define KZ_API __declspec(dllimport)
#  endif
#else
#  define KZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kz_status {
    KZ_OK = 0,
    KZ_ERR_DIMENSION = 1,
    KZ_ERR_DEGENERATE_ROW = 2,
    KZ_ERR_RANGE = 3,
    KZ_ERR_PARSE = 4,
    KZ_ERR_UNSUPPORTED_VERSION = 5,
    KZ_ERR_IO = 6,
    KZ_ERR_NON_CONVERGENCE = 7,
    KZ_ERR_INVALID_ARGUMENT = 8,
    KZ_ERR_PROTOCOL = 9,
    KZ_ERR_INTERNAL = 100
} kz_status;

typedef enum kz_variant {
    KZ_VARIANT_CK = 0,
    KZ_VARIANT_RK,
    KZ_VARIANT_RKA,
    KZ_VARIANT_RKAB,
    KZ_VARIANT_CGLS
} kz_variant;

typedef enum kz_backend {
    KZ_BACKEND_SEQ = 0,
    KZ_BACKEND_THREADS,
    KZ_BACKEND_DIST /* simulated message passing, np = q */
} kz_backend;

typedef enum kz_scheme {
    KZ_SCHEME_FULL_ACCESS = 0, /* every worker samples from all rows */
    KZ_SCHEME_DISTRIBUTED      /* worker t samples from its own row block */
} kz_scheme;

typedef enum kz_alpha_policy {
    KZ_ALPHA_UNIT = 0,
    KZ_ALPHA_FIXED,
    KZ_ALPHA_OPTIMAL_FULL,
    KZ_ALPHA_OPTIMAL_PARTIAL
} kz_alpha_policy;

typedef struct kz_system kz_system;
typedef struct kz_bench  kz_bench;
typedef struct kz_trace  kz_trace;

typedef struct kz_generator_config {
    size_t   rows;        /* cropped size; 0 means the full mother size */
    size_t   cols;
    size_t   mother_rows; /* size of the generated mother system */
    size_t   mother_cols;
    double   mu_lo, mu_hi;
    double   sigma_lo, sigma_hi;
    uint64_t seed;
} kz_generator_config;

typedef struct kz_solver_config {
    kz_variant      variant;
    kz_backend      backend;
    kz_scheme       scheme;
    kz_alpha_policy alpha_policy;
    double          alpha; /* used with KZ_ALPHA_FIXED */
    size_t          q;
    size_t          block_size;
    double          epsilon; /* on ||x - x_ref||^2 */
    size_t          max_iterations;
    uint64_t        seed;
} kz_solver_config;

typedef struct kz_run_report {
    kz_variant      variant;
    kz_backend      backend;
    kz_scheme       scheme;
    kz_alpha_policy alpha_policy;
    double          alpha;
    size_t          q;
    size_t          block_size;
    uint64_t        seed;
    size_t          iterations;
    int             converged;
    double          wall_time_s;
    double          final_error_sq; /* NaN without a reference solution */
    double          final_residual;
    size_t          error_evaluations;
} kz_run_report;

typedef struct kz_trace_record {
    size_t iteration;
    double error_norm;
    double residual_norm;
} kz_trace_record;

typedef struct kz_spectral_stats {
    double sigma_max;
    double sigma_min;
    double s_max;
    double s_min;
    double frobenius_sq;
} kz_spectral_stats;

KZ_API const char* kz_version(void);
KZ_API const char* kz_status_string(kz_status status);
KZ_API const char* kz_last_error_message(void);

KZ_API void kz_generator_config_default(kz_generator_config* cfg);
KZ_API void kz_solver_config_default(kz_solver_config* cfg);

/* Names as used in CSV output and on the command line. */
KZ_API const char* kz_variant_name(kz_variant v);
KZ_API const char* kz_backend_name(kz_backend b);
KZ_API const char* kz_scheme_name(kz_scheme s);
KZ_API const char* kz_alpha_policy_name(kz_alpha_policy p);
KZ_API kz_status kz_parse_variant(const char* name, kz_variant* out);
KZ_API kz_status kz_parse_backend(const char* name, kz_backend* out);
KZ_API kz_status kz_parse_scheme(const char* name, kz_scheme* out);
KZ_API kz_status kz_parse_alpha_policy(const char* name, kz_alpha_policy* out);

/* ---- systems ---- */

/* Mother system of mother_rows x mother_cols, cropped to rows x cols. */
KZ_API kz_status kz_system_generate(const kz_generator_config* cfg, kz_system** out);

/* Copies a row-major m x n matrix and b; x_star may be NULL. */
KZ_API kz_status kz_system_from_arrays(size_t m, size_t n, const double* a, const double* b,
                                       const double* x_star, kz_system** out);

/* Top-left m x n block with a fresh solution drawn for cfg->seed. */
KZ_API kz_status kz_system_crop(const kz_system* sys, size_t m, size_t n,
                                const kz_generator_config* cfg, kz_system** out);

/* Adds N(0, noise_std^2) noise to b and stores the least-squares solution. */
KZ_API kz_status kz_system_make_inconsistent(const kz_system* sys, uint64_t noise_seed,
                                             double noise_std, kz_system** out);

KZ_API kz_status kz_system_save(const kz_system* sys, const char* path);
KZ_API kz_status kz_system_load(const char* path, kz_system** out);
KZ_API void      kz_system_free(kz_system* sys);

KZ_API size_t kz_system_rows(const kz_system* sys);
KZ_API size_t kz_system_cols(const kz_system* sys);
KZ_API int    kz_system_is_consistent(const kz_system* sys);
KZ_API int    kz_system_has_reference(const kz_system* sys);

/* Copies x_ls if present, else x_star; len must equal the column count. */
KZ_API kz_status kz_system_copy_reference(const kz_system* sys, double* out, size_t len);

KZ_API kz_status kz_system_spectral_stats(const kz_system* sys, kz_spectral_stats* out);

/* Optimal uniform weight for q averaged projections; q >= 1. */
KZ_API kz_status kz_optimal_alpha(double s_min, double s_max, size_t q, double* out);

/* ---- solving ---- */

/* One run with seed cfg->seed. x_out may be NULL; otherwise x_len must equal
 * the column count. */
KZ_API kz_status kz_solve(const kz_system* sys, const kz_solver_config* cfg, kz_run_report* report,
                          double* x_out, size_t x_len);

/* Iteration measurement over seeds cfg->seed + 0 .. n_seeds-1, then n_runs
 * timed replays of ceil(mean) iterations. Non-converged seeds are reported,
 * not treated as errors. */
KZ_API kz_status kz_bench_run(const kz_system* sys, const kz_solver_config* cfg, size_t n_seeds,
                              size_t n_runs, kz_bench** out);

/* n_seeds per-seed rows followed by one summary row. */
KZ_API size_t    kz_bench_row_count(const kz_bench* bench);
KZ_API kz_status kz_bench_get_row(const kz_bench* bench, size_t index, kz_run_report* out,
                                  int* is_summary);
KZ_API int       kz_bench_all_converged(const kz_bench* bench);
KZ_API size_t    kz_bench_mean_iterations(const kz_bench* bench);
KZ_API void      kz_bench_free(kz_bench* bench);

/* Error and residual every `step` iterations (k = 0 included) over
 * max_iterations iterations, ignoring epsilon. Needs a reference solution. */
KZ_API kz_status kz_trace_run(const kz_system* sys, const kz_solver_config* cfg,
                              size_t max_iterations, size_t step, kz_trace** out);
KZ_API size_t    kz_trace_size(const kz_trace* trace);
KZ_API kz_status kz_trace_get(const kz_trace* trace, size_t index, kz_trace_record* out);

/* Mean error norm of the last `count` records. */
KZ_API kz_status kz_trace_plateau(const kz_trace* trace, size_t count, double* out);
KZ_API void      kz_trace_free(kz_trace* trace);

/* ---- CSV ---- */

KZ_API const char* kz_report_csv_header(void);
KZ_API const char* kz_trace_csv_header(void);

/* snprintf-style: writes at most len bytes including the terminating NUL and
 * returns the full row length, or -1 on a NULL argument. */
KZ_API int kz_format_report_row(const kz_run_report* report, int is_summary, char* buf,
                                size_t len);
KZ_API int kz_format_trace_row(const kz_trace_record* record, char* buf, size_t len);

#ifdef __cplusplus
}
#endif

#endif /* KACZMARZ_KACZMARZ_H */
