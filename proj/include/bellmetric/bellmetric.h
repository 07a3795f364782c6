/*
 * C interface to the bellmetric library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a bm_status; on
 * failure a description is available from bm_last_error() on the same thread.
 * Strings returned through char** are allocated by the library and released
 * with bm_string_free().
 */
#ifndef BELLMETRIC_H
#define BELLMETRIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BM_API __declspec(dllexport)
#else
#define BM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bm_status {
  BM_OK = 0,
  BM_ERR_INVALID_ARGUMENT = 1,
  BM_ERR_DIMENSION = 2,
  BM_ERR_INVARIANT = 3,
  BM_ERR_NULL_CONDITIONING = 4,
  BM_ERR_PARSE = 5,
  BM_ERR_IO = 6,
  BM_ERR_INTERNAL = 7
} bm_status;

/* BM_FORMAT_TEXT is a human-readable summary (CSV for tabular reports). */
typedef enum bm_format { BM_FORMAT_JSON = 0, BM_FORMAT_CSV = 1, BM_FORMAT_TEXT = 2 } bm_format;

typedef struct bm_state bm_state;
typedef struct bm_certificate bm_certificate;
typedef struct bm_report bm_report;

typedef struct bm_run_config {
  int d1; /* 0 selects the command default */
  int d2;
  int d3;
  double tol_structural;
  double tol_assertion;
  double tol_optimizer;
  int restarts;
  int max_iters;
  uint64_t seed;
} bm_run_config;

typedef struct bm_state_params {
  int d1;
  int d2;
  int d3;      /* appendixB only; 0 selects the smallest admissible value */
  double lambda;
  int tail;
  int pair_a[2]; /* pure only: zero-based (i, j) */
  int pair_b[2];
  double amp_a_re, amp_a_im;
  double amp_b_re, amp_b_im;
  uint64_t seed; /* random only */
} bm_state_params;

BM_API const char* bm_version(void);
BM_API const char* bm_last_error(void);
BM_API const char* bm_status_name(bm_status status);
BM_API void bm_string_free(char* s);

BM_API void bm_run_config_default(bm_run_config* config);
BM_API void bm_state_params_default(bm_state_params* params);

/* kind: mixed, singlet, werner22, embedded-werner, pure, appendixB, random */
BM_API bm_status bm_state_make(const char* kind, const bm_state_params* params, bm_state** out);
BM_API bm_status bm_state_parse(const char* json, bm_state** out);
BM_API bm_status bm_state_load(const char* path, bm_state** out);
BM_API bm_status bm_state_to_json(const bm_state* state, char** out);
BM_API bm_status bm_state_save(const bm_state* state, const char* path);
BM_API int bm_state_is_pure(const bm_state* state);
BM_API int bm_state_dim(const bm_state* state);
/* Writes up to `capacity` factor dims; *count receives the total. */
BM_API bm_status bm_state_factor_dims(const bm_state* state, int* dims, size_t capacity,
                                      size_t* count);
BM_API void bm_state_free(bm_state* state);

/* See-saw lower bound on the Bell coefficient; adds the closed-form value
 * for two-qubit states. */
BM_API bm_status bm_gamma(const bm_state* state, const bm_run_config* config,
                          bm_certificate** out);
BM_API double bm_certificate_gamma_lower(const bm_certificate* cert);
BM_API double bm_certificate_beta(const bm_certificate* cert);
BM_API int bm_certificate_converged(const bm_certificate* cert);
BM_API int bm_certificate_iterations(const bm_certificate* cert);
/* Returns 1 and writes the oracle value when one was computed. */
BM_API int bm_certificate_oracle_gamma(const bm_certificate* cert, double* value);
BM_API bm_status bm_certificate_to_json(const bm_certificate* cert, char** out);
BM_API void bm_certificate_free(bm_certificate* cert);

/* prop_id in {1, 2, 6}; target may be NULL for a seeded random target.
 * n_max <= 0 selects the largest admissible value (10 for prop 6). */
BM_API bm_status bm_prop_run(int prop_id, const bm_state* target, int n_max,
                             const bm_run_config* config, bm_report** out);
/* grid may be NULL (with grid_len 0) for the default grid. */
BM_API bm_status bm_path_run(const double* grid, size_t grid_len, int tail,
                             int include_endpoint, const bm_run_config* config,
                             bm_report** out);
/* Runs the acceptance criteria; one row per criterion. */
BM_API bm_status bm_selftest_run(bm_report** out);

BM_API int bm_report_claims_met(const bm_report* report);
BM_API size_t bm_report_row_count(const bm_report* report);
BM_API bm_status bm_report_render(const bm_report* report, bm_format format, char** out);
BM_API void bm_report_free(bm_report* report);

#ifdef __cplusplus
}
#endif

#endif /* BELLMETRIC_H */
