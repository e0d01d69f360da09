/* C interface of the conformal-invariant engine.
 *
 * All functions return BLASCHKE_OK (0) or an error code; the message of the
 * last failure on the calling thread is available from blaschke_last_error().
 * Strings returned through `char**` are owned by the caller and released with
 * blaschke_string_free(). Handles are opaque.
 */
#ifndef BLASCHKE_H
#define BLASCHKE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BLASCHKE_API __declspec(dllexport)
#else
#define BLASCHKE_API __attribute__((visibility("default")))
#endif

enum {
  BLASCHKE_OK = 0,
  BLASCHKE_E_INVALID_ARGUMENT = 1,
  BLASCHKE_E_INTERNAL = 2,
  BLASCHKE_E_DIMENSION_MISMATCH = 10,
  BLASCHKE_E_METRIC_DEGENERATE = 11,
  BLASCHKE_E_CLUSTER_AMBIGUITY = 12,
  BLASCHKE_E_DEGENERATE_COMPLEMENT = 13,
  BLASCHKE_E_CAUSAL_TYPE = 14,
  BLASCHKE_E_MISSING_EXACT_JET = 20,
  BLASCHKE_E_CHART_BOUNDARY = 21,
  BLASCHKE_E_NON_FINITE = 22,
  BLASCHKE_E_NON_REGULAR = 30,
  BLASCHKE_E_NOT_SPACE_LIKE = 31,
  BLASCHKE_E_LIFT_FAILURE = 40,
  BLASCHKE_E_FRAME_DEGENERATE = 41,
  BLASCHKE_E_ALIGNMENT = 50,
  BLASCHKE_E_PARAMETER = 60,
  BLASCHKE_E_UNKNOWN_SURFACE = 61,
  BLASCHKE_E_AMBIENT_CONSTRAINT = 62,
  BLASCHKE_E_GRID_FORMAT = 70,
  BLASCHKE_E_GRID_SYMMETRY = 71,
  BLASCHKE_E_GRID_CONSTRAINT = 72,
  BLASCHKE_E_IO = 80,
  BLASCHKE_E_CONFIG = 81,
  BLASCHKE_E_REGULARITY_ABORT = 90
};

typedef struct blaschke_config blaschke_config;
typedef struct blaschke_report blaschke_report;

BLASCHKE_API const char* blaschke_version(void);
BLASCHKE_API const char* blaschke_last_error(void);
BLASCHKE_API const char* blaschke_error_name(int code);
BLASCHKE_API void blaschke_string_free(char* s);

/* Catalog entries with parameter ranges, as JSON. */
BLASCHKE_API int blaschke_catalog_json(char** out);

BLASCHKE_API int blaschke_config_create(blaschke_config** out);
BLASCHKE_API void blaschke_config_destroy(blaschke_config* cfg);
BLASCHKE_API int blaschke_config_set_surface(blaschke_config* cfg, const char* id);
BLASCHKE_API int blaschke_config_set_grid(blaschke_config* cfg, const char* path);
BLASCHKE_API int blaschke_config_set_param(blaschke_config* cfg, const char* name, double value);
BLASCHKE_API int blaschke_config_set_samples(blaschke_config* cfg, int samples);
BLASCHKE_API int blaschke_config_set_seed(blaschke_config* cfg, uint64_t seed);
/* "exact" or "fd". */
BLASCHKE_API int blaschke_config_set_deriv(blaschke_config* cfg, const char* strategy);
BLASCHKE_API int blaschke_config_set_fd_step(blaschke_config* cfg, double h);
/* which: "cluster", "residual" or "regularity". */
BLASCHKE_API int blaschke_config_set_tolerance(blaschke_config* cfg, const char* which, double value);
/* field: "A", "B", "C" or "none". */
BLASCHKE_API int blaschke_config_set_perturbation(blaschke_config* cfg, const char* field, double amplitude,
                                                  uint64_t seed);
/* 0 = BLASCHKE_THREADS or hardware concurrency. */
BLASCHKE_API int blaschke_config_set_threads(blaschke_config* cfg, int threads);

BLASCHKE_API int blaschke_run_check(const blaschke_config* cfg, blaschke_report** out);
BLASCHKE_API void blaschke_report_destroy(blaschke_report* report);
BLASCHKE_API int blaschke_report_json(const blaschke_report* report, char** out);
BLASCHKE_API int blaschke_report_csv(const blaschke_report* report, char** out);
/* 0 match, 2 indeterminate, 3 residual failure or mismatch. */
BLASCHKE_API int blaschke_report_exit_code(const blaschke_report* report);
BLASCHKE_API const char* blaschke_report_branch(const blaschke_report* report);
BLASCHKE_API double blaschke_report_wall_seconds(const blaschke_report* report);

/* Exact order-4 jets of the configured catalog surface on a lattice of
 * `shape` nodes per axis centred in its sampling box. */
BLASCHKE_API int blaschke_export_grid(const blaschke_config* cfg, int shape, double spacing, char** out);

/* Validates a grid-file component u: N^k -> S^{k+1}_1(r) for the product
 * with H^{n-k}(r) at every lattice node. tol_residual <= 0 keeps the
 * default. `exit_code` receives 0 (case-3 verdict), 2 (indeterminate) or
 * 3 (rejected / residual failure). */
BLASCHKE_API int blaschke_validate_component(const char* grid_path, int n, double tol_residual, char** json_out,
                                             int* exit_code);

/* Re-emits JSON text with the report writer. */
BLASCHKE_API int blaschke_canonical_json(const char* text, char** out);

#ifdef __cplusplus
}
#endif

#endif
