// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

/* C interface to the porohdg solver library.
 *
 * Objects are opaque handles created by the porohdg_config_from_* functions or porohdg_run and
 * released with the matching *_free. Every fallible call returns a
 * porohdg_status; on failure porohdg_last_error() describes the problem
 * (thread-local, valid until the next failing call on the same thread).
 */
#ifndef POROHDG_POROHDG_H_
#define POROHDG_POROHDG_H_

#include <stddef.h>

#if defined(_WIN32)
#define POROHDG_API __declspec(dllexport)
#else
#define POROHDG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum porohdg_status {
  POROHDG_OK = 0,
  POROHDG_ERR_INVALID_ARGUMENT = 1,
  POROHDG_ERR_CONFIG = 2,
  POROHDG_ERR_SOLVER = 3,
  POROHDG_ERR_IO = 4,
  POROHDG_ERR_INTERNAL = 5
} porohdg_status;

typedef enum porohdg_field {
  POROHDG_FIELD_STRESS = 0,
  POROHDG_FIELD_SOLID_VELOCITY = 1,
  POROHDG_FIELD_FLUID_VELOCITY = 2,
  POROHDG_FIELD_PRESSURE = 3
} porohdg_field;

typedef enum porohdg_mode {
  POROHDG_MODE_SIMULATE = 0,
  POROHDG_MODE_CONVERGENCE_STUDY = 1,
  POROHDG_MODE_ORACLE_CHECK = 2
} porohdg_mode;

typedef struct porohdg_config porohdg_config;
typedef struct porohdg_result porohdg_result;

POROHDG_API const char* porohdg_version(void);
POROHDG_API const char* porohdg_last_error(void);
POROHDG_API const char* porohdg_status_name(porohdg_status s);

/* Preset names, 0 <= i < porohdg_scenario_count(). NULL when out of range. */
POROHDG_API int porohdg_scenario_count(void);
POROHDG_API const char* porohdg_scenario_name(int i);

POROHDG_API porohdg_status porohdg_config_from_file(const char* path, porohdg_config** out);
POROHDG_API porohdg_status porohdg_config_from_text(const char* text, porohdg_config** out);
POROHDG_API porohdg_status porohdg_config_from_scenario(const char* name, porohdg_config** out);
POROHDG_API void porohdg_config_free(porohdg_config* cfg);

/* Overrides one setting and revalidates. Keys:
 *   degree, seed, levels      integers
 *   dt, t_final               durations ("0.01", "2 ms"; dt "auto" or 0 for automatic)
 *   output                    directory
 *   mode                      simulate | convergence-study | oracle-check
 *   snapshots                 integer, 0 disables VTK output
 * On failure the configuration is left unchanged. */
POROHDG_API porohdg_status porohdg_config_set(porohdg_config* cfg, const char* key,
                                              const char* value);

/* Canonical config text. Copies at most `capacity` bytes including the
 * terminator into `buffer` (which may be NULL when capacity is 0) and stores
 * the full length plus one in *required. */
POROHDG_API porohdg_status porohdg_config_to_text(const porohdg_config* cfg, char* buffer,
                                                  size_t capacity, size_t* required);

typedef void (*porohdg_log_fn)(const char* line, void* user);

typedef struct porohdg_run_options {
  int write_files;  /* nonzero: write VTK, CSV and matrix files to the output directory */
  int emit_matrix;  /* nonzero: dump the global trace matrix in Matrix Market format */
  porohdg_log_fn log; /* progress lines without trailing newline; may be NULL */
  void* log_user;
} porohdg_run_options;

POROHDG_API porohdg_run_options porohdg_run_options_default(void);

/* Runs the configured mode. `options` may be NULL for the defaults. */
POROHDG_API porohdg_status porohdg_run(const porohdg_config* cfg,
                                       const porohdg_run_options* options,
                                       porohdg_result** out);
POROHDG_API void porohdg_result_free(porohdg_result* res);

POROHDG_API porohdg_mode porohdg_result_mode(const porohdg_result* res);
POROHDG_API int porohdg_result_steps(const porohdg_result* res);
POROHDG_API double porohdg_result_dt(const porohdg_result* res);
/* Nonzero when every computed coefficient was finite. */
POROHDG_API int porohdg_result_finite(const porohdg_result* res);
/* Oracle-check mode: max relative condensed-vs-monolithic difference. */
POROHDG_API double porohdg_result_oracle_difference(const porohdg_result* res);

/* Simulate mode: rows of (t, X^2, Y^2) energy diagnostics. */
POROHDG_API int porohdg_result_diagnostic_count(const porohdg_result* res);
POROHDG_API porohdg_status porohdg_result_diagnostic(const porohdg_result* res, int row,
                                                     double* t, double* x2, double* y2);

/* Final-time L2 error of a field for manufactured runs (the finest level of
 * a convergence study). POROHDG_ERR_INVALID_ARGUMENT when there is none. */
POROHDG_API porohdg_status porohdg_result_error(const porohdg_result* res, porohdg_field field,
                                                double* error);
/* Convergence study: fitted slope over the three finest levels. */
POROHDG_API porohdg_status porohdg_result_rate(const porohdg_result* res, porohdg_field field,
                                               double* rate);

/* Convergence table as aligned text and CSV; empty strings for other modes.
 * Owned by the result. */
POROHDG_API const char* porohdg_result_table(const porohdg_result* res);
POROHDG_API const char* porohdg_result_csv(const porohdg_result* res);

/* Files written by the run, 0 <= i < porohdg_result_file_count(). */
POROHDG_API int porohdg_result_file_count(const porohdg_result* res);
POROHDG_API const char* porohdg_result_file(const porohdg_result* res, int i);

#ifdef __cplusplus
}
#endif

#endif /* POROHDG_POROHDG_H_ */
