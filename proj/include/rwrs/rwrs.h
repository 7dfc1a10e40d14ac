/* Copyright 2026 rwrs-lab contributors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef RWRS_RWRS_H
#define RWRS_RWRS_H

#include <stddef.h>
#include <stdint.h>

#if defined(RWRS_BUILDING_LIBRARY)
#define RWRS_API __attribute__((visibility("default")))
#else
#define RWRS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Codes 1..8 mirror the library's internal error kinds. */
typedef enum rwrs_status {
  RWRS_OK = 0,
  RWRS_INVALID_ARGUMENT = 1,
  RWRS_UNSUPPORTED_METHOD = 2,
  RWRS_RESOURCE_LIMIT = 3,
  RWRS_IO_ERROR = 4,
  RWRS_PARSE_ERROR = 5,
  RWRS_NUMERICAL = 6,
  RWRS_DEGENERATE = 7,
  RWRS_INTERNAL = 8,
  RWRS_VALIDATION_FAILED = 9 /* config rejected; rwrs_last_error lists every violation */
} rwrs_status;

RWRS_API const char* rwrs_version(void);
RWRS_API const char* rwrs_status_name(rwrs_status status);

/* Message of the last failing call on this thread (empty after success). */
RWRS_API const char* rwrs_last_error(void);

/* ---- laws -------------------------------------------------------------- */
typedef struct rwrs_law rwrs_law;

typedef struct rwrs_law_constants {
  double sigma2;
  int64_t d;
  int64_t d0;
  int64_t residue;
} rwrs_law_constants;

/* Rational probabilities num[i] / den[i]. */
RWRS_API rwrs_status rwrs_law_create(const int64_t* support, const int64_t* num,
                                     const int64_t* den, size_t count, rwrs_law** out);
RWRS_API rwrs_status rwrs_law_create_real(const int64_t* support, const double* probs,
                                          size_t count, rwrs_law** out);
RWRS_API void rwrs_law_destroy(rwrs_law* law);
RWRS_API rwrs_status rwrs_law_analyze(const rwrs_law* law, rwrs_law_constants* out);

/* P(Z_{t_1} = ... = Z_{t_k} = 0) by exact enumeration.  exact_fraction, when
 * not NULL, receives "p/q" (or "" in floating mode), truncated to cap bytes. */
RWRS_API rwrs_status rwrs_exact_joint_return(const rwrs_law* step, const rwrs_law* scenery,
                                             const uint64_t* times, size_t k, double* value,
                                             char* exact_fraction, size_t cap);

/* ---- experiment configs ------------------------------------------------ */
typedef struct rwrs_config rwrs_config;

typedef struct rwrs_overrides {
  int has_seed;
  uint64_t seed;
  int has_replicas;
  uint64_t replicas;
  int allow_inadmissible;
} rwrs_overrides;

/* command may be NULL or "" when the file names it.  overrides may be NULL. */
RWRS_API rwrs_status rwrs_config_parse_file(const char* path, const char* command,
                                            const rwrs_overrides* overrides, rwrs_config** out);
RWRS_API rwrs_status rwrs_config_parse_text(const char* text, const char* command,
                                            const rwrs_overrides* overrides, rwrs_config** out);
RWRS_API void rwrs_config_destroy(rwrs_config* config);
RWRS_API const char* rwrs_config_command(const rwrs_config* config);
RWRS_API uint64_t rwrs_config_seed(const rwrs_config* config);
/* Resolved configuration as INI text, derived constants included.  Owned by
 * the config. */
RWRS_API const char* rwrs_config_echo(const rwrs_config* config);

/* Subcommand names; index past the end returns NULL. */
RWRS_API const char* rwrs_subcommand(size_t index);

/* ---- runs -------------------------------------------------------------- */
typedef struct rwrs_result rwrs_result;

RWRS_API rwrs_status rwrs_run(const rwrs_config* config, rwrs_result** out);
RWRS_API void rwrs_result_destroy(rwrs_result* result);
/* 1 when every test report passed. */
RWRS_API int rwrs_result_passed(const rwrs_result* result);
RWRS_API size_t rwrs_result_rows(const rwrs_result* result);
RWRS_API size_t rwrs_result_tests(const rwrs_result* result);
/* Strings owned by the result. */
RWRS_API const char* rwrs_result_csv(const rwrs_result* result);
RWRS_API const char* rwrs_result_json(const rwrs_result* result);
RWRS_API rwrs_status rwrs_result_from_json(const char* text, rwrs_result** out);
RWRS_API int rwrs_result_equal(const rwrs_result* a, const rwrs_result* b);
/* results.csv, report.json and manifest.txt into dir. */
RWRS_API rwrs_status rwrs_result_write(const rwrs_result* result, const rwrs_config* config,
                                       const char* dir, double duration_seconds);

#ifdef __cplusplus
}
#endif

#endif /* RWRS_RWRS_H */
