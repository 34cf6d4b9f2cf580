#ifndef QBNF_C_H
#define QBNF_C_H

/* C API for the normal-form toolkit: opaque handles, status-code returns,
 * and caller-freed strings.  All functions are thread-safe; the last error
 * message is thread-local. */

#include <stdint.h>

#if defined(_WIN32)
#define QBNF_API __declspec(dllexport)
#else
#define QBNF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qbnf_config qbnf_config; /* parsed problem configuration */
typedef struct qbnf_report qbnf_report; /* pipeline run report */

typedef enum qbnf_status {
  QBNF_OK = 0,
  QBNF_ERR_DOMAIN = 1,        /* argument outside mathematical domain */
  QBNF_ERR_SHAPE = 2,         /* incompatible dimensions/truncations */
  QBNF_ERR_CONFIG = 3,        /* malformed or constraint-violating config */
  QBNF_ERR_RESONANCE = 4,     /* exact resonance <k, omega> = 0 */
  QBNF_ERR_SMALL_DIVISOR = 5, /* admissibility threshold violated */
  QBNF_ERR_SEQUENCING = 6,    /* recursion order prerequisites missing */
  QBNF_ERR_NUMERIC = 7,       /* numerical failure (divergence, overflow) */
  QBNF_ERR_FIT = 8,           /* insufficient data for a fit */
  QBNF_ERR_SIZE = 9,          /* enumeration exceeds configured caps */
  QBNF_ERR_IO = 10,           /* file open/read/write failure */
  QBNF_ERR_SELECTION = 11,    /* unknown series or missing report section */
  QBNF_ERR_ARGUMENT = 90,     /* null pointer or invalid handle */
  QBNF_ERR_UNKNOWN = 99
} qbnf_status;

/* Flags for qbnf_run_pipeline. */
#define QBNF_RUN_CHECK_ONLY 0x1u  /* validity + nonresonance stages only */
#define QBNF_RUN_FULL_COEFFS 0x2u /* embed full coefficient tables */
#define QBNF_RUN_TIMINGS 0x4u     /* include wall-clock timings (breaks byte determinism) */

/* Version string of the library ("x.y.z"); static storage, do not free. */
QBNF_API const char* qbnf_version(void);

/* Message of the most recent failure on this thread; static storage valid
 * until the next API call on the same thread.  Empty string if none. */
QBNF_API const char* qbnf_last_error(void);

/* ---- configuration ---- */

QBNF_API qbnf_status qbnf_config_parse(const char* text, qbnf_config** out);
QBNF_API qbnf_status qbnf_config_parse_file(const char* path, qbnf_config** out);

/* Canonical deterministic form (sorted keys, round-trip exact numbers). */
QBNF_API qbnf_status qbnf_config_write(const qbnf_config* cfg, char** out_text);

/* JSON array of {path, message} constraint violations; QBNF_OK with an empty
 * array means the config is runnable. */
QBNF_API qbnf_status qbnf_config_validate(const qbnf_config* cfg, char** out_violations);

/* Content hash of the canonical form ("fnv1a:<hex>"). */
QBNF_API qbnf_status qbnf_config_hash(const qbnf_config* cfg, char** out_hash);

QBNF_API void qbnf_config_free(qbnf_config* cfg);

/* ---- pipeline ---- */

/* Run the analysis pipeline.  tolerance <= 0 selects the default 1e-10.
 * Hard errors inside stages are captured in the report (success flag off),
 * not returned as a status; the status covers config violations and
 * resource failures only. */
QBNF_API qbnf_status qbnf_run_pipeline(const qbnf_config* cfg, uint32_t flags, double tolerance,
                                       qbnf_report** out);

QBNF_API qbnf_status qbnf_report_load_file(const char* path, qbnf_report** out);
QBNF_API qbnf_status qbnf_report_to_json(const qbnf_report* report, char** out_text);
QBNF_API qbnf_status qbnf_report_write_file(const qbnf_report* report, const char* path);

/* Two-column plot text for series "decay", "growth", "divisors" or
 * "residuals". */
QBNF_API qbnf_status qbnf_report_plot_series(const qbnf_report* report, const char* which,
                                             char** out_text);

/* 1 when the run had no hard errors and all residuals met the tolerance. */
QBNF_API int qbnf_report_success(const qbnf_report* report);
QBNF_API double qbnf_report_max_residual(const qbnf_report* report);

QBNF_API void qbnf_report_free(qbnf_report* report);

/* ---- property suite ---- */

/* Run the seeded randomized property suite; returns a JSON document with
 * per-property trial/failure counts.  QBNF_OK even when properties fail
 * (inspect the document); non-OK only for internal errors. */
QBNF_API qbnf_status qbnf_run_properties(uint64_t seed, char** out_json);

/* Free any string returned through a char** out parameter. */
QBNF_API void qbnf_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* QBNF_C_H */
