#ifndef SAMUEL_H
#define SAMUEL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit conventions.
 */
typedef enum SamuelStatus {
  /**
   * Ran to completion, all applicable checks hold.
   */
  Ok = 0,
  /**
   * Malformed input (parse error, bad instance, io).
   */
  Usage = 2,
  /**
   * An applicable bound failed on this instance.
   */
  Finding = 3,
  /**
   * Internal cross-check failure.
   */
  Internal = 4,
  /**
   * Completed, but some hypothesis was only assumed.
   */
  HypothesisUnverified = 5,
  /**
   * Null pointer or invalid UTF-8 handed across the boundary.
   */
  InvalidArgument = 6,
} SamuelStatus;

/**
 * Opaque report handle.
 */
typedef struct SamuelReport SamuelReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Run an instance given as TOML text.  On success `*out` owns the report.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum SamuelStatus samuel_run_toml(const char *text, struct SamuelReport **out);

/**
 * Run an instance file (TOML or JSON, detected by extension).
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum SamuelStatus samuel_run_file(const char *path, struct SamuelReport **out);

/**
 * The full JSON report; the string lives as long as the handle.
 *
 * # Safety
 * `report` must be a live handle from `samuel_run_*`.
 */
const char *samuel_report_json(const struct SamuelReport *report);

/**
 * Number of verdicts in the report.
 *
 * # Safety
 * `report` must be a live handle from `samuel_run_*`.
 */
uintptr_t samuel_report_verdict_count(const struct SamuelReport *report);

/**
 * Release a report handle.
 *
 * # Safety
 * `report` must come from `samuel_run_*` and not be freed twice.
 */
void samuel_report_free(struct SamuelReport *report);

/**
 * Last error message on this thread (empty when none).  Valid until the
 * next failing call on the same thread.
 */
const char *samuel_last_error(void);

/**
 * Engine version as a static string.
 */
const char *samuel_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SAMUEL_H */
