#ifndef RLENS_H
#define RLENS_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum RlensStatus {
  RLENS_STATUS_OK = 0,
  /**
   * A required pointer was null.
   */
  RLENS_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  RLENS_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed document, parameter or configuration.
   */
  RLENS_STATUS_SCHEMA_ERROR = 3,
  RLENS_STATUS_DUPLICATE = 4,
  RLENS_STATUS_UNKNOWN_LEARNER = 5,
  RLENS_STATUS_INVALID_RANGE = 6,
  /**
   * I/O failure or a caught panic.
   */
  RLENS_STATUS_INTERNAL = 7,
} RlensStatus;

/**
 * Opaque engine handle.
 */
typedef struct RlensEngine RlensEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates an engine. `data_dir` null keeps sessions in memory; `config_toml`
 * null uses defaults.
 *
 * # Safety
 * String arguments are null or NUL-terminated; `out` is a valid pointer.
 */
enum RlensStatus rlens_engine_new(const char *data_dir,
                                  const char *config_toml,
                                  struct RlensEngine **out);

/**
 * Releases an engine; null is ignored.
 *
 * # Safety
 * `engine` is null or a handle from [`rlens_engine_new`] not yet freed.
 */
void rlens_engine_free(struct RlensEngine *engine);

/**
 * Validates and stores one session document. `session_index` may be null.
 *
 * # Safety
 * `engine` is a live handle, `json` NUL-terminated, `session_index` null or valid.
 */
enum RlensStatus rlens_ingest_json(const struct RlensEngine *engine,
                                   const char *json,
                                   uint32_t *session_index);

/**
 * Checks a session document without storing it.
 *
 * # Safety
 * `json` is NUL-terminated.
 */
enum RlensStatus rlens_validate_json(const char *json);

/**
 * A learner view as canonical JSON; `view` is `overview`, `corrections`,
 * `suggestions`, `suggestions/<category>/<tutor>`, `transcript/<session>` or
 * `filters`. `params_json` (nullable) holds filter and view parameters.
 *
 * # Safety
 * `engine` is a live handle, strings are NUL-terminated, `out` is valid.
 */
enum RlensStatus rlens_view_json(const struct RlensEngine *engine,
                                 const char *learner_id,
                                 const char *view,
                                 const char *params_json,
                                 char **out);

/**
 * The full report document as canonical JSON, stamped with `generated_at_unix`
 * (seconds since the epoch).
 *
 * # Safety
 * `engine` is a live handle, strings are NUL-terminated, `out` is valid.
 */
enum RlensStatus rlens_report_json(const struct RlensEngine *engine,
                                   const char *learner_id,
                                   const char *params_json,
                                   int64_t generated_at_unix,
                                   char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` is null or a string from this library not yet freed.
 */
void rlens_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until the next
 * call on the same thread.
 */
const char *rlens_last_error_message(void);

/**
 * Library version, static.
 */
const char *rlens_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RLENS_H */
