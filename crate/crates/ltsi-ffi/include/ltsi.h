#ifndef LTSI_H
#define LTSI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LtsiEquiv {
  LTSI_EQUIV_YES = 0,
  LTSI_EQUIV_NO = 1,
  LTSI_EQUIV_UNDECIDED = 2,
} LtsiEquiv;

typedef enum LtsiError {
  LTSI_ERROR_OK = 0,
  LTSI_ERROR_NULL_POINTER = 1,
  LTSI_ERROR_INVALID_UTF8 = 2,
  LTSI_ERROR_PARSE = 3,
  LTSI_ERROR_UNKNOWN_CHECK = 4,
  LTSI_ERROR_INVALID_PATH = 5,
  LTSI_ERROR_UNSUPPORTED = 6,
  LTSI_ERROR_PANIC = 7,
} LtsiError;

typedef enum LtsiStatus {
  LTSI_STATUS_HOLDS = 0,
  LTSI_STATUS_HOLDS_DERIVED = 1,
  LTSI_STATUS_HOLDS_BOUNDED = 2,
  LTSI_STATUS_FAILS = 3,
  LTSI_STATUS_UNKNOWN = 4,
} LtsiStatus;

// Opaque handle to a parsed system.
typedef struct LtsiSystem LtsiSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses `.ltsi` text into a new handle.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum LtsiError ltsi_parse(const char *text, struct LtsiSystem **out);

// Compiles a process term such as `a.0|b.0`.
//
// # Safety
// `term` must be a NUL-terminated string and `out` a valid pointer.
enum LtsiError ltsi_compile_term(const char *term, struct LtsiSystem **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `h` must come from this library and not be used afterwards.
void ltsi_free(struct LtsiSystem *h);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void ltsi_string_free(char *s);

// Message for the last failed call on this thread, or null. Owned by the
// library and valid until the next call on the same thread.
const char *ltsi_last_error(void);

// Number of states, or 0 for a null handle.
//
// # Safety
// `h` must be null or a live handle.
uintptr_t ltsi_state_count(const struct LtsiSystem *h);

// Number of forward transitions, or 0 for a null handle.
//
// # Safety
// `h` must be null or a live handle.
uintptr_t ltsi_transition_count(const struct LtsiSystem *h);

// Runs one named check (`SP`, `IRE`, `CS_i`, `PREREV`, ...) with default
// bounds and writes its status.
//
// # Safety
// `h` must be a live handle, `check` a NUL-terminated string, `out` valid.
enum LtsiError ltsi_check(const struct LtsiSystem *h, const char *check, enum LtsiStatus *out);

// Full report in the tab-separated format, one `RESULT` line per check.
//
// # Safety
// `h` must be a live handle and `out` valid; free the result with
// `ltsi_string_free`.
enum LtsiError ltsi_report_tsv(const struct LtsiSystem *h, char **out);

// Canonical `.ltsi` text of the system.
//
// # Safety
// `h` must be a live handle and `out` valid; free the result with
// `ltsi_string_free`.
enum LtsiError ltsi_emit(const struct LtsiSystem *h, char **out);

// Decides causal equivalence of two coinitial paths given as
// space-separated transition ids (`~id` for reverse). Both paths start
// at the source of their first step; an empty path takes the other's.
//
// # Safety
// `h` must be a live handle, `r` and `s` NUL-terminated strings, `out`
// valid.
enum LtsiError ltsi_equiv(const struct LtsiSystem *h,
                          const char *r,
                          const char *s,
                          uintptr_t slack,
                          enum LtsiEquiv *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LTSI_H */
