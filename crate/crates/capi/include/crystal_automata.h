#ifndef CRYSTAL_AUTOMATA_H
#define CRYSTAL_AUTOMATA_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum CaStatus {
  /**
   * Success.
   */
  CaOk = 0,
  /**
   * A pointer argument was null.
   */
  CaNullArgument = 1,
  /**
   * Input text could not be parsed.
   */
  CaParseError = 2,
  /**
   * Invalid configuration or element data.
   */
  CaInvalidInput = 3,
  /**
   * The carrier was not large enough for a stable evolution.
   */
  CaMarginTooSmall = 4,
  /**
   * Any other error; see `ca_last_error_message`.
   */
  CaInternalError = 5,
} CaStatus;

/**
 * Opaque automaton state handle.
 */
typedef struct CaState CaState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the error message of the most recent failure on this thread.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *ca_last_error_message(void);

/**
 * Parses the text state format into a new state handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum CaStatus ca_state_parse(const char *text, struct CaState **out);

/**
 * Serializes a state into newly allocated text; free it with
 * `ca_string_free`.
 *
 * # Safety
 * `state` must come from this library and `out` must be a valid pointer.
 */
enum CaStatus ca_state_serialize(const struct CaState *state, char **out);

/**
 * Number of sites in the state.
 *
 * # Safety
 * `state` must come from this library.
 */
uintptr_t ca_state_site_count(const struct CaState *state);

/**
 * Evolves a state for `steps` time steps with the default saturated
 * vacuum carrier, writing a new handle to `out`.  `factorized` selects
 * the factorized operator string instead of the R threading.
 *
 * # Safety
 * `state` must come from this library and `out` must be a valid pointer.
 */
enum CaStatus ca_state_evolve(const struct CaState *state,
                              uint32_t steps,
                              bool factorized,
                              struct CaState **out);

/**
 * Frees a state handle.  Null is a no-op.
 *
 * # Safety
 * `state` must come from this library and not be freed twice.
 */
void ca_state_free(struct CaState *state);

/**
 * Frees a string returned by this library.  Null is a no-op.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ca_string_free(char *s);

/**
 * The five-integer gamma map; writes `F,G,H,I,J` into `out[0..5]`.
 *
 * # Safety
 * `out` must point to at least five writable `int64_t` values.
 */
enum CaStatus ca_gamma(int64_t a, int64_t b, int64_t c, int64_t d, int64_t e, int64_t *out);

/**
 * Type-A combinatorial R on coordinate buffers of length `n`.
 *
 * # Safety
 * All four pointers must reference `n` readable (`x`, `y`) or writable
 * (`x_out`, `y_out`) `int64_t` values.
 */
enum CaStatus ca_r_apply_a(const int64_t *x,
                           const int64_t *y,
                           uintptr_t n,
                           int64_t *x_out,
                           int64_t *y_out);

/**
 * Type-D combinatorial R on coordinate buffers of length `n` per side.
 *
 * # Safety
 * All eight pointers must reference `n` readable (inputs) or writable
 * (outputs) `int64_t` values.
 */
enum CaStatus ca_r_apply_d(const int64_t *x_upper,
                           const int64_t *x_lower,
                           const int64_t *y_upper,
                           const int64_t *y_lower,
                           uintptr_t n,
                           int64_t *x_out_upper,
                           int64_t *x_out_lower,
                           int64_t *y_out_upper,
                           int64_t *y_out_lower);

/**
 * Runs a verification suite.  `bounds` uses the `key=value,key=value`
 * grammar; pass an empty string for the defaults.  On success the case
 * and failure counts are written out; a nonzero failure count still
 * returns `CaOk`.
 *
 * # Safety
 * `name` and `bounds` must be valid NUL-terminated strings; the count
 * pointers must be writable.
 */
enum CaStatus ca_verify_suite(const char *name,
                              const char *bounds,
                              uint64_t seed,
                              uint64_t *cases_out,
                              uint64_t *failures_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRYSTAL_AUTOMATA_H */
