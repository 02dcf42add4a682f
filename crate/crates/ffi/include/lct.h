#ifndef LCT_H
#define LCT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. Values 0 to 4 coincide with the `lct` exit codes.
typedef enum LctStatus {
  LCT_STATUS_OK = 0,
  // A check that must hold did not.
  LCT_STATUS_FAILURE = 1,
  LCT_STATUS_INVALID_INPUT = 2,
  // The result is valid but only an upper bound.
  LCT_STATUS_UPPER_BOUND = 3,
  LCT_STATUS_BUDGET_EXCEEDED = 4,
  LCT_STATUS_NULL_POINTER = 5,
  // Input is well formed but the operation does not apply to it.
  LCT_STATUS_PRECONDITION = 6,
  LCT_STATUS_INTERNAL = 7,
} LctStatus;

// The result of [`lct_ideal_compute`].
typedef struct LctCertificate LctCertificate;

// A validated ideal.
typedef struct LctIdeal LctIdeal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer is
// valid until the next call into this library on the same thread.
const char *lct_last_error(void);

// Library version as a static string.
const char *lct_version(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void lct_string_free(char *s);

// Parses and validates an ideal document. On `INVALID_INPUT` the error text
// lists every violation, one per line.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum LctStatus lct_ideal_from_json(const char *json, struct LctIdeal **out);

// # Safety
// `ideal` must be null or a handle from [`lct_ideal_from_json`], not yet freed.
void lct_ideal_free(struct LctIdeal *ideal);

// Computes the threshold. Returns `OK` for an exact certificate and
// `UPPER_BOUND` when only an upper bound was certified; both set `out`.
//
// # Safety
// `ideal` must be a live handle; `out` must be valid for writes.
enum LctStatus lct_ideal_compute(const struct LctIdeal *ideal, struct LctCertificate **out);

// # Safety
// `cert` must be null or a handle from [`lct_ideal_compute`], not yet freed.
void lct_certificate_free(struct LctCertificate *cert);

// True when the certificate carries a criterion witness. False for null.
//
// # Safety
// `cert` must be null or a live handle.
bool lct_certificate_is_exact(const struct LctCertificate *cert);

// The value as `"p"` or `"p/q"`, or null if `cert` is null.
//
// # Safety
// `cert` must be null or a live handle.
char *lct_certificate_value(const struct LctCertificate *cert);

// The certificate as JSON; with `full`, the witness, matrix, rank and
// kernel dimension are included. Null if `cert` is null.
//
// # Safety
// `cert` must be null or a live handle.
char *lct_certificate_to_json(const struct LctCertificate *cert, bool full);

// Classifies the monomial curve `(t^n1, t^n2, t^n3)` and writes a JSON
// report with the table and LP values, which must agree.
//
// # Safety
// `out` must be valid for writes.
enum LctStatus lct_curve_json(uint64_t n1, uint64_t n2, uint64_t n3, char **out);

// Writes `ν(p^e)`. A `budget` of 0 selects the default term budget.
//
// # Safety
// `ideal` must be a live handle; `nu` must be valid for writes.
enum LctStatus lct_ideal_nu(const struct LctIdeal *ideal,
                            uint64_t p,
                            uint32_t e,
                            uint64_t budget,
                            uint64_t *nu);

// Checks `ν(p^e) >= value·(p^e - 1)`. Requires an exact certificate for
// the same ideal and `p ≡ 1 mod N`; otherwise returns `PRECONDITION`.
// Returns `FAILURE` if the bound does not hold.
//
// # Safety
// `ideal` and `cert` must be live handles.
enum LctStatus lct_fpt_lower_check(const struct LctIdeal *ideal,
                                   const struct LctCertificate *cert,
                                   uint64_t p,
                                   uint32_t e,
                                   uint64_t budget);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LCT_H */
