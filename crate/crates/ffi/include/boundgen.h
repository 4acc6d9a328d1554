#ifndef BOUNDGEN_H
#define BOUNDGEN_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum BgStatus {
  BG_STATUS_OK = 0,
  BG_STATUS_NULL_POINTER = 1,
  BG_STATUS_INVALID_UTF8 = 2,
  BG_STATUS_PARSE = 3,
  BG_STATUS_DOMAIN = 4,
  BG_STATUS_PANIC = 5,
} BgStatus;

/**
 * A factorization certificate together with the matrix it factors.
 */
typedef struct BgCertificate BgCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next `bg_*` call on the same thread.
 */
const char *bg_last_error(void);

/**
 * Factors a matrix given in the text format (`rows cols` header, one row per
 * line). `policy` is "z3k" or "z2k1"; NULL selects z3k.
 *
 * # Safety
 * `text` must be a NUL-terminated string, `policy` NULL or NUL-terminated,
 * and `out` a valid pointer to writable storage.
 */
enum BgStatus bg_factor_text(const char *text, const char *policy, struct BgCertificate **out);

/**
 * Recomputes the ordered product and compares it with the input matrix.
 *
 * # Safety
 * `cert` must come from `bg_factor_text` and `ok` must be writable.
 */
enum BgStatus bg_certificate_verify(const struct BgCertificate *cert, bool *ok);

/**
 * Number of generalized factors, or 0 for NULL.
 *
 * # Safety
 * `cert` must be NULL or come from `bg_factor_text`.
 */
size_t bg_certificate_len(const struct BgCertificate *cert);

/**
 * Certificate as JSON. Release the string with `bg_string_free`.
 *
 * # Safety
 * `cert` must come from `bg_factor_text` and `out` must be writable.
 */
enum BgStatus bg_certificate_json(const struct BgCertificate *cert, char **out);

/**
 * # Safety
 * `cert` must be NULL or come from `bg_factor_text`, and not be used again.
 */
void bg_certificate_free(struct BgCertificate *cert);

/**
 * Bound report for SL_n(Z) as JSON, or for SL_n(F_p) when `p` is nonzero.
 * Release the string with `bg_string_free`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BgStatus bg_constants_json(uint64_t n, uint64_t p, char **out);

/**
 * Lower Kazhdan bound 1/(42√n + 860); NaN for n < 3.
 */
double bg_kazhdan_lower(uint64_t n);

/**
 * Upper Kazhdan bound √(2/n); NaN for n < 3.
 */
double bg_kazhdan_upper(uint64_t n);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void bg_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BOUNDGEN_H */
