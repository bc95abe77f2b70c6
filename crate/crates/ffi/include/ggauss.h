#ifndef GGAUSS_H
#define GGAUSS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  GG_DISTRIBUTION_RADEMACHER = 0,
  GG_DISTRIBUTION_GAUSSIAN = 1,
} GgDistribution;

/**
 * Kernels on S(n) for [`gg_perm_check_pd`].
 */
typedef enum {
  /**
   * h_n(sigma)
   */
  GG_KERNEL_ISOLATED_FIXED_POINTS = 0,
  /**
   * param^h_n(sigma)
   */
  GG_KERNEL_POWER_OF_ISOLATED = 1,
  /**
   * exp(-param * H(sigma))
   */
  GG_KERNEL_EXP_NON_SINGLETON = 2,
} GgKernel;

typedef enum {
  GG_SEQUENCE_PAIRINGS = 0,
  GG_SEQUENCE_CATALAN = 1,
  GG_SEQUENCE_CONNECTED = 2,
  GG_SEQUENCE_SINGLETONS = 3,
} GgSequence;

/**
 * Status codes returned by every fallible call.
 */
typedef enum {
  GG_STATUS_OK = 0,
  GG_STATUS_NULL_POINTER = 1,
  GG_STATUS_INVALID_ARGUMENT = 2,
  GG_STATUS_CAP_EXCEEDED = 3,
  GG_STATUS_SIZE_LIMIT = 4,
  GG_STATUS_MISMATCH = 5,
  GG_STATUS_NO_CONVERGENCE = 6,
  GG_STATUS_BUFFER_TOO_SMALL = 7,
  GG_STATUS_PANIC = 8,
} GgStatus;

typedef enum {
  /**
   * t = 1; the parameter is ignored.
   */
  GG_WEIGHT_CONSTANT = 0,
  /**
   * q^cr
   */
  GG_WEIGHT_CROSSING_POWER = 1,
  /**
   * s^(n - cc)
   */
  GG_WEIGHT_COMPONENT_POWER = 2,
  /**
   * b^H
   */
  GG_WEIGHT_NON_SINGLETON_POWER = 3,
  /**
   * beta^h
   */
  GG_WEIGHT_SINGLETON_POWER = 4,
} GgWeight;

/**
 * Opaque table of exact moments and free cumulants of one weight.
 */
typedef struct GgMoments GgMoments;

/**
 * Opaque pair partition.
 */
typedef struct GgPairing GgPairing;

/**
 * Statistics of a pairing.
 */
typedef struct {
  uint32_t crossings;
  uint32_t singletons;
  uint32_t components;
  uint32_t non_singletons;
} GgChordStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or "" after a success.
 * The pointer stays valid until the next `gg_*` call on the same thread.
 */
const char *gg_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gg_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library and not yet freed.
 */
void gg_string_free(char *s);

/**
 * Builds a pairing from `npairs` blocks given as `2 * npairs` point labels
 * `a1, b1, a2, b2, ...` covering `1..=2*npairs`.
 *
 * # Safety
 * `pairs` must point to `2 * npairs` readable values and `out` must be writable.
 */
GgStatus gg_pairing_new(const uint32_t *pairs, size_t npairs, GgPairing **out);

/**
 * # Safety
 * `p` must be NULL or a handle from `gg_pairing_new`/`gg_pairing_rotate` not yet freed.
 */
void gg_pairing_free(GgPairing *p);

/**
 * Number of blocks.
 *
 * # Safety
 * `p` must be a live handle or NULL (returns 0).
 */
size_t gg_pairing_size(const GgPairing *p);

/**
 * Writes the canonical blocks as `a1, b1, a2, b2, ...` (sorted by opener).
 *
 * # Safety
 * `buf` must have room for `len` values.
 */
GgStatus gg_pairing_blocks(const GgPairing *p, uint32_t *buf, size_t len);

/**
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
GgStatus gg_pairing_stats(const GgPairing *p, GgChordStats *out);

/**
 * Cyclic rotation `k -> k + 1 (mod 2n)`; the result is a new handle.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
GgStatus gg_pairing_rotate(const GgPairing *p, GgPairing **out);

/**
 * Terms `1..=max` of a counting sequence as a comma-separated decimal
 * string. Values within the enumeration cap are cross-checked by
 * brute force; disagreement returns `Mismatch`.
 *
 * # Safety
 * `out` must be writable; free the result with `gg_string_free`.
 */
GgStatus gg_sequence(GgSequence which, size_t max, bool allow_large, char **out);

/**
 * Exact moments `m_2 .. m_2N` and free cumulants of a weight.
 * `param` is an integer, decimal or `p/q` string (ignored for `Constant`).
 *
 * # Safety
 * `param` must be NULL or NUL-terminated; `out` writable.
 */
GgStatus gg_moments_new(GgWeight weight,
                        const char *param,
                        size_t order,
                        bool allow_large,
                        GgMoments **out);

/**
 * # Safety
 * `m` must be NULL or a live handle.
 */
void gg_moments_free(GgMoments *m);

/**
 * Largest half-order `N` held by the table (0 for NULL).
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t gg_moments_order(const GgMoments *m);

/**
 * `m_{2n}` as an exact `"p/q"` string.
 *
 * # Safety
 * `m` live handle, `out` writable.
 */
GgStatus gg_moments_moment(const GgMoments *m, size_t n, char **out);

/**
 * `m_{2n}` rounded to a double.
 *
 * # Safety
 * `m` live handle, `out` writable.
 */
GgStatus gg_moments_moment_f64(const GgMoments *m, size_t n, double *out);

/**
 * Free cumulant `r_{2n}` as an exact `"p/q"` string.
 *
 * # Safety
 * `m` live handle, `out` writable.
 */
GgStatus gg_moments_cumulant(const GgMoments *m, size_t n, char **out);

/**
 * Moments `m_2 .. m_2N` of `D_sqrt(b) mu ⊞ D_sqrt(1-b) gamma_0`, where `mu`
 * has the given weight, as comma-separated `"p/q"` strings. Both
 * computation routes must agree, otherwise `Mismatch` is returned.
 *
 * # Safety
 * `param` and `b` NUL-terminated (param may be NULL for `Constant`); `out` writable.
 */
GgStatus gg_mu_b_moments(GgWeight weight,
                         const char *param,
                         const char *b,
                         size_t order,
                         char **out);

/**
 * Monte Carlo spectral moments of `n x n` Markov matrices scaled by
 * `1/sqrt(n)`. Writes `kmax` entries (k = 1..kmax) into each of `means`,
 * `stderrs` and `targets`.
 *
 * # Safety
 * each output buffer must hold `kmax` doubles.
 */
GgStatus gg_markov_mc(size_t n,
                      size_t trials,
                      size_t kmax,
                      GgDistribution dist,
                      uint64_t seed,
                      double *means,
                      double *stderrs,
                      double *targets);

/**
 * Positive semidefiniteness of the Gram matrix `[f(sigma^-1 tau)]` over
 * `S(n)`, `n <= 5`. `*psd` is set to 1 or 0 and `*min_eigenvalue` to the
 * smallest eigenvalue.
 *
 * # Safety
 * `psd` and `min_eigenvalue` must be writable.
 */
GgStatus gg_perm_check_pd(size_t n,
                          GgKernel kernel,
                          double param,
                          double tol,
                          int32_t *psd,
                          double *min_eigenvalue);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GGAUSS_H */
