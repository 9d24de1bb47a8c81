#ifndef LINHYP_H
#define LINHYP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LinhypStatus {
  LINHYP_STATUS_OK = 0,
  LINHYP_STATUS_NULL_POINTER = 1,
  LINHYP_STATUS_INVALID_ARGUMENT = 2,
  LINHYP_STATUS_NON_FINITE = 3,
  LINHYP_STATUS_DIMENSION_MISMATCH = 4,
  LINHYP_STATUS_NOT_HYPERBOLIC = 5,
  LINHYP_STATUS_NON_CONVERGENCE = 6,
  LINHYP_STATUS_SHIFT_TOO_SMALL = 7,
  LINHYP_STATUS_BUFFER_TOO_SMALL = 8,
  LINHYP_STATUS_PANIC = 9,
} LinhypStatus;

typedef enum LinhypVerdict {
  LINHYP_VERDICT_HYPERBOLIC = 0,
  LINHYP_VERDICT_NON_HYPERBOLIC = 1,
  LINHYP_VERDICT_INDETERMINATE = 2,
} LinhypVerdict;

/**
 * Opaque matrix handle.
 */
typedef struct LinhypMatrix LinhypMatrix;

typedef struct LinhypClassification {
  enum LinhypVerdict verdict;
  size_t s;
  size_t u;
  size_t c;
  double tau;
} LinhypClassification;

typedef struct LinhypMargin {
  double lower;
  double upper;
  double omega_star;
  size_t iterations;
  bool hyperbolic;
} LinhypMargin;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *linhyp_status_message(enum LinhypStatus status);

/**
 * Builds a `d × d` matrix from `d*d` row-major entries.
 *
 * # Safety
 * `data` must point to `d*d` readable doubles and `out` to writable storage
 * for one pointer.
 */
enum LinhypStatus linhyp_matrix_new(size_t d, const double *data, struct LinhypMatrix **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `m` must be null or a handle returned by this library that has not been
 * freed yet.
 */
void linhyp_matrix_free(struct LinhypMatrix *m);

/**
 * Dimension of the matrix, 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t linhyp_matrix_dim(const struct LinhypMatrix *m);

/**
 * Entry `(i, j)`.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum LinhypStatus linhyp_matrix_get(const struct LinhypMatrix *m, size_t i, size_t j, double *out);

/**
 * Eigenvalues, `ε`-band inertia and verdict.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum LinhypStatus linhyp_classify(const struct LinhypMatrix *m,
                                  double tau,
                                  struct LinhypClassification *out);

/**
 * Writes the `d` eigenvalues, sorted by real then imaginary part, to `re`
 * and `im`, each of length at least `len`.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` must each point to `len`
 * writable doubles.
 */
enum LinhypStatus linhyp_eigenvalues(const struct LinhypMatrix *m,
                                     double *re,
                                     double *im,
                                     size_t len);

/**
 * Distance to the nearest non-hyperbolic matrix. Non-hyperbolic input
 * succeeds with zero bounds and `hyperbolic = false`.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum LinhypStatus linhyp_margin(const struct LinhypMatrix *m,
                                double tau,
                                double tol,
                                struct LinhypMargin *out);

/**
 * `A + εI` with `ε = min(eps_cap, δ/2)`; the new handle must be freed by the
 * caller.
 *
 * # Safety
 * `m` must be a live handle; `epsilon` and `out` must be writable.
 */
enum LinhypStatus linhyp_hyperbolize(const struct LinhypMatrix *m,
                                     double tau,
                                     double eps_cap,
                                     double *epsilon,
                                     struct LinhypMatrix **out);

/**
 * `e^{tA}`; the new handle must be freed by the caller.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum LinhypStatus linhyp_expm(const struct LinhypMatrix *m, double t, struct LinhypMatrix **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINHYP_H */
