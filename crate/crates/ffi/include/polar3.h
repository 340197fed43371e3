#ifndef POLAR3_H
#define POLAR3_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum P3Status {
  P3_STATUS_OK = 0,
  P3_STATUS_NULL_POINTER = 1,
  P3_STATUS_INVALID_ARGUMENT = 2,
  P3_STATUS_NOT_UNITARY = 3,
  P3_STATUS_NOT_HERMITIAN = 4,
  P3_STATUS_NOT_POSITIVE_SEMIDEFINITE = 5,
  P3_STATUS_ZERO_TRACE = 6,
  P3_STATUS_NOT_UNIT = 7,
  P3_STATUS_NOT_ORTHOGONAL = 8,
  P3_STATUS_INCONSISTENT = 9,
  P3_STATUS_STRUCTURE_VIOLATION = 10,
  P3_STATUS_TOLERANCE_EXCEEDED = 11,
  P3_STATUS_NO_CONVERGENCE = 12,
  P3_STATUS_PANIC = 13,
} P3Status;

/**
 * Opaque 3x3 complex matrix.
 */
typedef struct P3Matrix P3Matrix;

/**
 * Opaque seeded random generator.
 */
typedef struct P3Rng P3Rng;

/**
 * The nine parameters in radians.
 */
typedef struct P3Params {
  double phi;
  double theta;
  double varphi;
  double chi;
  double mu;
  double alpha1;
  double alpha2;
  double alpha3;
  double beta2;
} P3Params;

/**
 * Characteristic decomposition and regularity of a coherency matrix.
 */
typedef struct P3CharSummary {
  double trace;
  /**
   * Nonincreasing.
   */
  double eigenvalues[3];
  double p1;
  double p2;
  /**
   * Spectrum of the real part of the middle component, nonincreasing.
   */
  double m_hat[3];
  double chi_m;
  double im_norm;
  /**
   * 1 when the middle component is regular, 0 otherwise.
   */
  uint8_t regular;
} P3CharSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *p3_status_message(enum P3Status status);

/**
 * New identity matrix. Release with `p3_matrix_free`.
 */
struct P3Matrix *p3_matrix_identity(void);

/**
 * Builds a matrix from row-major real and imaginary parts.
 *
 * # Safety
 * `re` and `im` must each point to nine readable doubles and `out` must
 * be writable.
 */
enum P3Status p3_matrix_from_parts(const double *re, const double *im, struct P3Matrix **out);

/**
 * Copies the row-major real and imaginary parts out of a matrix.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` must each point to nine
 * writable doubles.
 */
enum P3Status p3_matrix_parts(const struct P3Matrix *m, double *re, double *im);

/**
 * Releases a matrix. Null is ignored.
 *
 * # Safety
 * `m` must be null or a handle not yet freed.
 */
void p3_matrix_free(struct P3Matrix *m);

/**
 * Composes the unitary for `params`.
 *
 * # Safety
 * `params` must be readable and `out` writable.
 */
enum P3Status p3_compose(const struct P3Params *params, struct P3Matrix **out);

/**
 * Recovers canonical parameters. `tolerance` caps the reconstruction
 * residual; pass a non-positive value for the default of 1e-10.
 * `residual` may be null.
 *
 * # Safety
 * `m` must be a live handle, `params` writable, `residual` null or
 * writable.
 */
enum P3Status p3_recover(const struct P3Matrix *m,
                         double tolerance,
                         struct P3Params *params,
                         double *residual);

/**
 * Characteristic decomposition of a Hermitian positive semidefinite matrix.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum P3Status p3_characteristic(const struct P3Matrix *m, struct P3CharSummary *out);

/**
 * New generator; the same seed gives the same stream on every platform.
 */
struct P3Rng *p3_rng_new(uint64_t seed);

/**
 * Releases a generator. Null is ignored.
 *
 * # Safety
 * `rng` must be null or a handle not yet freed.
 */
void p3_rng_free(struct P3Rng *rng);

/**
 * Draws the next Haar-random unitary.
 *
 * # Safety
 * `rng` must be a live handle not used concurrently, and `out` writable.
 */
enum P3Status p3_haar(struct P3Rng *rng, struct P3Matrix **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLAR3_H */
