#ifndef ALWP_H
#define ALWP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Weierstrass classification by the counting criterion.
 */
typedef enum AlwpClassification {
  AlwpAllWeierstrass = 0,
  AlwpNoFixedPoints = 1,
  AlwpUndeterminedByCriterion = 2,
  AlwpGenusTooSmall = 3,
} AlwpClassification;

/**
 * Result code of every call.
 */
typedef enum AlwpStatus {
  AlwpOk = 0,
  AlwpNullPointer = 1,
  AlwpInvalidArgument = 2,
  AlwpNotExactDivisor = 3,
  AlwpIoError = 4,
  AlwpNumericError = 5,
  AlwpIndexOutOfRange = 6,
} AlwpStatus;

/**
 * Outcome of the numerical Wronskian test.
 */
typedef enum AlwpVerdict {
  AlwpNotWeierstrass = 0,
  AlwpLikelyWeierstrass = 1,
  AlwpInconclusive = 2,
} AlwpVerdict;

/**
 * Opaque loaded cusp form basis.
 */
typedef struct AlwpBasis AlwpBasis;

/**
 * Opaque enumeration of the fixed points of the full involution.
 */
typedef struct AlwpFixedPoints AlwpFixedPoints;

/**
 * A fixed point as an exact CM point: tau = (-b + sqrt(-d)) / (2a)
 * with the level form [a, b, c] of discriminant -d.
 */
typedef struct AlwpPoint {
  int64_t a;
  int64_t b;
  int64_t c;
  int64_t d;
  int64_t beta;
} AlwpPoint;

/**
 * Determinant interval and scale from one Wronskian evaluation.
 */
typedef struct AlwpWronskian {
  double det_re;
  double det_im;
  double det_rad;
  double hadamard;
  enum AlwpVerdict verdict;
} AlwpWronskian;

/**
 * Number of fixed points of W_Q on X_0(N). Returns
 * ALWP_NOT_EXACT_DIVISOR unless Q is an exact divisor of N with Q >= 2.
 */
enum AlwpStatus alwp_nu(int64_t level, int64_t q, int64_t *out);

/**
 * Genus of X_0(N).
 */
enum AlwpStatus alwp_genus(int64_t level, int64_t *out);

/**
 * Classify the fixed points of W_Q on X_0(N) by the counting
 * criterion.
 */
enum AlwpStatus alwp_classify(int64_t level, int64_t q, enum AlwpClassification *out);

/**
 * Enumerate the fixed points of the full involution at the given
 * level. The handle must be released with alwp_fixed_points_free.
 */
enum AlwpStatus alwp_fixed_points_new(int64_t level, struct AlwpFixedPoints **out);

/**
 * Number of points behind the handle.
 */
enum AlwpStatus alwp_fixed_points_count(const struct AlwpFixedPoints *handle, uintptr_t *out);

/**
 * Copy out the point at the given index.
 */
enum AlwpStatus alwp_fixed_points_get(const struct AlwpFixedPoints *handle,
                                      uintptr_t index,
                                      struct AlwpPoint *out);

/**
 * Release an enumeration handle. Passing NULL is a no-op.
 */
void alwp_fixed_points_free(struct AlwpFixedPoints *handle);

/**
 * Load a cusp form basis from a text file. The handle must be
 * released with alwp_basis_free.
 */
enum AlwpStatus alwp_basis_load(const char *path, struct AlwpBasis **out);

/**
 * Level and genus of a loaded basis.
 */
enum AlwpStatus alwp_basis_info(const struct AlwpBasis *handle,
                                int64_t *out_level,
                                uintptr_t *out_genus);

/**
 * Release a basis handle. Passing NULL is a no-op.
 */
void alwp_basis_free(struct AlwpBasis *handle);

/**
 * Run the Wronskian test at one fixed point of the enumeration.
 * digits is the working precision (minimum 15); trunc 0 selects the
 * default series truncation.
 */
enum AlwpStatus alwp_wronskian(const struct AlwpBasis *basis,
                               const struct AlwpFixedPoints *points,
                               uintptr_t index,
                               uint32_t digits,
                               uintptr_t trunc,
                               struct AlwpWronskian *out);

#endif  /* ALWP_H */
