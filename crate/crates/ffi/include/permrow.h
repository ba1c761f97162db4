#ifndef PERMROW_H
#define PERMROW_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PermrowStatus {
  PERMROW_STATUS_OK = 0,
  PERMROW_STATUS_NULL_POINTER = 1,
  PERMROW_STATUS_INVALID_ARGUMENT = 2,
  PERMROW_STATUS_PARSE = 3,
  PERMROW_STATUS_NUMERICAL = 4,
  PERMROW_STATUS_IO = 5,
  PERMROW_STATUS_PANIC = 6,
} PermrowStatus;

typedef enum PermrowMethod {
  PERMROW_METHOD_SPECTRAL = 0,
  PERMROW_METHOD_REGRESSION = 1,
  PERMROW_METHOD_DIRECT_SORTING = 2,
  PERMROW_METHOD_ORDER_STATISTIC = 3,
  PERMROW_METHOD_I_REP = 4,
} PermrowMethod;

typedef enum PermrowSign {
  PERMROW_SIGN_ROW_MAJORITY = 0,
  PERMROW_SIGN_FIRST_NEGATIVE = 1,
} PermrowSign;

typedef enum PermrowTarget {
  PERMROW_TARGET_THETA_R = 0,
  PERMROW_TARGET_THETA_L = 1,
  PERMROW_TARGET_RANGE = 2,
} PermrowTarget;

typedef enum PermrowRegime {
  PERMROW_REGIME_WEAK = 0,
  PERMROW_REGIME_INTERMEDIATE = 1,
  PERMROW_REGIME_STRONG = 2,
} PermrowRegime;

typedef enum PermrowVariant {
  PERMROW_VARIANT_WELCH = 0,
  PERMROW_VARIANT_POOLED = 1,
} PermrowVariant;

/**
 * Result of one estimator run.
 */
typedef struct PermrowEstimates PermrowEstimates;

/**
 * Validated observation matrix.
 */
typedef struct PermrowMatrix PermrowMatrix;

/**
 * Monte Carlo risk report.
 */
typedef struct PermrowRiskReport PermrowRiskReport;

typedef struct PermrowFTest {
  double f;
  size_t df1;
  size_t df2;
  double p_value;
} PermrowFTest;

typedef struct PermrowTTest {
  double t;
  double df;
  double p_value;
} PermrowTTest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failed call on this thread, or null.
 *
 * The pointer stays valid until the next `permrow_*` call on this thread.
 */
const char *permrow_last_error(void);

/**
 * Copies a row-major `rows x cols` array into a new matrix handle.
 *
 * # Safety
 * `data` must point to `rows * cols` readable doubles and `out` must be
 * writable.
 */
enum PermrowStatus permrow_matrix_new(const double *data,
                                      size_t rows,
                                      size_t cols,
                                      struct PermrowMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from [`permrow_matrix_new`] not yet freed.
 */
void permrow_matrix_free(struct PermrowMatrix *m);

/**
 * Runs an estimator. `trim_fraction` is used by the iRep method only.
 *
 * # Safety
 * `m` must be a live matrix handle and `out` writable.
 */
enum PermrowStatus permrow_estimate(const struct PermrowMatrix *m,
                                    enum PermrowMethod method,
                                    enum PermrowSign sign,
                                    double trim_fraction,
                                    struct PermrowEstimates **out);

/**
 * # Safety
 * `e` must be null or a handle from [`permrow_estimate`] not yet freed.
 */
void permrow_estimates_free(struct PermrowEstimates *e);

/**
 * Number of samples, or 0 for a null handle.
 *
 * # Safety
 * `e` must be null or a live estimates handle.
 */
size_t permrow_estimates_len(const struct PermrowEstimates *e);

/**
 * Copies one estimated vector into `out`, which must hold exactly
 * [`permrow_estimates_len`] doubles.
 *
 * # Safety
 * `e` must be a live handle and `out` must point to `len` writable doubles.
 */
enum PermrowStatus permrow_estimates_copy(const struct PermrowEstimates *e,
                                          enum PermrowTarget target,
                                          double *out,
                                          size_t len);

/**
 * Copies the estimated column order (zero-based, smallest score first).
 * Fails with `InvalidArgument` for methods that do not compute one.
 *
 * # Safety
 * `e` must be a live handle and `out` must point to `len` writable values.
 */
enum PermrowStatus permrow_estimates_order(const struct PermrowEstimates *e,
                                           size_t *out,
                                           size_t len);

/**
 * Leading singular value of the centered data for spectral methods.
 *
 * # Safety
 * `e` must be a live handle and `out` writable.
 */
enum PermrowStatus permrow_estimates_singular_value(const struct PermrowEstimates *e, double *out);

/**
 * `√(ln p / n)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PermrowStatus permrow_rate_psi(size_t n, size_t p, double *out);

/**
 * Minimax rate for one extreme column with bound `beta`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PermrowStatus permrow_minimax_rate(double t,
                                        double beta,
                                        double sigma,
                                        size_t n,
                                        size_t p,
                                        double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum PermrowStatus permrow_classify_snr(double t,
                                        double sigma,
                                        size_t n,
                                        size_t p,
                                        enum PermrowRegime *out);

/**
 * One-way ANOVA. `values` holds the groups back to back and `sizes` the
 * length of each group.
 *
 * # Safety
 * `values` must hold the sum of `sizes` doubles, `sizes` must hold `groups`
 * values and `out` must be writable.
 */
enum PermrowStatus permrow_f_test(const double *values,
                                  const size_t *sizes,
                                  size_t groups,
                                  struct PermrowFTest *out);

/**
 * Two-sample t test with a two-sided p-value.
 *
 * # Safety
 * `x` and `y` must hold `nx` and `ny` doubles, `out` must be writable.
 */
enum PermrowStatus permrow_t_test(const double *x,
                                  size_t nx,
                                  const double *y,
                                  size_t ny,
                                  enum PermrowVariant variant,
                                  struct PermrowTTest *out);

/**
 * Runs a Monte Carlo study described by a JSON config (the same format as
 * the `simulate` command). `seed` replaces the config's seed.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` writable.
 */
enum PermrowStatus permrow_simulate(const char *config_json,
                                    size_t reps,
                                    uint64_t seed,
                                    struct PermrowRiskReport **out);

/**
 * # Safety
 * `r` must be null or a handle from [`permrow_simulate`] not yet freed.
 */
void permrow_report_free(struct PermrowRiskReport *r);

/**
 * Tidy CSV of the per-replicate risks. Free with [`permrow_string_free`].
 * Returns null for a null handle.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
char *permrow_report_csv(const struct PermrowRiskReport *r);

/**
 * Full report as JSON. Free with [`permrow_string_free`].
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
char *permrow_report_json(const struct PermrowRiskReport *r);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void permrow_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERMROW_H */
