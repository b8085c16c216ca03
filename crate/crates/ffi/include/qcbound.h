#ifndef QCBOUND_H
#define QCBOUND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Most bound reports [`qc_evaluate_all`] can produce.
 */
#define QC_MAX_REPORTS 7

typedef enum QcIdentity {
  QC_IDENTITY_ENDPOINT_RULE = 0,
  QC_IDENTITY_TRAPEZOID = 1,
} QcIdentity;

/**
 * Result of every fallible call.
 */
typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_ARGUMENT = 1,
  QC_STATUS_INVALID_UTF8 = 2,
  QC_STATUS_PARSE = 3,
  QC_STATUS_INVALID_INPUT = 4,
  QC_STATUS_DOMAIN = 5,
  QC_STATUS_NON_FINITE = 6,
  QC_STATUS_TOLERANCE_NOT_REACHED = 7,
  QC_STATUS_KERNEL_DIVERGENT = 8,
  /**
   * A Rust panic was caught at the boundary.
   */
  QC_STATUS_INTERNAL = 9,
} QcStatus;

typedef enum QcTheorem {
  QC_THEOREM_T21 = 0,
  QC_THEOREM_C11 = 1,
  QC_THEOREM_T22 = 2,
  QC_THEOREM_T23 = 3,
  QC_THEOREM_T31 = 4,
  QC_THEOREM_C31 = 5,
  QC_THEOREM_T32 = 6,
} QcTheorem;

/**
 * Opaque parsed expression in the variable `t`.
 */
typedef struct QcExpr QcExpr;

/**
 * Interval `[a, b]`, evaluation point `x` and order `n`.
 */
typedef struct QcProblem {
  double a;
  double b;
  double x;
  size_t n;
} QcProblem;

typedef struct QcIdentityReport {
  enum QcIdentity kind;
  double a;
  double b;
  double x;
  size_t n;
  double lhs;
  double rhs;
  double residual;
  double scale;
  double tol;
  bool pass;
} QcIdentityReport;

typedef struct QcBoundReport {
  enum QcTheorem theorem;
  double a;
  double b;
  double x;
  size_t n;
  double p;
  double q;
  double bound;
  double measured_error;
  double slack_ratio;
  bool hypothesis_ok;
  bool holds;
} QcBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next `qc_` call on the same thread.
 */
const char *qc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qc_version(void);

/**
 * Parse `source` into a new expression handle stored in `*out`.
 *
 * # Safety
 * `source` is a NUL-terminated string and `out` is valid for writes.
 */
enum QcStatus qc_expr_parse(const char *source, struct QcExpr **out);

/**
 * Release a handle from [`qc_expr_parse`]. Null is ignored.
 *
 * # Safety
 * `expr` is null or a handle not yet freed.
 */
void qc_expr_free(struct QcExpr *expr);

/**
 * # Safety
 * `expr` is a live handle and `out` is valid for writes.
 */
enum QcStatus qc_expr_eval(const struct QcExpr *expr, double t, double *out);

/**
 * `k`-th derivative at `t` by Taylor-mode differentiation, `k <= 12`.
 *
 * # Safety
 * `expr` is a live handle and `out` is valid for writes.
 */
enum QcStatus qc_expr_derivative(const struct QcExpr *expr, double t, size_t k, double *out);

/**
 * Endpoint-rule identity at `problem.x`.
 *
 * # Safety
 * `expr` is a live handle and `out` is valid for writes.
 */
enum QcStatus qc_check_endpoint_identity(const struct QcExpr *expr,
                                         struct QcProblem problem,
                                         double tol,
                                         struct QcIdentityReport *out);

/**
 * Corrected trapezoid identity; `problem.x` is ignored.
 *
 * # Safety
 * `expr` is a live handle and `out` is valid for writes.
 */
enum QcStatus qc_check_trapezoid_identity(const struct QcExpr *expr,
                                          struct QcProblem problem,
                                          double tol,
                                          struct QcIdentityReport *out);

/**
 * Absolute error of the endpoint rule at `problem.x`.
 *
 * # Safety
 * `expr` is a live handle and `out` is valid for writes.
 */
enum QcStatus qc_measured_endpoint_error(const struct QcExpr *expr,
                                         struct QcProblem problem,
                                         double *out);

/**
 * Absolute error of the corrected trapezoid rule.
 *
 * # Safety
 * `expr` is a live handle and `out` is valid for writes.
 */
enum QcStatus qc_measured_trapezoid_error(const struct QcExpr *expr,
                                          struct QcProblem problem,
                                          double *out);

/**
 * One bound. `p` and `q` must be conjugate for T22, T23 and T32; T31 uses
 * only `q` (>= 1); the rest ignore both.
 *
 * # Safety
 * `expr` is a live handle and `out` is valid for writes.
 */
enum QcStatus qc_bound(const struct QcExpr *expr,
                       enum QcTheorem theorem,
                       struct QcProblem problem,
                       double p,
                       double q,
                       double *out);

/**
 * Every applicable bound with its measured error and hypothesis verdict.
 * Writes up to `capacity` reports to `out` and the number produced to
 * `*len`; [`QC_MAX_REPORTS`] always suffices.
 *
 * # Safety
 * `expr` is a live handle, `out` is valid for `capacity` writes and `len`
 * for one.
 */
enum QcStatus qc_evaluate_all(const struct QcExpr *expr,
                              struct QcProblem problem,
                              double p,
                              double q,
                              struct QcBoundReport *out,
                              size_t capacity,
                              size_t *len);

/**
 * Quasi-convexity of a sample sequence up to `tol`. On a violation the
 * indices of a witnessing triple go to `witness` when it is non-null.
 *
 * # Safety
 * `samples` is valid for `len` reads, `is_qc` for one write and `witness`
 * is null or valid for three writes.
 */
enum QcStatus qc_quasiconvex_samples(const double *samples,
                                     size_t len,
                                     double tol,
                                     bool *is_qc,
                                     size_t *witness);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCBOUND_H */
