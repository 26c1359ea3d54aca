#ifndef HYPQ_H
#define HYPQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define HYPQ_CASE_GAUSS 0

#define HYPQ_CASE_PLUS_ONE 1

#define HYPQ_CASE_MINUS_ONE 2

#define HYPQ_BRANCH_ANALYTIC 0

#define HYPQ_BRANCH_SINGULAR 1

typedef enum HypqStatus {
  HYPQ_STATUS_OK = 0,
  HYPQ_STATUS_INVALID_PARAMS = 1,
  HYPQ_STATUS_DOMAIN_ERROR = 2,
  HYPQ_STATUS_NOT_CONVERGED = 3,
  HYPQ_STATUS_RESONANT_EXPONENT = 4,
  HYPQ_STATUS_NOT_INDICIAL_ROOT = 5,
  HYPQ_STATUS_POLE_IN_COEFFICIENTS = 6,
  HYPQ_STATUS_ILL_CONDITIONED = 7,
  HYPQ_STATUS_PARSE = 8,
  HYPQ_STATUS_NULL_POINTER = 9,
  HYPQ_STATUS_PANIC = 10,
} HypqStatus;

/**
 * Exact Frobenius coefficients together with the ODE they solve.
 */
typedef struct HypqCoeffs HypqCoeffs;

typedef struct HypqReport HypqReport;

/**
 * Series truncation controls. Pass NULL wherever one is accepted to get the defaults.
 */
typedef struct HypqSeriesControl {
  size_t max_terms;
  double rel_tol;
  size_t consecutive_small;
} HypqSeriesControl;

typedef struct HypqConnection {
  double coef_a;
  double coef_b;
  double residual;
  double condition;
} HypqConnection;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *hypq_version(void);

/**
 * Message of the last failure on this thread, or NULL. Valid until the next failing call on the same thread.
 */
const char *hypq_last_error(void);

struct HypqSeriesControl hypq_series_control_default(void);

/**
 * ₂F₁(a, b; c; z).
 *
 * # Safety
 * `ctl` is NULL or valid; `out` is valid for writes.
 */
enum HypqStatus hypq_hyp2f1(double a,
                            double b,
                            double c,
                            double z,
                            const struct HypqSeriesControl *ctl,
                            double *out);

/**
 * Left-hand side (1+x)^{-2a} ₂F₁(a, b; 2b+shift; 4x/(1+x)²) of the selected case.
 *
 * # Safety
 * `ctl` is NULL or valid; `out` is valid for writes.
 */
enum HypqStatus hypq_lhs(int32_t case_,
                         double a,
                         double b,
                         double x,
                         const struct HypqSeriesControl *ctl,
                         double *out);

/**
 * Right-hand side series in x² of the selected case.
 *
 * # Safety
 * `ctl` is NULL or valid; `out` is valid for writes.
 */
enum HypqStatus hypq_rhs(int32_t case_,
                         double a,
                         double b,
                         double x,
                         const struct HypqSeriesControl *ctl,
                         double *out);

/**
 * Recurrence coefficients c_0..c_{n_max} (c_0 = 1) at the indicial root `lambda`.
 * `a`, `b` and `lambda` are decimal or "p/q" strings, converted exactly.
 *
 * # Safety
 * String arguments are NUL-terminated; `out` is valid for writes.
 */
enum HypqStatus hypq_coeffs_recurrence(int32_t case_,
                                       const char *a,
                                       const char *b,
                                       const char *lambda,
                                       size_t n_max,
                                       struct HypqCoeffs **out);

/**
 * Closed-form coefficients c_0..c_{n_max} for `case`/`branch`.
 *
 * # Safety
 * String arguments are NUL-terminated; `out` is valid for writes.
 */
enum HypqStatus hypq_coeffs_closed_form(int32_t case_,
                                        int32_t branch,
                                        const char *a,
                                        const char *b,
                                        size_t n_max,
                                        struct HypqCoeffs **out);

/**
 * Number of stored coefficients (n_max + 1).
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum HypqStatus hypq_coeffs_len(const struct HypqCoeffs *h, size_t *out);

/**
 * Coefficient `i` rounded to double.
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum HypqStatus hypq_coeffs_get(const struct HypqCoeffs *h, size_t i, double *out);

/**
 * Coefficient `i` as an exact "p/q" string. Free with `hypq_string_free`.
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum HypqStatus hypq_coeffs_get_string(const struct HypqCoeffs *h, size_t i, char **out);

/**
 * The exponent λ as an exact string. Free with `hypq_string_free`.
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum HypqStatus hypq_coeffs_lambda_string(const struct HypqCoeffs *h, char **out);

/**
 * Exact equality of exponent and every coefficient.
 *
 * # Safety
 * `x` and `y` are live handles; `out` is valid for writes.
 */
enum HypqStatus hypq_coeffs_equal(const struct HypqCoeffs *x,
                                  const struct HypqCoeffs *y,
                                  bool *out);

/**
 * x^λ Σ cₙxⁿ at `x`.
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum HypqStatus hypq_coeffs_eval(const struct HypqCoeffs *h, double x, double *out);

/**
 * ODE residual of the truncated series at `x`, divided by its largest term.
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum HypqStatus hypq_coeffs_residual(const struct HypqCoeffs *h, double x, double *out);

/**
 * # Safety
 * `h` is NULL or a handle not yet freed.
 */
void hypq_coeffs_free(struct HypqCoeffs *h);

/**
 * Seeded identity suite over `samples` random points with |x| ≤ 0.6.
 *
 * # Safety
 * `ctl` is NULL or valid; `out` is valid for writes.
 */
enum HypqStatus hypq_check_identity(int32_t case_,
                                    size_t samples,
                                    uint64_t seed,
                                    double tol,
                                    const struct HypqSeriesControl *ctl,
                                    struct HypqReport **out);

/**
 * Pass, fail and skipped counts. Any out-pointer may be NULL.
 *
 * # Safety
 * `h` is a live handle; non-NULL out-pointers are valid for writes.
 */
enum HypqStatus hypq_report_counts(const struct HypqReport *h,
                                   size_t *n_pass,
                                   size_t *n_fail,
                                   size_t *n_skipped);

/**
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum HypqStatus hypq_report_max_rel_err(const struct HypqReport *h, double *out);

/**
 * The report in the CLI's JSON schema. Free with `hypq_string_free`.
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum HypqStatus hypq_report_to_json(const struct HypqReport *h, char **out);

/**
 * # Safety
 * `h` is NULL or a handle not yet freed.
 */
void hypq_report_free(struct HypqReport *h);

/**
 * Least-squares connection constants from `n_xs` points in (0, 1).
 *
 * # Safety
 * `xs` points to `n_xs` doubles; `ctl` is NULL or valid; `out` is valid for writes.
 */
enum HypqStatus hypq_fit(int32_t case_,
                         double a,
                         double b,
                         const double *xs,
                         size_t n_xs,
                         const struct HypqSeriesControl *ctl,
                         struct HypqConnection *out);

/**
 * # Safety
 * `s` is NULL or a string returned by this library and not yet freed.
 */
void hypq_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPQ_H */
