#ifndef PAINLEVE3_H
#define PAINLEVE3_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum P3Status {
  P3Ok = 0,
  P3NonDivisible = 1,
  P3PoleHit = 2,
  P3HalfIntegerM = 3,
  P3GammaPole = 4,
  P3NonExactPower = 5,
  P3DegenerateDenominator = 6,
  P3UnclassifiedSingularity = 7,
  P3ZeroInitialValue = 8,
  P3QuadratureDivergence = 9,
  P3TruncationBudget = 10,
  P3DegenerateLambda = 11,
  P3BranchTracking = 12,
  P3NonGeneric = 13,
  P3ExcludedReMu = 14,
  P3BarnesZero = 15,
  P3InvalidArgument = 100,
} P3Status;

/**
 * Opaque truncated Maclaurin solution of the D8 equation.
 */
typedef struct P3Series P3Series;

/**
 * Opaque Umemura sequence handle.
 */
typedef struct P3Umemura P3Umemura;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread. Borrowed;
 * valid until the next failing call on the same thread.
 */
const char *p3_last_error_message(void);

/**
 * Free a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a `p3_*` function and not freed before.
 */
void p3_string_free(char *s);

/**
 * Create a sequence for rational m given as "p/q". Null on bad input.
 */
struct P3Umemura *p3_umemura_new(const char *m);

/**
 * Extend the sequence through index n by the exact recurrence.
 *
 * # Safety
 * `h` must be a live handle from `p3_umemura_new`.
 */
enum P3Status p3_umemura_extend(struct P3Umemura *h, int64_t n);

/**
 * s_n(0; m) as a rational string; caller frees with `p3_string_free`.
 *
 * # Safety
 * `h` must be a live handle extended through n.
 */
char *p3_umemura_value_at_zero(const struct P3Umemura *h, int64_t n);

/**
 * Degree of s_n, or -1 when the index is unavailable.
 *
 * # Safety
 * `h` must be a live handle.
 */
int64_t p3_umemura_degree(const struct P3Umemura *h, int64_t n);

/**
 * # Safety
 * `h` must come from `p3_umemura_new` and not be freed twice.
 */
void p3_umemura_free(struct P3Umemura *h);

/**
 * The unique analytic-at-0 solution with U(0) = u0; `order` coefficients.
 */
enum P3Status p3_d8_series_new(double u0_re, double u0_im, int order, struct P3Series **out);

/**
 * U(0; m) = tan(pi (m + 1/2)/2).
 */
enum P3Status p3_d8_initial_value(double m_re, double m_im, double *out_re, double *out_im);

/**
 * Evaluate the series at z (validity-guarded).
 *
 * # Safety
 * `h` must be a live handle from `p3_d8_series_new`.
 */
enum P3Status p3_series_eval(const struct P3Series *h,
                             double z_re,
                             double z_im,
                             double *out_re,
                             double *out_im);

/**
 * Empirical validity radius of the truncated series.
 *
 * # Safety
 * `h` must be a live handle.
 */
double p3_series_radius(const struct P3Series *h);

/**
 * # Safety
 * `h` must come from `p3_d8_series_new` and not be freed twice.
 */
void p3_series_free(struct P3Series *h);

/**
 * ln D_lambda(r): method 0 = automatic, 1 = series, 2 = Nystrom.
 */
enum P3Status p3_logdet(double lambda_re,
                        double lambda_im,
                        double r_re,
                        double r_im,
                        int method,
                        double *out_re,
                        double *out_im);

/**
 * sigma(r) and sigma'(r) for lambda(m); automatic method selection.
 */
enum P3Status p3_sigma(double lambda_re,
                       double lambda_im,
                       double r_re,
                       double r_im,
                       double *sigma_re,
                       double *sigma_im,
                       double *sigma_prime_re,
                       double *sigma_prime_im);

/**
 * U(z; m) reconstructed from the determinant side (Painleve-III D8).
 */
enum P3Status p3_u_from_fredholm(double z_re,
                                 double z_im,
                                 double m_re,
                                 double m_im,
                                 double *out_re,
                                 double *out_im);

/**
 * u_n(0; m) by the exact product formula, as a rational string.
 */
char *p3_un_zero_product(int64_t n, const char *m);

/**
 * Even/odd confluence gaps at z for index j (rational m as "p/q").
 */
enum P3Status p3_confluence_gap(int64_t j,
                                const char *m,
                                double z_re,
                                double z_im,
                                double *out_even,
                                double *out_odd);

/**
 * u_n(x0; m) through the jet evaluation route at a real rational point
 * x0 = "p/q".
 */
enum P3Status p3_un_value(int64_t n, const char *m, const char *x0, double *out_re, double *out_im);

/**
 * Run the acceptance suite; returns 0 when every criterion passes, 2 when
 * an exact identity fails, 3 when a numerical tolerance fails.
 */
int p3_verify(double tol_scale, uint64_t seed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PAINLEVE3_H */
