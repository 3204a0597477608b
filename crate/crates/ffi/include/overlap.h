#ifndef OVERLAP_H
#define OVERLAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every call.
 */
typedef enum OlapStatus {
  OLAP_STATUS_OK = 0,
  OLAP_STATUS_NULL_POINTER = 1,
  OLAP_STATUS_INVALID_PARAMETER = 2,
  OLAP_STATUS_DOMAIN = 3,
  OLAP_STATUS_FIT = 4,
  OLAP_STATUS_DEGENERATE_SUPPORT = 5,
  OLAP_STATUS_INSUFFICIENT_DATA = 6,
  OLAP_STATUS_NUMERICAL_INTEGRITY = 7,
  OLAP_STATUS_IO = 8,
  OLAP_STATUS_PANIC = 9,
} OlapStatus;

typedef enum OlapMeasure {
  OLAP_MEASURE_OM = 0,
  OLAP_MEASURE_OVL = 1,
  OLAP_MEASURE_OB = 2,
  OLAP_MEASURE_OC = 3,
} OlapMeasure;

typedef enum OlapMethod {
  OLAP_METHOD_CLOSED_FORM = 0,
  OLAP_METHOD_QUADRATURE = 1,
  OLAP_METHOD_MONTE_CARLO = 2,
  OLAP_METHOD_MATCHING = 3,
  OLAP_METHOD_YOUDEN_DECOMPOSITION = 4,
} OlapMethod;

/**
 * Opaque density model.
 */
typedef struct OlapDensity OlapDensity;

typedef struct OlapEstimate {
  enum OlapMeasure measure;
  enum OlapMethod method;
  double value;
  /**
   * Zero except for Monte Carlo estimates.
   */
  double std_error;
  /**
   * Lattice points per axis, draws, or sample count, depending on `method`.
   */
  size_t size;
  bool has_seed;
  uint64_t seed;
  bool degenerate_support;
  size_t skipped;
} OlapEstimate;

typedef struct OlapTrialConfig {
  size_t n;
  double sigma;
  double alpha;
  double q0;
  double theta0;
} OlapTrialConfig;

typedef struct OlapTrialDecision {
  double xbar;
  double critical_value;
  double p_value;
  bool reject_h0;
  double q_at_estimate;
  double theta_threshold_for_q0;
  bool q_rule_accepts_new;
  double threshold_test_p_value;
} OlapTrialDecision;

typedef struct OlapBootstrapSummary {
  size_t b;
  double p05;
  double p50;
  double p95;
  double fraction_below_q0;
} OlapBootstrapSummary;

typedef struct OlapCrossmatch {
  double statistic;
  double raw_statistic;
  size_t n_cross;
  /**
   * Number of matched points after dropping a trailing odd sample.
   */
  size_t n;
  double total_distance;
  bool exact;
  bool truncated;
} OlapCrossmatch;

typedef struct OlapSetOverlap {
  double overlap_coefficient;
  double jaccard;
  double om;
  bool sandwich_holds;
} OlapSetOverlap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failed call on this thread, or null.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *olap_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *olap_version(void);

/**
 * Normal density `N(mean, sd²)`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum OlapStatus olap_density_normal(double mean, double sd, struct OlapDensity **out);

/**
 * Gaussian kernel density estimate. A non-positive or NaN `bandwidth`
 * selects Silverman's rule.
 *
 * # Safety
 * `samples` must point to `len` readable values; `out` must be valid for
 * writing one pointer.
 */
enum OlapStatus olap_density_kde(const double *samples,
                                 size_t len,
                                 double bandwidth,
                                 struct OlapDensity **out);

/**
 * Releases a density handle. Null is accepted and ignored.
 *
 * # Safety
 * `d` must be null or a handle not yet freed.
 */
void olap_density_free(struct OlapDensity *d);

/**
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum OlapStatus olap_density_pdf(const struct OlapDensity *d, double x, double *out);

/**
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum OlapStatus olap_density_cdf(const struct OlapDensity *d, double x, double *out);

/**
 * Integration window of a density.
 *
 * # Safety
 * `d` must be a live handle; `lo` and `hi` must be writable.
 */
enum OlapStatus olap_density_support(const struct OlapDensity *d, double *lo, double *hi);

/**
 * Fills `buf[0..n]` with draws from `d`.
 *
 * # Safety
 * `d` must be a live handle; `buf` must be writable for `n` values.
 */
enum OlapStatus olap_density_draw(const struct OlapDensity *d,
                                  size_t n,
                                  uint64_t seed,
                                  double *buf);

/**
 * Standard normal quantile.
 *
 * # Safety
 * `out` must be writable.
 */
enum OlapStatus olap_normal_quantile(double p, double *out);

/**
 * Closed-form `O_M` between `N(0, sigma²)` and `N(theta, sigma²)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum OlapStatus olap_q_normal(double theta, double sigma, struct OlapEstimate *out);

/**
 * `O_M` by quadrature on an `n_grid × n_grid` lattice.
 *
 * # Safety
 * `p0` and `p1` must be live handles; `out` must be writable.
 */
enum OlapStatus olap_om_quadrature(const struct OlapDensity *p0,
                                   const struct OlapDensity *p1,
                                   size_t n_grid,
                                   struct OlapEstimate *out);

/**
 * `O_B` by quadrature on an `n_grid × n_grid` lattice.
 *
 * # Safety
 * `p0` and `p1` must be live handles; `out` must be writable.
 */
enum OlapStatus olap_ob_quadrature(const struct OlapDensity *p0,
                                   const struct OlapDensity *p1,
                                   size_t n_grid,
                                   struct OlapEstimate *out);

/**
 * `OVL` by quadrature on `n_grid` points.
 *
 * # Safety
 * `p0` and `p1` must be live handles; `out` must be writable.
 */
enum OlapStatus olap_ovl_quadrature(const struct OlapDensity *p0,
                                    const struct OlapDensity *p1,
                                    size_t n_grid,
                                    struct OlapEstimate *out);

/**
 * `O_C` by quadrature on `n_grid` points.
 *
 * # Safety
 * `p0` and `p1` must be live handles; `out` must be writable.
 */
enum OlapStatus olap_oc_quadrature(const struct OlapDensity *p0,
                                   const struct OlapDensity *p1,
                                   size_t n_grid,
                                   struct OlapEstimate *out);

/**
 * `O_M` through the likelihood-ratio set decomposition.
 *
 * # Safety
 * `p0` and `p1` must be live handles; `out` must be writable.
 */
enum OlapStatus olap_om_youden(const struct OlapDensity *p0,
                               const struct OlapDensity *p1,
                               size_t n_grid,
                               struct OlapEstimate *out);

/**
 * Monte Carlo `O_M` with standard error.
 *
 * # Safety
 * `p0` and `p1` must be live handles; `out` must be writable.
 */
enum OlapStatus olap_om_monte_carlo(const struct OlapDensity *p0,
                                    const struct OlapDensity *p1,
                                    size_t n_draws,
                                    uint64_t seed,
                                    struct OlapEstimate *out);

/**
 * Monte Carlo `O_B` with standard error.
 *
 * # Safety
 * `p0` and `p1` must be live handles; `out` must be writable.
 */
enum OlapStatus olap_ob_monte_carlo(const struct OlapDensity *p0,
                                    const struct OlapDensity *p1,
                                    size_t n_draws,
                                    uint64_t seed,
                                    struct OlapEstimate *out);

/**
 * Hellinger distance `(∫(√p0 − √p1)²)^{1/2}`.
 *
 * # Safety
 * `p0` and `p1` must be live handles; `out` must be writable.
 */
enum OlapStatus olap_hellinger(const struct OlapDensity *p0,
                               const struct OlapDensity *p1,
                               size_t n_grid,
                               double *out);

/**
 * Bhattacharyya coefficient `∫√(p0 p1)`.
 *
 * # Safety
 * `p0` and `p1` must be live handles; `out` must be writable.
 */
enum OlapStatus olap_bhattacharyya(const struct OlapDensity *p0,
                                   const struct OlapDensity *p1,
                                   size_t n_grid,
                                   double *out);

/**
 * # Safety
 * `cfg` must be readable; `out` must be writable.
 */
enum OlapStatus olap_critical_value(const struct OlapTrialConfig *cfg, double *out);

/**
 * # Safety
 * `cfg` must be readable; `out` must be writable.
 */
enum OlapStatus olap_p_value(double xbar, const struct OlapTrialConfig *cfg, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum OlapStatus olap_theta_threshold(double q0, double sigma, double *out);

/**
 * # Safety
 * `cfg` must be readable; `out` must be writable.
 */
enum OlapStatus olap_decide(double xbar,
                            const struct OlapTrialConfig *cfg,
                            struct OlapTrialDecision *out);

/**
 * Parametric bootstrap of `O_M`. When `q_tilde` is non-null it receives
 * all `b` replicated values in replication order.
 *
 * # Safety
 * `cfg` must be readable; `q_tilde` must be null or writable for `b`
 * values; `out` must be writable.
 */
enum OlapStatus olap_parametric_bootstrap(double theta_hat,
                                          const struct OlapTrialConfig *cfg,
                                          size_t b,
                                          uint64_t seed,
                                          double *q_tilde,
                                          struct OlapBootstrapSummary *out);

/**
 * Crossmatch estimate of `O_B` from paired samples `x ~ p0`, `y ~ p1` of
 * equal length. `literal_matrix` selects the literal cross block.
 *
 * # Safety
 * `x` and `y` must each point to `len` readable values; `out` must be
 * writable.
 */
enum OlapStatus olap_crossmatch(const double *x,
                                const double *y,
                                size_t len,
                                bool literal_matrix,
                                struct OlapCrossmatch *out);

/**
 * Set overlap measures from `|A|`, `|B|` and `|A ∩ B|`.
 *
 * # Safety
 * `out` must be writable.
 */
enum OlapStatus olap_set_overlap(size_t size_a,
                                 size_t size_b,
                                 size_t shared,
                                 struct OlapSetOverlap *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OVERLAP_H */
