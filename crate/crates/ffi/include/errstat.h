#ifndef ERRSTAT_H
#define ERRSTAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ErrstatStatus {
  ERRSTAT_STATUS_OK = 0,
  ERRSTAT_STATUS_DOMAIN = 1,
  ERRSTAT_STATUS_INFEASIBLE = 2,
  ERRSTAT_STATUS_DEGENERATE = 3,
  ERRSTAT_STATUS_PARSE = 4,
  ERRSTAT_STATUS_IO = 5,
  ERRSTAT_STATUS_NULL_POINTER = 6,
  ERRSTAT_STATUS_INVALID_UTF8 = 7,
  ERRSTAT_STATUS_PANIC = 8,
} ErrstatStatus;

typedef enum ErrstatTail {
  ERRSTAT_TAIL_ONE_SIDED = 0,
  ERRSTAT_TAIL_TWO_SIDED = 1,
} ErrstatTail;

typedef enum ErrstatReference {
  ERRSTAT_REFERENCE_NORMAL = 0,
  ERRSTAT_REFERENCE_STUDENT_T = 1,
} ErrstatReference;

/**
 * Opaque time series.
 */
typedef struct ErrstatSeries ErrstatSeries;

/**
 * Costs, prior of a true null and the two Gaussian statistic distributions.
 */
typedef struct ErrstatCostParams {
  double p0;
  double p1;
  double phi;
  double mu0;
  double mu1;
  double sigma;
} ErrstatCostParams;

typedef struct ErrstatLagFit {
  size_t tau;
  double beta0;
  double beta1;
  double stderr_beta1;
  double r;
  size_t n_pairs;
  double t_stat;
  double p_two_sided_t;
} ErrstatLagFit;

typedef struct ErrstatSimConfig {
  uint64_t num_trials;
  uint64_t seed;
  double prior_null;
  double alpha;
  double effect_size;
  uint32_t n_per_study;
  enum ErrstatTail tail;
  /**
   * Nonzero runs all chunks on the calling thread.
   */
  uint8_t serial;
} ErrstatSimConfig;

/**
 * Confusion counts and rates. A rate is meaningful only when its `has_`
 * flag is 1; otherwise its denominator was zero.
 */
typedef struct ErrstatSimOutcome {
  uint64_t num_trials;
  uint64_t true_pos;
  uint64_t false_pos;
  uint64_t true_neg;
  uint64_t false_neg;
  uint8_t has_fpr;
  double empirical_fpr;
  double mc_stderr_fpr;
  uint8_t has_power;
  double empirical_power;
  double mc_stderr_power;
  uint8_t has_size;
  double empirical_size;
  double mc_stderr_size;
} ErrstatSimOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *errstat_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *errstat_version(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void errstat_string_free(char *s);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_normal_cdf(double x, double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_normal_quantile(double p, double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_student_t_cdf(double x, uint32_t df, double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_student_t_quantile(double p, uint32_t df, double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_type2_error(double alpha,
                                       double effect_size,
                                       uint32_t n,
                                       enum ErrstatTail tail,
                                       double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_power(double alpha,
                                 double effect_size,
                                 uint32_t n,
                                 enum ErrstatTail tail,
                                 double *out);

/**
 * # Safety
 * `out` must be valid for writing one `uint64_t`.
 */
enum ErrstatStatus errstat_required_sample_size(double alpha,
                                                double beta,
                                                double mu_star,
                                                double sigma,
                                                uint64_t *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_false_positive_rate(double alpha,
                                               double power,
                                               double prior_null,
                                               double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_false_positive_rate_odds(double alpha,
                                                    double power,
                                                    double odds,
                                                    double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_replication_threshold_factor(double gamma, double n_fold, double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_gamma_for_factor(double r, double n_fold, double *out);

/**
 * # Safety
 * `params` must point to a valid struct and `out` be valid for one `double`.
 */
enum ErrstatStatus errstat_expected_cost(double c,
                                         const struct ErrstatCostParams *params,
                                         double *out);

/**
 * Closed-form cost-minimizing critical value.
 *
 * # Safety
 * `params` must point to a valid struct and `out` be valid for one `double`.
 */
enum ErrstatStatus errstat_cost_minimizer(const struct ErrstatCostParams *params, double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_pvalue_pdf(double p, double delta, uint32_t n, double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_pvalue_cdf(double p, double delta, uint32_t n, double *out);

/**
 * Reproducibility probability of an observed standardized statistic.
 *
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_reproducibility_probability(double d_obs, double alpha, double *out);

/**
 * Severity of the claim `parameter > bound`.
 *
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_severity(double estimate,
                                    double stderr,
                                    uint32_t df,
                                    double bound,
                                    enum ErrstatReference reference,
                                    double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum ErrstatStatus errstat_confidence_lower_limit(double estimate,
                                                  double stderr,
                                                  uint32_t df,
                                                  double level,
                                                  enum ErrstatReference reference,
                                                  double *out);

/**
 * Full summary report as a JSON string; release it with [`errstat_string_free`].
 * `has_claim = 0` uses the 95% lower confidence limit as the claim bound.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum ErrstatStatus errstat_analyze_summary_json(double estimate,
                                                double stderr,
                                                uint8_t has_claim,
                                                double claim,
                                                double alpha,
                                                char **out);

/**
 * Copies `len` values into a new series.
 *
 * # Safety
 * `values` must be valid for reading `len` doubles; `out` for one pointer.
 */
enum ErrstatStatus errstat_series_new(const double *values,
                                      size_t len,
                                      int64_t start_label,
                                      struct ErrstatSeries **out);

/**
 * Reads a `label,value` CSV file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` valid for one pointer.
 */
enum ErrstatStatus errstat_series_from_csv(const char *path, struct ErrstatSeries **out);

/**
 * # Safety
 * `series` must come from this library and not be used afterwards. Null is ignored.
 */
void errstat_series_free(struct ErrstatSeries *series);

/**
 * Number of observations, or 0 for a null handle.
 *
 * # Safety
 * `series` must be null or a live handle.
 */
size_t errstat_series_len(const struct ErrstatSeries *series);

/**
 * # Safety
 * `series` must be a live handle and `out` valid for one struct.
 */
enum ErrstatStatus errstat_lag_regression(const struct ErrstatSeries *series,
                                          size_t tau,
                                          struct ErrstatLagFit *out);

/**
 * # Safety
 * `series` must be a live handle and `out` valid for one `double`.
 */
enum ErrstatStatus errstat_autocorrelation(const struct ErrstatSeries *series,
                                           size_t tau,
                                           double *out);

/**
 * # Safety
 * `config` must point to a valid struct and `out` be valid for one struct.
 */
enum ErrstatStatus errstat_simulate_studies(const struct ErrstatSimConfig *config,
                                            struct ErrstatSimOutcome *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ERRSTAT_H */
