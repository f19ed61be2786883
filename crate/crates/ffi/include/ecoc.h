#ifndef ECOC_H
#define ECOC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum EcocStatus {
  ECOC_STATUS_OK = 0,
  ECOC_STATUS_ARGUMENT = 1,
  ECOC_STATUS_SIZE = 2,
  ECOC_STATUS_MODEL = 3,
  ECOC_STATUS_DOMAIN = 4,
  ECOC_STATUS_PARSE = 5,
  ECOC_STATUS_IO = 6,
  ECOC_STATUS_NULL_POINTER = 7,
  ECOC_STATUS_PANIC = 8,
} EcocStatus;

typedef enum EcocOrientation {
  ECOC_ORIENTATION_KEEP_BOTTOM_RIGHT = 0,
  ECOC_ORIENTATION_KEEP_TOP_LEFT = 1,
} EcocOrientation;

typedef enum EcocTiePolicy {
  ECOC_TIE_POLICY_LOWEST_INDEX = 0,
  ECOC_TIE_POLICY_REPORT_TIE = 1,
} EcocTiePolicy;

/**
 * Why the KZ bound was withheld; `None` when it applies.
 */
typedef enum EcocKzGate {
  ECOC_KZ_GATE_NONE = 0,
  ECOC_KZ_GATE_NO_CORRELATION = 1,
  ECOC_KZ_GATE_NEGATIVE_CORRELATION = 2,
  ECOC_KZ_GATE_RATE_ABOVE_THRESHOLD = 3,
  ECOC_KZ_GATE_OUTSIDE_BAHADUR_RANGE = 4,
} EcocKzGate;

typedef struct EcocCodeMatrix EcocCodeMatrix;

typedef struct EcocModel EcocModel;

typedef struct EcocDecoded {
  size_t class_index;
  size_t distance;
  bool tie;
} EcocDecoded;

/**
 * Bounds for one parameter set. `has_*` flags mark optional values; the
 * value field is NaN when its flag is false.
 */
typedef struct EcocBoundReport {
  double gs;
  bool has_feller;
  double feller;
  bool has_chernoff_mu;
  double chernoff_mu;
  double chernoff;
  bool has_kz;
  double kz;
  enum EcocKzGate kz_gate;
  bool has_kz_formula;
  double kz_formula;
  double lambda;
  double omega;
} EcocBoundReport;

typedef struct EcocSimConfig {
  uint64_t trials;
  uint64_t seed;
  size_t workers;
  /**
   * One RNG stream per worker: reproducible only for a fixed worker count.
   */
  bool fast;
} EcocSimConfig;

typedef struct EcocSimResult {
  double error_rate;
  double std_err;
  uint64_t trials;
  uint64_t errors;
  uint64_t ties;
} EcocSimResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ecoc_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * always NUL-terminated when `len > 0`). Returns the full message length
 * including the terminator, or 0 if there is no message.
 */
size_t ecoc_last_error_message(char *buf, size_t len);

void ecoc_clear_last_error(void);

enum EcocStatus ecoc_code_matrix_build(size_t classes,
                                       enum EcocOrientation orientation,
                                       struct EcocCodeMatrix **out);

void ecoc_code_matrix_free(struct EcocCodeMatrix *code);

/**
 * Number of classes (rows); 0 for a null handle.
 */
size_t ecoc_code_matrix_classes(const struct EcocCodeMatrix *code);

/**
 * Number of classifiers (columns); 0 for a null handle.
 */
size_t ecoc_code_matrix_n(const struct EcocCodeMatrix *code);

/**
 * Minimum row distance; 0 for a null handle.
 */
size_t ecoc_code_matrix_d(const struct EcocCodeMatrix *code);

/**
 * `d / 2`; 0 for a null handle.
 */
size_t ecoc_code_matrix_m(const struct EcocCodeMatrix *code);

/**
 * Copies the codeword of `class_index` into `out`, which must hold `n` bytes.
 */
enum EcocStatus ecoc_code_matrix_codeword(const struct EcocCodeMatrix *code,
                                          size_t class_index,
                                          uint8_t *out,
                                          size_t len);

/**
 * Nearest-codeword decoding of a 0/1 word of length `n`.
 */
enum EcocStatus ecoc_code_matrix_decode(const struct EcocCodeMatrix *code,
                                        const uint8_t *word,
                                        size_t len,
                                        enum EcocTiePolicy tie_policy,
                                        struct EcocDecoded *out);

/**
 * Independent classifiers with per-classifier error rates.
 */
enum EcocStatus ecoc_model_independent(const double *rates, size_t n, struct EcocModel **out);

/**
 * The last two classifiers are correlated with joint error probability `f`;
 * the rest are independent.
 */
enum EcocStatus ecoc_model_pair(const double *rates, size_t n, double f, struct EcocModel **out);

/**
 * `n` exchangeable classifiers with common rate `e_bar` and pairwise correlation `c`.
 */
enum EcocStatus ecoc_model_exchangeable(size_t n, double e_bar, double c, struct EcocModel **out);

void ecoc_model_free(struct EcocModel *model);

/**
 * Number of classifiers; 0 for a null handle.
 */
size_t ecoc_model_n(const struct EcocModel *model);

/**
 * Probability of exactly `k` errors.
 */
enum EcocStatus ecoc_model_pmf(const struct EcocModel *model, size_t k, double *out);

/**
 * Probability of at least `m` errors.
 */
enum EcocStatus ecoc_model_tail(const struct EcocModel *model, size_t m, double *out);

/**
 * Writes the full error-count distribution; `out` must hold `n + 1` values.
 */
enum EcocStatus ecoc_model_distribution(const struct EcocModel *model, double *out, size_t len);

enum EcocStatus ecoc_binomial_pmf(size_t n, size_t k, double e, double *out);

enum EcocStatus ecoc_tail_iid(size_t n, size_t m, double e, double *out);

enum EcocStatus ecoc_pair_correlated_tail(size_t n, size_t m, double e, double f, double *out);

enum EcocStatus ecoc_exchangeable_tail(size_t n, size_t m, double e_bar, double c, double *out);

/**
 * Admissible correlation interval for `n` exchangeable classifiers.
 */
enum EcocStatus ecoc_bahadur_range(size_t n, double e_bar, double *lower, double *upper);

/**
 * All bounds for `(n, m, e_bar)`. `c` and `mu` are optional (may be null).
 */
enum EcocStatus ecoc_bounds(size_t n,
                            size_t m,
                            double e_bar,
                            const double *c,
                            const double *mu,
                            struct EcocBoundReport *out);

/**
 * KZ bound with the correlation term scaled by `r/ē`.
 */
enum EcocStatus ecoc_kz_bound_corrected(size_t n, size_t m, double e_bar, double c, double *out);

/**
 * 100 000 trials, the default seed, one worker, strict determinism.
 */
struct EcocSimConfig ecoc_sim_config_default(void);

/**
 * Monte Carlo estimate of `P(at least m errors)`.
 */
enum EcocStatus ecoc_simulate_threshold(const struct EcocModel *model,
                                        size_t m,
                                        const struct EcocSimConfig *config,
                                        struct EcocSimResult *out);

/**
 * Monte Carlo decoding error. A negative `true_class` draws the class
 * uniformly in every trial.
 */
enum EcocStatus ecoc_simulate_decode(const struct EcocModel *model,
                                     const struct EcocCodeMatrix *code,
                                     int64_t true_class,
                                     enum EcocTiePolicy tie_policy,
                                     const struct EcocSimConfig *config,
                                     struct EcocSimResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ECOC_H */
