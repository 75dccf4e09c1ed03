#ifndef BRANCHLAB_H
#define BRANCHLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BlStatus {
  BL_STATUS_OK = 0,
  BL_STATUS_NULL_POINTER = 1,
  BL_STATUS_DOMAIN = 2,
  BL_STATUS_NON_CONVERGENCE = 3,
  BL_STATUS_NO_PERIOD = 4,
  BL_STATUS_CONSTRAINT = 5,
  BL_STATUS_CAP_EXCEEDED = 6,
  BL_STATUS_TOO_MANY_RESTARTS = 7,
  BL_STATUS_MISSING_HISTORY = 8,
  BL_STATUS_INSUFFICIENT_OVERLAP = 9,
  BL_STATUS_PARSE = 10,
  BL_STATUS_OUT_OF_RANGE = 11,
  BL_STATUS_BUFFER_TOO_SMALL = 12,
  BL_STATUS_PANIC = 13,
} BlStatus;

typedef enum BlSeedKind {
  /**
   * `a_t = t`
   */
  BL_SEED_KIND_LINEAR = 0,
  /**
   * `a_t = t / 2`
   */
  BL_SEED_KIND_HALF = 1,
} BlSeedKind;

typedef enum BlModel {
  BL_MODEL_FMM = 0,
  BL_MODEL_MMM = 1,
} BlModel;

/**
 * Opaque recursion solution.
 */
typedef struct BlChiSeries BlChiSeries;

/**
 * Opaque simulation record.
 */
typedef struct BlRunRecord BlRunRecord;

/**
 * Plain-data simulation parameters. `tail_gamma = 0` selects the pure
 * Pareto tail.
 */
typedef struct BlSimParams {
  enum BlModel model;
  double tail_alpha;
  double tail_gamma;
  double beta;
  double log_f;
  size_t t_max;
  uint64_t seed;
  double exact_event_cap;
  uint32_t mmm_bins_per_decade;
  double mmm_poisson_threshold;
  bool restart_on_extinction;
} BlSimParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *bl_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *bl_last_error_message(void);

/**
 * Growth exponent and horizon for tail index `alpha`.
 */
enum BlStatus bl_nu(double alpha, double *out_nu, size_t *out_period);

/**
 * Continuous approximation of the growth exponent.
 */
double bl_nu_continuous_approx(double alpha);

/**
 * Solves the recursion with a built-in driving sequence.
 */
enum BlStatus bl_chi_solve(double alpha,
                           enum BlSeedKind seed,
                           size_t t_max,
                           struct BlChiSeries **out);

/**
 * Solves the recursion with the constructive seed of the cycle
 * `phi[0..len]`.
 */
enum BlStatus bl_chi_solve_ctex(double alpha,
                                const double *phi,
                                size_t len,
                                size_t t_max,
                                struct BlChiSeries **out);

void bl_chi_free(struct BlChiSeries *series);

/**
 * Number of solved generations (t runs from 1 to this value).
 */
size_t bl_chi_len(const struct BlChiSeries *series);

/**
 * `log chi_t`.
 */
enum BlStatus bl_chi_log_chi(const struct BlChiSeries *series, size_t t, double *out);

/**
 * Largest maximizing index `I_t` (0 when the seed term wins).
 */
enum BlStatus bl_chi_dominant_index(const struct BlChiSeries *series, size_t t, size_t *out);

/**
 * `(log chi_{t+T} - log chi_t) / T`.
 */
enum BlStatus bl_chi_nu_hat(const struct BlChiSeries *series, size_t t, double *out);

/**
 * Eventual cycle of `log c_t`: writes `t1` and `T` values of `log C_k`
 * into `cycle[0..cap]`. Fails with `BUFFER_TOO_SMALL` (and still sets
 * `out_period`) when `cap < T`.
 */
enum BlStatus bl_chi_detect_period(const struct BlChiSeries *series,
                                   double tol,
                                   size_t *out_t1,
                                   size_t *out_period,
                                   double *cycle,
                                   size_t cap);

/**
 * Defaults for an FMM run with a Pareto(1) tail.
 */
enum BlStatus bl_sim_params_default(struct BlSimParams *out);

/**
 * Runs one replicate.
 */
enum BlStatus bl_sim_run(const struct BlSimParams *params, struct BlRunRecord **out);

void bl_run_free(struct BlRunRecord *record);

/**
 * Number of recorded generations, including generation 0.
 */
size_t bl_run_len(const struct BlRunRecord *record);

uint64_t bl_run_restarts(const struct BlRunRecord *record);

bool bl_run_survived(const struct BlRunRecord *record);

/**
 * `log X(t)`.
 */
enum BlStatus bl_run_log_x(const struct BlRunRecord *record, size_t t, double *out);

/**
 * Log-fitness of the fittest mutant of generation `t` (`-inf` if none).
 */
enum BlStatus bl_run_log_w(const struct BlRunRecord *record, size_t t, double *out);

/**
 * Parses a tail spec such as `pareto:alpha=1` and evaluates `log G`.
 */
enum BlStatus bl_tail_log_tail(const char *spec, double log_x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRANCHLAB_H */
