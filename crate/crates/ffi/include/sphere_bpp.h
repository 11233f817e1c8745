#ifndef SPHERE_BPP_H
#define SPHERE_BPP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SbppStatus {
  SBPP_STATUS_OK = 0,
  SBPP_STATUS_NULL_POINTER = 1,
  SBPP_STATUS_INVALID_ARGUMENT = 2,
  SBPP_STATUS_INVALID_CONFIG = 3,
  SBPP_STATUS_UNKNOWN_PRESET = 4,
  SBPP_STATUS_SHELL_INDEX_OUT_OF_RANGE = 5,
  SBPP_STATUS_BEYOND_VISIBILITY = 6,
  SBPP_STATUS_ZERO_VISIBILITY = 7,
  SBPP_STATUS_INTERNAL = 8,
  SBPP_STATUS_PANIC = 9,
} SbppStatus;

typedef enum SbppSampler {
  SBPP_SAMPLER_COLATITUDE = 0,
  SBPP_SAMPLER_AREA = 1,
} SbppSampler;

// Validated constellation description.
typedef struct SbppConstellation SbppConstellation;

// Closed-form distance distribution for one constellation and observer.
typedef struct SbppDistribution SbppDistribution;

// Result of a Monte-Carlo run.
typedef struct SbppEmpirical SbppEmpirical;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *sbpp_version(void);

// Message for the most recent failed call on this thread, or an empty string.
// The pointer stays valid until the next `sbpp_*` call on the same thread.
const char *sbpp_last_error_message(void);

// Parses a JSON constellation description.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum SbppStatus sbpp_constellation_from_json(const char *json, struct SbppConstellation **out);

// Looks up a built-in constellation by name.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a writable pointer.
enum SbppStatus sbpp_constellation_from_preset(const char *name, struct SbppConstellation **out);

// Number of shells, or 0 for a NULL handle.
//
// # Safety
// `c` must be NULL or a live handle.
size_t sbpp_constellation_num_shells(const struct SbppConstellation *c);

// # Safety
// `c` must be NULL or a handle not yet freed.
void sbpp_constellation_free(struct SbppConstellation *c);

// Builds the closed-form distribution seen by `observer_shell` (0 = Earth).
//
// # Safety
// `c` must be a live handle and `out` a writable pointer.
enum SbppStatus sbpp_distribution_new(const struct SbppConstellation *c,
                                      uint32_t observer_shell,
                                      struct SbppDistribution **out);

// # Safety
// `d` must be NULL or a handle not yet freed.
void sbpp_distribution_free(struct SbppDistribution *d);

// `P(D < d)`.
//
// # Safety
// `dist` must be a live handle and `out` a writable pointer.
enum SbppStatus sbpp_distribution_cdf(const struct SbppDistribution *dist, double d, double *out);

// `P(D_k >= d)` for shell `shell` (1-based).
//
// # Safety
// `dist` must be a live handle and `out` a writable pointer.
enum SbppStatus sbpp_distribution_shell_ccdf(const struct SbppDistribution *dist,
                                             uint32_t shell,
                                             double d,
                                             double *out);

// Probability that at least one point is in line of sight.
//
// # Safety
// `dist` must be a live handle and `out` a writable pointer.
enum SbppStatus sbpp_distribution_visibility(const struct SbppDistribution *dist, double *out);

// Smallest `d` with `P(D < d) >= q`.
//
// # Safety
// `dist` must be a live handle and `out` a writable pointer.
enum SbppStatus sbpp_distribution_quantile(const struct SbppDistribution *dist,
                                           double q,
                                           double *out);

// Mean distance given that some point is visible.
//
// # Safety
// `dist` must be a live handle and `out` a writable pointer.
enum SbppStatus sbpp_distribution_conditional_mean(const struct SbppDistribution *dist,
                                                   double *out);

// Runs `trials` Monte-Carlo trials. Output depends only on the arguments.
//
// # Safety
// `c` must be a live handle and `out` a writable pointer.
enum SbppStatus sbpp_run_experiment(const struct SbppConstellation *c,
                                    uint32_t observer_shell,
                                    uint64_t trials,
                                    uint64_t seed,
                                    enum SbppSampler sampler,
                                    struct SbppEmpirical **out);

// Fraction of trials with a visible point at distance `<= d`.
//
// # Safety
// `e` must be a live handle and `out` a writable pointer.
enum SbppStatus sbpp_empirical_eval(const struct SbppEmpirical *e, double d, double *out);

// Total trials and trials with no visible point.
//
// # Safety
// `e` must be a live handle; both outputs must be writable.
enum SbppStatus sbpp_empirical_counts(const struct SbppEmpirical *e,
                                      uint64_t *n_total,
                                      uint64_t *n_infinite);

// # Safety
// `e` must be NULL or a handle not yet freed.
void sbpp_empirical_free(struct SbppEmpirical *e);

// Kolmogorov–Smirnov distance between a simulation and a closed form.
//
// # Safety
// Handles must be live; `statistic` and `pass` must be writable.
enum SbppStatus sbpp_ks_compare(const struct SbppEmpirical *e,
                                const struct SbppDistribution *dist,
                                double threshold,
                                double *statistic,
                                bool *pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHERE_BPP_H */
