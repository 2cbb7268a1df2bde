#ifndef RELPOWER_H
#define RELPOWER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RpStatus {
  RP_STATUS_OK = 0,
  /**
   * Null pointer or non-UTF-8 string.
   */
  RP_STATUS_INVALID_ARGUMENT = 1,
  RP_STATUS_CONFIG_INVALID = 2,
  RP_STATUS_NON_POSITIVE_JACOBIAN = 3,
  RP_STATUS_EVALUATION_OUT_OF_DOMAIN = 4,
  RP_STATUS_NOT_ANTISYMMETRIC = 5,
  RP_STATUS_SINGULAR_TENSOR = 6,
  RP_STATUS_NON_AFFINE_DEFECT = 7,
  RP_STATUS_PRECONDITION_VIOLATED = 8,
  RP_STATUS_TOLERANCE_FAILURE = 9,
  RP_STATUS_IO = 10,
  RP_STATUS_PANIC = 11,
} RpStatus;

/**
 * Opaque scenario handle.
 */
typedef struct RpScenario RpScenario;

/**
 * Integrated powers of the scenario's virtual fields over its part.
 */
typedef struct RpPower {
  double relative_active;
  double disarrangement;
  double relative;
  double inner;
  /**
   * Sum of absolute values of the integrated terms.
   */
  double magnitude;
} RpPower;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *rp_version(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *rp_last_error(void);

/**
 * Builds a scenario from a JSON scenario file's contents.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RpStatus rp_scenario_from_json(const char *json, struct RpScenario **out);

/**
 * # Safety
 * `s` must come from [`rp_scenario_from_json`] and not be used afterwards.
 */
void rp_scenario_free(struct RpScenario *s);

/**
 * Stored energy at reference point `x`.
 *
 * # Safety
 * Pointers must be valid; `x` holds 3 doubles.
 */
enum RpStatus rp_energy(const struct RpScenario *s, const double *x, double *out);

/**
 * First Piola stress at `x`, 9 doubles.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RpStatus rp_stress(const struct RpScenario *s, const double *x, double *out);

/**
 * Eshelby stress `e I − Fᵀ P` at `x`, 9 doubles.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RpStatus rp_eshelby(const struct RpScenario *s, const double *x, double *out);

/**
 * Force, torque, configurational force and configurational torque
 * residuals at `x`, 12 doubles.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RpStatus rp_pointwise_residuals(const struct RpScenario *s, const double *x, double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum RpStatus rp_relative_power(const struct RpScenario *s, struct RpPower *out);

/**
 * The four integral balance residuals over the part, 12 doubles.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RpStatus rp_integral_balances(const struct RpScenario *s, double *out);

/**
 * Coefficients of the observer-change defect in the order ambient
 * translation, ambient rotation, material translation, material rotation
 * (12 doubles), and the power scale they should be compared against.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RpStatus rp_invariance_coefficients(const struct RpScenario *s,
                                         size_t probes,
                                         uint64_t seed,
                                         double *out,
                                         double *scale);

/**
 * Runs the scenario's checks without writing files. `failed` receives the
 * number of checks outside tolerance.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RpStatus rp_run_checks(const struct RpScenario *s, size_t *failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELPOWER_H */
