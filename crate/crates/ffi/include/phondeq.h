#ifndef PHONDEQ_H
#define PHONDEQ_H

/* Generated with cbindgen:0.27.0 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum PhondeqStatus {
  PHONDEQ_STATUS_OK = 0,
  PHONDEQ_STATUS_NULL_POINTER = 1,
  PHONDEQ_STATUS_INVALID_ARGUMENT = 2,
  PHONDEQ_STATUS_INVALID_GEOMETRY = 3,
  PHONDEQ_STATUS_UNKNOWN_PRESET = 4,
  PHONDEQ_STATUS_NON_PHYSICAL = 5,
  PHONDEQ_STATUS_NOT_CONVERGED = 6,
  PHONDEQ_STATUS_PANIC = 7,
} PhondeqStatus;

/**
 * Thermal weight selector for [`phondeq_oracle_new`].
 */
typedef enum PhondeqThermalWeight {
  PHONDEQ_THERMAL_WEIGHT_CLASSICAL = 0,
  PHONDEQ_THERMAL_WEIGHT_FULL_COTH = 1,
} PhondeqThermalWeight;

/**
 * Opaque mode-sum oracle.
 */
typedef struct PhondeqOracle PhondeqOracle;

/**
 * Opaque two-qubit system.
 */
typedef struct PhondeqSystem PhondeqSystem;

/**
 * One qubit: donor pair at `center ± axis/2` with per-site Bohr radii.
 */
typedef struct PhondeqQubit {
  double center[3];
  double axis[3];
  double radius_minus;
  double radius_plus;
} PhondeqQubit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *phondeq_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *phondeq_version(void);

/**
 * Builds a system from a named preset (`paper45`, `collinear`, `perpendicular`).
 *
 * # Safety
 * `name` must be a valid NUL-terminated string and `out` a writable pointer.
 */
enum PhondeqStatus phondeq_system_from_preset(const char *name, struct PhondeqSystem **out);

/**
 * Builds a system from `count` qubit descriptions (currently exactly two).
 *
 * # Safety
 * `qubits` must point to `count` readable elements and `out` must be writable.
 */
enum PhondeqStatus phondeq_system_new(const struct PhondeqQubit *qubits,
                                      size_t count,
                                      struct PhondeqSystem **out);

/**
 * Releases a system. Null is ignored.
 *
 * # Safety
 * `system` must come from a `phondeq_system_*` constructor and not be used afterwards.
 */
void phondeq_system_free(struct PhondeqSystem *system);

/**
 * Closed-form kernel for arbitrary radii.
 *
 * # Safety
 * `out` must be writable.
 */
enum PhondeqStatus phondeq_gamma_general(double t, double a, double a2, double l, double *out);

/**
 * Closed-form kernel for identical unit radii at separation `l`.
 */
double phondeq_gamma_identical(double t, double l);

/**
 * Same-site kernel for unit radius.
 */
double phondeq_gamma_zero(double t);

/**
 * Dephasing rate of the coherence between register states `m` and `s`.
 *
 * # Safety
 * `system` must be a live handle and `out` writable.
 */
enum PhondeqStatus phondeq_decoherence_rate(const struct PhondeqSystem *system,
                                            double t,
                                            uint32_t m,
                                            uint32_t s,
                                            double *out);

/**
 * Time integral of the dephasing rate from 0 to `t`.
 *
 * # Safety
 * `system` must be a live handle and `out` writable.
 */
enum PhondeqStatus phondeq_integrated_exponent(const struct PhondeqSystem *system,
                                               double t,
                                               uint32_t m,
                                               uint32_t s,
                                               double *out);

/**
 * Concurrence of `sqrt(p)|a> + sqrt(1-p)|b>` in the one-excitation
 * (`two_excitation == 0`) or two-excitation sector.
 *
 * # Safety
 * `system` must be a live handle and `out` writable.
 */
enum PhondeqStatus phondeq_concurrence(const struct PhondeqSystem *system,
                                       double t,
                                       double p,
                                       double temperature_ratio,
                                       bool two_excitation,
                                       double *out);

/**
 * Wootters concurrence of a 4x4 density matrix given as row-major real
 * and imaginary parts.
 *
 * # Safety
 * `re` and `im` must each point to 16 readable doubles and `out` must be writable.
 */
enum PhondeqStatus phondeq_wootters_concurrence(const double *re, const double *im, double *out);

/**
 * Creates a mode-sum oracle. `inverse_temperature` is read only for
 * [`PhondeqThermalWeight::FullCoth`].
 *
 * # Safety
 * `out` must be writable.
 */
enum PhondeqStatus phondeq_oracle_new(double k_max,
                                      size_t panels,
                                      size_t nodes_per_panel,
                                      enum PhondeqThermalWeight weight,
                                      double inverse_temperature,
                                      struct PhondeqOracle **out);

/**
 * Releases an oracle. Null is ignored.
 *
 * # Safety
 * `oracle` must come from [`phondeq_oracle_new`] and not be used afterwards.
 */
void phondeq_oracle_free(struct PhondeqOracle *oracle);

/**
 * Calibrated normalization constant of the oracle.
 *
 * # Safety
 * `oracle` must be a live handle and `out` writable.
 */
enum PhondeqStatus phondeq_oracle_normalization(const struct PhondeqOracle *oracle, double *out);

/**
 * Mode-sum dephasing rate for the same arguments as [`phondeq_decoherence_rate`].
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum PhondeqStatus phondeq_oracle_rate(const struct PhondeqOracle *oracle,
                                       const struct PhondeqSystem *system,
                                       double t,
                                       uint32_t m,
                                       uint32_t s,
                                       double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHONDEQ_H */
