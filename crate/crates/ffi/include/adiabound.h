#ifndef ADIABOUND_H
#define ADIABOUND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum AdbStatus {
  AdbStatusOk = 0,
  AdbStatusNullPointer = 1,
  AdbStatusInvalidArgument = 2,
  AdbStatusNumericalFailure = 3,
  AdbStatusNoFeasibleTau = 4,
} AdbStatus;

// Opaque handle to a flux-qubit model (couplings fixed by E_J, optional
// noise installed with `adb_flux_set_noise`).
typedef struct AdbFlux AdbFlux;

// Opaque handle to a 1/nu cosine-sum noise realization.
typedef struct AdbNoise AdbNoise;

// Opaque handle to a rotating-field model.
typedef struct AdbTong AdbTong;

// Coefficients of a bound `A tau + B + C / tau + E` together with its
// value at the requested tau (`value` is clamped at 1, `raw_value` not).
typedef struct AdbBoundTerms {
  double tau_linear_coeff;
  double constant_term;
  double inv_tau_coeff;
  double endpoint_term;
  double value;
  double raw_value;
} AdbBoundTerms;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *adb_version(void);

// Two-time-scale noise bound from explicit inputs: drift derivative
// bounds c1, c2 (MHz), noise derivative bounds d1 (MHz^2), d2 (MHz^3),
// minimum gap gamma (MHz), endpoint overlaps delta0, delta1, evaluated at
// tau (us).
//
// # Safety
// `out` must point to writable memory for one `AdbBoundTerms`.
enum AdbStatus adb_noise_bound(double c1,
                               double c2,
                               double d1,
                               double d2,
                               double gamma,
                               double delta0,
                               double delta1,
                               double tau,
                               struct AdbBoundTerms *out);

// Constant-gap bound with derivative bounds b1, b2, minimum gap gamma,
// band ratio d_bar (1 for a nondegenerate ground state), normalized time
// s in (0, 1], evaluated at tau.
//
// # Safety
// `out` must point to writable memory for one `AdbBoundTerms`.
enum AdbStatus adb_constant_bound(double b1,
                                  double b2,
                                  double gamma,
                                  double d_bar,
                                  double s,
                                  double tau,
                                  struct AdbBoundTerms *out);

// Bound for an imperfect initial state `eta (|psi_0> + delta |perp>)`
// with |delta| = delta_abs: `|eta| (|delta| + constant-form bound)`.
//
// # Safety
// `out` must point to writable memory for one `AdbBoundTerms`.
enum AdbStatus adb_initial_bound(double delta_abs,
                                 double b1,
                                 double b2,
                                 double gamma,
                                 double s,
                                 double tau,
                                 struct AdbBoundTerms *out);

// Bound under a systematic Hamiltonian perturbation, using the perturbed
// system's derivative bounds b1, b2 and minimum gap gamma_eps plus the
// endpoint overlaps delta0, delta1.
//
// # Safety
// `out` must point to writable memory for one `AdbBoundTerms`.
enum AdbStatus adb_error_bound(double b1,
                               double b2,
                               double gamma_eps,
                               double delta0,
                               double delta1,
                               double tau,
                               struct AdbBoundTerms *out);

// Bound for coupling to a static low-temperature environment of norm
// env_norm, with coupling norms eps|Delta| at the start, supremum, and
// end of the sweep. Requires env_norm + 2 coupling_sup < gamma.
//
// # Safety
// `out` must point to writable memory for one `AdbBoundTerms`.
enum AdbStatus adb_env_bound(double env_norm,
                             double coupling_start,
                             double coupling_sup,
                             double coupling_end,
                             double gamma,
                             double b1,
                             double b2,
                             double tau,
                             struct AdbBoundTerms *out);

// Overlap estimates from matrix perturbation bounds: the sharper form
// needs the gap from the unperturbed excited level to the perturbed
// ground level; the coarser form only the unperturbed gap. Writes NaN
// for an inapplicable estimate and reports it in the status.
//
// # Safety
// `out` must point to a writable f64.
enum AdbStatus adb_sin_theta_delta(double perturbation_norm,
                                   double gap_to_perturbed_ground,
                                   double *out);

// See [`adb_sin_theta_delta`]; this is the coarser gap-only estimate.
//
// # Safety
// `out` must point to a writable f64.
enum AdbStatus adb_bauer_fike_delta(double perturbation_norm, double unperturbed_gap, double *out);

// Feasible tau interval for `A tau + B + C/tau + E <= tolerance`.
// On success writes tau_min, tau_max (infinity when unbounded) and
// tau_star (the minimizer, NaN when undefined). Returns
// `ADB_STATUS_NO_FEASIBLE_TAU` when no tau satisfies the tolerance.
//
// # Safety
// The three out-pointers must each point to a writable f64.
enum AdbStatus adb_feasible_tau(double tau_linear_coeff,
                                double constant_term,
                                double inv_tau_coeff,
                                double endpoint_term,
                                double tolerance,
                                double *out_tau_min,
                                double *out_tau_max,
                                double *out_tau_star);

// New rotating-field model with tilt theta (radians), precession rate
// omega (MHz) and field strength omega0 (MHz).
struct AdbTong *adb_tong_new(double theta, double omega, double omega0);

// Release a rotating-field model. NULL is ignored.
//
// # Safety
// `handle` must come from `adb_tong_new` and not have been freed.
void adb_tong_free(struct AdbTong *handle);

// Exact leaked amplitude of the rotating-field model at physical time t.
//
// # Safety
// `handle` must be a live `AdbTong`; `out` must be writable.
enum AdbStatus adb_tong_exact_error(const struct AdbTong *handle, double t, double *out);

// Two-time-scale bound of the rotating-field model at tau.
//
// # Safety
// `handle` must be a live `AdbTong`; `out` must be writable.
enum AdbStatus adb_tong_bound(const struct AdbTong *handle, double tau, struct AdbBoundTerms *out);

// Integrate the rotating-field model over [0, tau] and write the final
// leaked amplitude |c1(tau)|. Non-positive tolerances select the
// defaults (1e-9 relative, 1e-12 absolute).
//
// # Safety
// `handle` must be a live `AdbTong`; `out` must be writable.
enum AdbStatus adb_tong_simulate(const struct AdbTong *handle,
                                 double tau,
                                 double rel_tol,
                                 double abs_tol,
                                 double *out);

// New flux-qubit model with Josephson energy e_j (MHz; pass 0 for the
// canonical 2 pi x 200 GHz) and sweep amplitude epsilon (dimensionless,
// pass 0 for the canonical -2e-4). Couplings follow the recommended
// junction geometry: t1 = 1e-3 E_J, r1 = 4.8 E_J, r2 = 1.0 E_J,
// w = 2.4 E_J.
struct AdbFlux *adb_flux_new(double e_j, double epsilon);

// Release a flux-qubit model. NULL is ignored.
//
// # Safety
// `handle` must come from `adb_flux_new` and not have been freed.
void adb_flux_free(struct AdbFlux *handle);

// Install 1/nu frustration noise on both loops: amplitude c, n cosine
// components between nu_min and nu_max (MHz), with independent phase
// realizations from seed1 and seed2.
//
// # Safety
// `handle` must be a live `AdbFlux`.
enum AdbStatus adb_flux_set_noise(struct AdbFlux *handle,
                                  double c,
                                  uint32_t n,
                                  double nu_min,
                                  double nu_max,
                                  uint64_t seed1,
                                  uint64_t seed2);

// Two-time-scale bound of the flux qubit at tau from externally
// calibrated noise inputs: derivative suprema sup|N'| (MHz) and sup|N''|
// (MHz^2) and endpoint overlaps delta0, delta1.
//
// # Safety
// `handle` must be a live `AdbFlux`; `out` must be writable.
enum AdbStatus adb_flux_bound(const struct AdbFlux *handle,
                              double sup_ndot,
                              double sup_nddot,
                              double delta0,
                              double delta1,
                              double tau,
                              struct AdbBoundTerms *out);

// Integrate the flux qubit over [0, tau] (with installed noise, if any)
// and write the final leaked amplitude.
//
// # Safety
// `handle` must be a live `AdbFlux`; `out` must be writable.
enum AdbStatus adb_flux_simulate(const struct AdbFlux *handle,
                                 double tau,
                                 double rel_tol,
                                 double abs_tol,
                                 double *out);

// New 1/nu noise realization: amplitude c, n components between nu_min
// and nu_max (MHz), phases drawn from the seed. Returns NULL on invalid
// parameters.
struct AdbNoise *adb_noise_new(double c, uint32_t n, double nu_min, double nu_max, uint64_t seed);

// Release a noise realization. NULL is ignored.
//
// # Safety
// `handle` must come from `adb_noise_new` and not have been freed.
void adb_noise_free(struct AdbNoise *handle);

// Sample N(t) and its first two time derivatives.
//
// # Safety
// `handle` must be a live `AdbNoise`; the out-pointers must be writable.
enum AdbStatus adb_noise_sample(const struct AdbNoise *handle,
                                double t,
                                double *out_value,
                                double *out_d1,
                                double *out_d2);

// Sampled suprema of |N|, |N'|, |N''| over [0, window] with the given
// sample count (includes the 1.01 sampling safety factor).
//
// # Safety
// `handle` must be a live `AdbNoise`; the out-pointers must be writable.
enum AdbStatus adb_noise_amplitude_bounds(const struct AdbNoise *handle,
                                          double window,
                                          uint64_t samples,
                                          double *out_sup_n,
                                          double *out_sup_d1,
                                          double *out_sup_d2);

// Term-wise analytic worst cases for |N|, |N'|, |N''|; sampled suprema
// can never exceed these.
//
// # Safety
// `handle` must be a live `AdbNoise`; the out-pointers must be writable.
enum AdbStatus adb_noise_analytic_caps(const struct AdbNoise *handle,
                                       double *out_cap_n,
                                       double *out_cap_d1,
                                       double *out_cap_d2);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADIABOUND_H */
