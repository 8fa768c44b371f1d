//! C ABI over the adiabound toolkit.
//!
//! The surface follows the usual conventions for numeric libraries: opaque
//! handles created by `*_new` and released by `*_free`, plain-old-data
//! out-parameters, and integer status codes. All energies are MHz (hbar =
//! 1) and times microseconds, as in the underlying crate.
//!
//! Every entry point catches panics; a panic is reported as
//! `ADB_STATUS_NUMERICAL_FAILURE` rather than unwinding across the
//! boundary.

// `!(x > 0.0)` guards intentionally treat NaN as invalid.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use adiabound::bounds::{
    at_bound_constant, feasible_tau_interval, noise_bound_terms, BoundTerms, EndpointOverlaps,
    OverlapSource, TwoScaleBounds,
};
use adiabound::dynamics::{evolve_rotating_frame, IntegratorConfig};
use adiabound::models::{FluxCalibration, FluxQubitModel, TongModel};
use adiabound::noise::OneOverFNoise;
use adiabound::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdbStatus {
    AdbStatusOk = 0,
    AdbStatusNullPointer = 1,
    AdbStatusInvalidArgument = 2,
    AdbStatusNumericalFailure = 3,
    AdbStatusNoFeasibleTau = 4,
}

use AdbStatus::*;

fn status_of(err: &Error) -> AdbStatus {
    match err {
        Error::Config(_)
        | Error::InvalidArgument(_)
        | Error::Dimension { .. }
        | Error::NonSquare { .. }
        | Error::IndexOutOfRange { .. }
        | Error::RankMismatch { .. }
        | Error::NonHermitian { .. }
        | Error::WindowTooShort { .. } => AdbStatusInvalidArgument,
        _ => AdbStatusNumericalFailure,
    }
}

/// Coefficients of a bound `A tau + B + C / tau + E` together with its
/// value at the requested tau (`value` is clamped at 1, `raw_value` not).
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct AdbBoundTerms {
    pub tau_linear_coeff: f64,
    pub constant_term: f64,
    pub inv_tau_coeff: f64,
    pub endpoint_term: f64,
    pub value: f64,
    pub raw_value: f64,
}

impl AdbBoundTerms {
    fn from_terms(terms: &BoundTerms, tau: f64) -> Self {
        let raw = terms.evaluate(tau);
        Self {
            tau_linear_coeff: terms.tau_linear_coeff,
            constant_term: terms.constant_term,
            inv_tau_coeff: terms.inv_tau_coeff,
            endpoint_term: terms.endpoint_term,
            value: raw.min(1.0),
            raw_value: raw,
        }
    }
}

/// Opaque handle to a rotating-field model.
pub struct AdbTong {
    inner: TongModel,
}

/// Opaque handle to a flux-qubit model (couplings fixed by E_J, optional
/// noise installed with `adb_flux_set_noise`).
pub struct AdbFlux {
    inner: FluxQubitModel,
}

/// Opaque handle to a 1/nu cosine-sum noise realization.
pub struct AdbNoise {
    inner: OneOverFNoise,
}

fn guarded(body: impl FnOnce() -> AdbStatus) -> AdbStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(AdbStatusNumericalFailure)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn adb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Two-time-scale noise bound from explicit inputs: drift derivative
/// bounds c1, c2 (MHz), noise derivative bounds d1 (MHz^2), d2 (MHz^3),
/// minimum gap gamma (MHz), endpoint overlaps delta0, delta1, evaluated at
/// tau (us).
///
/// # Safety
/// `out` must point to writable memory for one `AdbBoundTerms`.
#[no_mangle]
pub unsafe extern "C" fn adb_noise_bound(
    c1: f64,
    c2: f64,
    d1: f64,
    d2: f64,
    gamma: f64,
    delta0: f64,
    delta1: f64,
    tau: f64,
    out: *mut AdbBoundTerms,
) -> AdbStatus {
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        let result = (|| {
            let ts = TwoScaleBounds::new(c1, c2, d1, d2)?;
            let overlaps = EndpointOverlaps::new(delta0, delta1, OverlapSource::ExactProjector)?;
            let terms = noise_bound_terms(&ts, gamma, &overlaps)?;
            if !(tau > 0.0) {
                return Err(Error::InvalidArgument("tau must be positive".into()));
            }
            Ok(AdbBoundTerms::from_terms(&terms, tau))
        })();
        match result {
            Ok(terms) => {
                unsafe { *out = terms };
                AdbStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Constant-gap bound with derivative bounds b1, b2, minimum gap gamma,
/// band ratio d_bar (1 for a nondegenerate ground state), normalized time
/// s in (0, 1], evaluated at tau.
///
/// # Safety
/// `out` must point to writable memory for one `AdbBoundTerms`.
#[no_mangle]
pub unsafe extern "C" fn adb_constant_bound(
    b1: f64,
    b2: f64,
    gamma: f64,
    d_bar: f64,
    s: f64,
    tau: f64,
    out: *mut AdbBoundTerms,
) -> AdbStatus {
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| match at_bound_constant(b1, b2, gamma, d_bar, tau, s) {
        Ok(result) => {
            unsafe { *out = AdbBoundTerms::from_terms(&result.terms, tau) };
            AdbStatusOk
        }
        Err(e) => status_of(&e),
    })
}

/// Bound for an imperfect initial state `eta (|psi_0> + delta |perp>)`
/// with |delta| = delta_abs: `|eta| (|delta| + constant-form bound)`.
///
/// # Safety
/// `out` must point to writable memory for one `AdbBoundTerms`.
#[no_mangle]
pub unsafe extern "C" fn adb_initial_bound(
    delta_abs: f64,
    b1: f64,
    b2: f64,
    gamma: f64,
    s: f64,
    tau: f64,
    out: *mut AdbBoundTerms,
) -> AdbStatus {
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        match adiabound::bounds::at_initial_bound(
            num_complex::Complex64::new(delta_abs, 0.0),
            b1,
            b2,
            gamma,
            tau,
            s,
        ) {
            Ok(result) => {
                unsafe { *out = AdbBoundTerms::from_terms(&result.terms, tau) };
                AdbStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Bound under a systematic Hamiltonian perturbation, using the perturbed
/// system's derivative bounds b1, b2 and minimum gap gamma_eps plus the
/// endpoint overlaps delta0, delta1.
///
/// # Safety
/// `out` must point to writable memory for one `AdbBoundTerms`.
#[no_mangle]
pub unsafe extern "C" fn adb_error_bound(
    b1: f64,
    b2: f64,
    gamma_eps: f64,
    delta0: f64,
    delta1: f64,
    tau: f64,
    out: *mut AdbBoundTerms,
) -> AdbStatus {
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        let result = (|| {
            let overlaps = EndpointOverlaps::new(delta0, delta1, OverlapSource::ExactProjector)?;
            adiabound::bounds::at_error_bound(b1, b2, gamma_eps, &overlaps, tau)
        })();
        match result {
            Ok(result) => {
                unsafe { *out = AdbBoundTerms::from_terms(&result.terms, tau) };
                AdbStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Bound for coupling to a static low-temperature environment of norm
/// env_norm, with coupling norms eps|Delta| at the start, supremum, and
/// end of the sweep. Requires env_norm + 2 coupling_sup < gamma.
///
/// # Safety
/// `out` must point to writable memory for one `AdbBoundTerms`.
#[no_mangle]
pub unsafe extern "C" fn adb_env_bound(
    env_norm: f64,
    coupling_start: f64,
    coupling_sup: f64,
    coupling_end: f64,
    gamma: f64,
    b1: f64,
    b2: f64,
    tau: f64,
    out: *mut AdbBoundTerms,
) -> AdbStatus {
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        let coupling = adiabound::bounds::EnvCoupling {
            at_start: coupling_start,
            sup: coupling_sup,
            at_end: coupling_end,
        };
        match adiabound::bounds::at_env_bound(env_norm, &coupling, gamma, b1, b2, tau) {
            Ok(result) => {
                unsafe { *out = AdbBoundTerms::from_terms(&result.terms, tau) };
                AdbStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Overlap estimates from matrix perturbation bounds: the sharper form
/// needs the gap from the unperturbed excited level to the perturbed
/// ground level; the coarser form only the unperturbed gap. Writes NaN
/// for an inapplicable estimate and reports it in the status.
///
/// # Safety
/// `out` must point to a writable f64.
#[no_mangle]
pub unsafe extern "C" fn adb_sin_theta_delta(
    perturbation_norm: f64,
    gap_to_perturbed_ground: f64,
    out: *mut f64,
) -> AdbStatus {
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        match adiabound::bounds::sin_theta_delta(perturbation_norm, gap_to_perturbed_ground) {
            Ok(v) => {
                unsafe { *out = v };
                AdbStatusOk
            }
            Err(e) => {
                unsafe { *out = f64::NAN };
                status_of(&e)
            }
        }
    })
}

/// See [`adb_sin_theta_delta`]; this is the coarser gap-only estimate.
///
/// # Safety
/// `out` must point to a writable f64.
#[no_mangle]
pub unsafe extern "C" fn adb_bauer_fike_delta(
    perturbation_norm: f64,
    unperturbed_gap: f64,
    out: *mut f64,
) -> AdbStatus {
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(
        || match adiabound::bounds::bauer_fike_delta(perturbation_norm, unperturbed_gap) {
            Ok(v) => {
                unsafe { *out = v };
                AdbStatusOk
            }
            Err(e) => {
                unsafe { *out = f64::NAN };
                status_of(&e)
            }
        },
    )
}

/// Feasible tau interval for `A tau + B + C/tau + E <= tolerance`.
/// On success writes tau_min, tau_max (infinity when unbounded) and
/// tau_star (the minimizer, NaN when undefined). Returns
/// `ADB_STATUS_NO_FEASIBLE_TAU` when no tau satisfies the tolerance.
///
/// # Safety
/// The three out-pointers must each point to a writable f64.
#[no_mangle]
pub unsafe extern "C" fn adb_feasible_tau(
    tau_linear_coeff: f64,
    constant_term: f64,
    inv_tau_coeff: f64,
    endpoint_term: f64,
    tolerance: f64,
    out_tau_min: *mut f64,
    out_tau_max: *mut f64,
    out_tau_star: *mut f64,
) -> AdbStatus {
    if out_tau_min.is_null() || out_tau_max.is_null() || out_tau_star.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        let terms = BoundTerms {
            tau_linear_coeff,
            constant_term,
            inv_tau_coeff,
            endpoint_term,
        };
        match feasible_tau_interval(&terms, tolerance) {
            Some(f) => {
                unsafe {
                    *out_tau_min = f.tau_min;
                    *out_tau_max = f.tau_max.unwrap_or(f64::INFINITY);
                    *out_tau_star = f.tau_star.unwrap_or(f64::NAN);
                }
                AdbStatusOk
            }
            None => AdbStatusNoFeasibleTau,
        }
    })
}

/// New rotating-field model with tilt theta (radians), precession rate
/// omega (MHz) and field strength omega0 (MHz).
#[no_mangle]
pub extern "C" fn adb_tong_new(theta: f64, omega: f64, omega0: f64) -> *mut AdbTong {
    Box::into_raw(Box::new(AdbTong {
        inner: TongModel {
            theta,
            omega,
            omega0,
        },
    }))
}

/// Release a rotating-field model. NULL is ignored.
///
/// # Safety
/// `handle` must come from `adb_tong_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn adb_tong_free(handle: *mut AdbTong) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Exact leaked amplitude of the rotating-field model at physical time t.
///
/// # Safety
/// `handle` must be a live `AdbTong`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn adb_tong_exact_error(
    handle: *const AdbTong,
    t: f64,
    out: *mut f64,
) -> AdbStatus {
    let Some(model) = (unsafe { handle.as_ref() }) else {
        return AdbStatusNullPointer;
    };
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        unsafe { *out = model.inner.exact_error(t) };
        AdbStatusOk
    })
}

/// Two-time-scale bound of the rotating-field model at tau.
///
/// # Safety
/// `handle` must be a live `AdbTong`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn adb_tong_bound(
    handle: *const AdbTong,
    tau: f64,
    out: *mut AdbBoundTerms,
) -> AdbStatus {
    let Some(model) = (unsafe { handle.as_ref() }) else {
        return AdbStatusNullPointer;
    };
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        let result = (|| {
            let inputs = model.inner.bound_inputs()?;
            let terms = noise_bound_terms(&inputs.two_scale, inputs.gamma_bar, &inputs.overlaps)?;
            if !(tau > 0.0) {
                return Err(Error::InvalidArgument("tau must be positive".into()));
            }
            Ok(AdbBoundTerms::from_terms(&terms, tau))
        })();
        match result {
            Ok(t) => {
                unsafe { *out = t };
                AdbStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

fn integrator(rel_tol: f64, abs_tol: f64) -> IntegratorConfig {
    let mut config = IntegratorConfig::default();
    if rel_tol > 0.0 {
        config.rel_tol = rel_tol;
    }
    if abs_tol > 0.0 {
        config.abs_tol = abs_tol;
    }
    config
}

/// Integrate the rotating-field model over [0, tau] and write the final
/// leaked amplitude |c1(tau)|. Non-positive tolerances select the
/// defaults (1e-9 relative, 1e-12 absolute).
///
/// # Safety
/// `handle` must be a live `AdbTong`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn adb_tong_simulate(
    handle: *const AdbTong,
    tau: f64,
    rel_tol: f64,
    abs_tol: f64,
    out: *mut f64,
) -> AdbStatus {
    let Some(model) = (unsafe { handle.as_ref() }) else {
        return AdbStatusNullPointer;
    };
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        let result = (|| {
            let provider = model.inner.planar_equivalent()?;
            let traj = evolve_rotating_frame(provider, tau, &integrator(rel_tol, abs_tol))?;
            Ok(traj.final_error)
        })();
        match result {
            Ok(err) => {
                unsafe { *out = err };
                AdbStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// New flux-qubit model with Josephson energy e_j (MHz; pass 0 for the
/// canonical 2 pi x 200 GHz) and sweep amplitude epsilon (dimensionless,
/// pass 0 for the canonical -2e-4). Couplings follow the recommended
/// junction geometry: t1 = 1e-3 E_J, r1 = 4.8 E_J, r2 = 1.0 E_J,
/// w = 2.4 E_J.
#[no_mangle]
pub extern "C" fn adb_flux_new(e_j: f64, epsilon: f64) -> *mut AdbFlux {
    let e_j = if e_j > 0.0 {
        e_j
    } else {
        adiabound::models::flux::DEFAULT_E_J
    };
    let epsilon = if epsilon != 0.0 { epsilon } else { -2.0e-4 };
    Box::into_raw(Box::new(AdbFlux {
        inner: FluxQubitModel::new(e_j, epsilon),
    }))
}

/// Release a flux-qubit model. NULL is ignored.
///
/// # Safety
/// `handle` must come from `adb_flux_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn adb_flux_free(handle: *mut AdbFlux) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Install 1/nu frustration noise on both loops: amplitude c, n cosine
/// components between nu_min and nu_max (MHz), with independent phase
/// realizations from seed1 and seed2.
///
/// # Safety
/// `handle` must be a live `AdbFlux`.
#[no_mangle]
pub unsafe extern "C" fn adb_flux_set_noise(
    handle: *mut AdbFlux,
    c: f64,
    n: u32,
    nu_min: f64,
    nu_max: f64,
    seed1: u64,
    seed2: u64,
) -> AdbStatus {
    let Some(model) = (unsafe { handle.as_mut() }) else {
        return AdbStatusNullPointer;
    };
    guarded(|| {
        let result = (|| {
            let n1 = OneOverFNoise::seeded(c, n as usize, nu_min, nu_max, seed1)?;
            let n2 = OneOverFNoise::seeded(c, n as usize, nu_min, nu_max, seed2)?;
            model.inner = model.inner.clone().with_noise(n1, n2);
            Ok(())
        })();
        match result {
            Ok(()) => AdbStatusOk,
            Err(e) => status_of(&e),
        }
    })
}

/// Two-time-scale bound of the flux qubit at tau from externally
/// calibrated noise inputs: derivative suprema sup|N'| (MHz) and sup|N''|
/// (MHz^2) and endpoint overlaps delta0, delta1.
///
/// # Safety
/// `handle` must be a live `AdbFlux`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn adb_flux_bound(
    handle: *const AdbFlux,
    sup_ndot: f64,
    sup_nddot: f64,
    delta0: f64,
    delta1: f64,
    tau: f64,
    out: *mut AdbBoundTerms,
) -> AdbStatus {
    let Some(model) = (unsafe { handle.as_ref() }) else {
        return AdbStatusNullPointer;
    };
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        let result = (|| {
            let calibration = FluxCalibration {
                sup_n: 0.0,
                sup_ndot,
                sup_nddot,
                overlaps: EndpointOverlaps::new(delta0, delta1, OverlapSource::ExactProjector)?,
            };
            let inputs = model.inner.bound_inputs(&calibration)?;
            let terms = noise_bound_terms(&inputs.two_scale, inputs.gamma_bar, &inputs.overlaps)?;
            if !(tau > 0.0) {
                return Err(Error::InvalidArgument("tau must be positive".into()));
            }
            Ok(AdbBoundTerms::from_terms(&terms, tau))
        })();
        match result {
            Ok(t) => {
                unsafe { *out = t };
                AdbStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Integrate the flux qubit over [0, tau] (with installed noise, if any)
/// and write the final leaked amplitude.
///
/// # Safety
/// `handle` must be a live `AdbFlux`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn adb_flux_simulate(
    handle: *const AdbFlux,
    tau: f64,
    rel_tol: f64,
    abs_tol: f64,
    out: *mut f64,
) -> AdbStatus {
    let Some(model) = (unsafe { handle.as_ref() }) else {
        return AdbStatusNullPointer;
    };
    if out.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        let result = evolve_rotating_frame(
            model.inner.provider(tau),
            tau,
            &integrator(rel_tol, abs_tol),
        );
        match result {
            Ok(traj) => {
                unsafe { *out = traj.final_error };
                AdbStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// New 1/nu noise realization: amplitude c, n components between nu_min
/// and nu_max (MHz), phases drawn from the seed. Returns NULL on invalid
/// parameters.
#[no_mangle]
pub extern "C" fn adb_noise_new(
    c: f64,
    n: u32,
    nu_min: f64,
    nu_max: f64,
    seed: u64,
) -> *mut AdbNoise {
    match OneOverFNoise::seeded(c, n as usize, nu_min, nu_max, seed) {
        Ok(inner) => Box::into_raw(Box::new(AdbNoise { inner })),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Release a noise realization. NULL is ignored.
///
/// # Safety
/// `handle` must come from `adb_noise_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn adb_noise_free(handle: *mut AdbNoise) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Sample N(t) and its first two time derivatives.
///
/// # Safety
/// `handle` must be a live `AdbNoise`; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn adb_noise_sample(
    handle: *const AdbNoise,
    t: f64,
    out_value: *mut f64,
    out_d1: *mut f64,
    out_d2: *mut f64,
) -> AdbStatus {
    let Some(noise) = (unsafe { handle.as_ref() }) else {
        return AdbStatusNullPointer;
    };
    if out_value.is_null() || out_d1.is_null() || out_d2.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        let s = noise.inner.sample(t);
        unsafe {
            *out_value = s.value;
            *out_d1 = s.d1;
            *out_d2 = s.d2;
        }
        AdbStatusOk
    })
}

/// Sampled suprema of |N|, |N'|, |N''| over [0, window] with the given
/// sample count (includes the 1.01 sampling safety factor).
///
/// # Safety
/// `handle` must be a live `AdbNoise`; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn adb_noise_amplitude_bounds(
    handle: *const AdbNoise,
    window: f64,
    samples: u64,
    out_sup_n: *mut f64,
    out_sup_d1: *mut f64,
    out_sup_d2: *mut f64,
) -> AdbStatus {
    let Some(noise) = (unsafe { handle.as_ref() }) else {
        return AdbStatusNullPointer;
    };
    if out_sup_n.is_null() || out_sup_d1.is_null() || out_sup_d2.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(
        || match noise.inner.amplitude_bounds(window, samples as usize) {
            Ok(b) => {
                unsafe {
                    *out_sup_n = b.sup_value;
                    *out_sup_d1 = b.sup_d1;
                    *out_sup_d2 = b.sup_d2;
                }
                AdbStatusOk
            }
            Err(e) => status_of(&e),
        },
    )
}

/// Term-wise analytic worst cases for |N|, |N'|, |N''|; sampled suprema
/// can never exceed these.
///
/// # Safety
/// `handle` must be a live `AdbNoise`; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn adb_noise_analytic_caps(
    handle: *const AdbNoise,
    out_cap_n: *mut f64,
    out_cap_d1: *mut f64,
    out_cap_d2: *mut f64,
) -> AdbStatus {
    let Some(noise) = (unsafe { handle.as_ref() }) else {
        return AdbStatusNullPointer;
    };
    if out_cap_n.is_null() || out_cap_d1.is_null() || out_cap_d2.is_null() {
        return AdbStatusNullPointer;
    }
    guarded(|| {
        let caps = noise.inner.analytic_caps();
        unsafe {
            *out_cap_n = caps.value;
            *out_cap_d1 = caps.d1;
            *out_cap_d2 = caps.d2;
        }
        AdbStatusOk
    })
}
