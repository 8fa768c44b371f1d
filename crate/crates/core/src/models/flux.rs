//! Two-level superconducting flux qubit with 1/nu flux-bias noise.
//!
//! The drift interpolates from a pure tunneling term to a tilted double
//! well: `H(s) = -t1 sigma_x + s epsilon r1 sigma_z`. Magnetic-frustration
//! noise couples through two independent 1/nu processes,
//!
//! ```text
//! H_noise(t) = N1(t) r1 sigma_z + N2(t) (r2 sigma_z - w sigma_x),
//! ```
//!
//! so the full evolution has planar field coefficients
//!
//! ```text
//! a(t) = -t1 - N2(t) w
//! b(t) = t r1 epsilon / tau + N1(t) r1 + N2(t) r2
//! ```
//!
//! (the sigma_x noise weight is the same w that appears in the coupling
//! operator). All energies are MHz with hbar = 1; epsilon is dimensionless
//! and the N_i are dimensionless frustration fluctuations.

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::bounds::{EndpointOverlaps, TwoScaleBounds};
use crate::dynamics::AbPoint;
use crate::error::{Error, Result};
use crate::noise::OneOverFNoise;
use crate::schedule::{endpoint_overlaps, HamiltonianSchedule, NoiseProcess};
use crate::spectral::{two_level_angles, HermitianOperator};

/// 200 GHz * 2 pi in MHz: the canonical Josephson energy scale.
pub const DEFAULT_E_J: f64 = 200e3 * TAU;

#[derive(Clone, Debug)]
pub struct FluxQubitModel {
    /// Josephson energy (MHz).
    pub e_j: f64,
    /// Tunneling amplitude, 1e-3 E_J for the recommended junction geometry.
    pub t1: f64,
    /// Flux-bias coupling of the deep wells, 4.8 E_J.
    pub r1: f64,
    /// Secondary sigma_z coupling of the second frustration loop, 1.0 E_J.
    pub r2: f64,
    /// sigma_x coupling of the second frustration loop, 2.4 E_J.
    pub w: f64,
    /// Sweep amplitude of the applied frustration (dimensionless, signed).
    pub epsilon: f64,
    pub noise1: Option<OneOverFNoise>,
    pub noise2: Option<OneOverFNoise>,
}

/// Planar coefficients with derivatives and the eigenbasis angle.
#[derive(Clone, Copy, Debug)]
pub struct FluxCoefficients {
    pub a: f64,
    pub b: f64,
    pub a_dot: f64,
    pub b_dot: f64,
    pub theta: f64,
    pub theta_dot: f64,
}

/// Calibrated noise amplitude suprema and endpoint overlaps; either measured
/// from a realization or injected from an external calibration.
#[derive(Clone, Copy, Debug)]
pub struct FluxCalibration {
    pub sup_n: f64,
    pub sup_ndot: f64,
    pub sup_nddot: f64,
    pub overlaps: EndpointOverlaps,
}

impl FluxCalibration {
    pub fn noiseless() -> Self {
        Self {
            sup_n: 0.0,
            sup_ndot: 0.0,
            sup_nddot: 0.0,
            overlaps: EndpointOverlaps::zero(),
        }
    }
}

/// Everything the two-time-scale bound needs for this model.
#[derive(Clone, Copy, Debug)]
pub struct FluxBoundInputs {
    pub two_scale: TwoScaleBounds,
    pub gamma_bar: f64,
    pub overlaps: EndpointOverlaps,
}

impl FluxQubitModel {
    pub fn new(e_j: f64, epsilon: f64) -> Self {
        Self {
            e_j,
            t1: 1e-3 * e_j,
            r1: 4.8 * e_j,
            r2: 1.0 * e_j,
            w: 2.4 * e_j,
            epsilon,
            noise1: None,
            noise2: None,
        }
    }

    /// Recommended junction parameters and a sweep ending at comparable
    /// sigma_x and sigma_z weights: E_J = 200 GHz * 2 pi, epsilon = -2e-4.
    pub fn default_parameters() -> Self {
        Self::new(DEFAULT_E_J, -2.0e-4)
    }

    pub fn with_noise(mut self, noise1: OneOverFNoise, noise2: OneOverFNoise) -> Self {
        self.noise1 = Some(noise1);
        self.noise2 = Some(noise2);
        self
    }

    /// Minimum gap of the drift, reached at s = 0: two tunneling quanta.
    pub fn gamma_bar(&self) -> f64 {
        2.0 * self.t1
    }

    /// Combined coupling norm r1 + sqrt(r2^2 + w^2) multiplying the noise
    /// derivative suprema; 7.4 E_J for the default couplings.
    pub fn coupling_norm(&self) -> f64 {
        self.r1 + self.r2.hypot(self.w)
    }

    fn noise_samples(&self, t: f64) -> (crate::noise::NoiseSample, crate::noise::NoiseSample) {
        let zero = crate::noise::NoiseSample {
            value: 0.0,
            d1: 0.0,
            d2: 0.0,
        };
        (
            self.noise1.as_ref().map_or(zero, |n| n.sample(t)),
            self.noise2.as_ref().map_or(zero, |n| n.sample(t)),
        )
    }

    /// Planar coefficients at physical time t for an evolution of length tau.
    pub fn coefficients(&self, t: f64, tau: f64) -> Result<FluxCoefficients> {
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tau must be positive, got {tau}"
            )));
        }
        let (n1, n2) = self.noise_samples(t);
        let a = -self.t1 - n2.value * self.w;
        let b = t * self.r1 * self.epsilon / tau + n1.value * self.r1 + n2.value * self.r2;
        let a_dot = -n2.d1 * self.w;
        let b_dot = self.r1 * self.epsilon / tau + n1.d1 * self.r1 + n2.d1 * self.r2;
        let angles = two_level_angles(a, b)?;
        let r2 = a * a + b * b;
        let theta_dot = (a_dot * b - a * b_dot) / r2;
        Ok(FluxCoefficients {
            a,
            b,
            a_dot,
            b_dot,
            theta: angles.theta,
            theta_dot,
        })
    }

    /// Coefficient provider for the rotating-frame integrator.
    pub fn provider(&self, tau: f64) -> impl Fn(f64) -> Result<AbPoint> + Clone {
        let model = self.clone();
        move |t: f64| {
            let c = model.coefficients(t, tau)?;
            Ok(AbPoint {
                a: c.a,
                b: c.b,
                a_dot: c.a_dot,
                b_dot: c.b_dot,
            })
        }
    }

    pub fn drift_schedule(&self) -> Result<HamiltonianSchedule> {
        let t1 = self.t1;
        let slope = self.epsilon * self.r1;
        HamiltonianSchedule::with_derivatives(
            2,
            Arc::new(move |s: f64| HermitianOperator::from_pauli(-t1, 0.0, s * slope, 0.0)),
            Arc::new(move |_| HermitianOperator::from_pauli(0.0, 0.0, slope, 0.0)),
            Arc::new(|_| HermitianOperator::from_pauli(0.0, 0.0, 0.0, 0.0)),
        )
    }

    /// The noise Hamiltonian as a process, when noise is configured.
    pub fn noise_process(&self) -> Result<Option<NoiseProcess>> {
        let (Some(n1), Some(n2)) = (self.noise1.clone(), self.noise2.clone()) else {
            return Ok(None);
        };
        let r1 = self.r1;
        let r2 = self.r2;
        let w = self.w;
        let nu_min = n1.nu_min().min(n2.nu_min());
        let op = move |s1: crate::noise::NoiseSample, s2: crate::noise::NoiseSample, order: u32| {
            let (v1, v2) = match order {
                0 => (s1.value, s2.value),
                1 => (s1.d1, s2.d1),
                _ => (s1.d2, s2.d2),
            };
            HermitianOperator::from_pauli(-v2 * w, 0.0, v1 * r1 + v2 * r2, 0.0)
        };
        let (n1a, n2a) = (n1.clone(), n2.clone());
        let (n1b, n2b) = (n1.clone(), n2.clone());
        let process = NoiseProcess::new(
            2,
            Arc::new(move |t| op(n1.sample(t), n2.sample(t), 0)),
            Arc::new(move |t| op(n1a.sample(t), n2a.sample(t), 1)),
            Arc::new(move |t| op(n1b.sample(t), n2b.sample(t), 2)),
            Some(nu_min),
        )?;
        Ok(Some(process))
    }

    /// Measure the noise amplitude suprema and the endpoint overlaps for an
    /// evolution of length tau.
    pub fn calibrate(&self, window: f64, samples: usize, tau: f64) -> Result<FluxCalibration> {
        let Some(process) = self.noise_process()? else {
            return Ok(FluxCalibration::noiseless());
        };
        let b1 = self
            .noise1
            .as_ref()
            .unwrap()
            .amplitude_bounds(window, samples)?;
        let b2 = self
            .noise2
            .as_ref()
            .unwrap()
            .amplitude_bounds(window, samples)?;
        let overlaps = endpoint_overlaps(&self.drift_schedule()?, &process, tau)?;
        Ok(FluxCalibration {
            sup_n: b1.sup_value.max(b2.sup_value),
            sup_ndot: b1.sup_d1.max(b2.sup_d1),
            sup_nddot: b1.sup_d2.max(b2.sup_d2),
            overlaps,
        })
    }

    /// Assemble the two-time-scale bound inputs from a calibration:
    /// c1 = |epsilon| r1 and c2 = 0 (the drift is linear in s), d_k =
    /// sup|N^(k)| (r1 + sqrt(r2^2 + w^2)), gamma = 2 t1.
    pub fn bound_inputs(&self, calibration: &FluxCalibration) -> Result<FluxBoundInputs> {
        let coupling = self.coupling_norm();
        let two_scale = TwoScaleBounds::new(
            self.epsilon.abs() * self.r1,
            0.0,
            calibration.sup_ndot * coupling,
            calibration.sup_nddot * coupling,
        )?;
        Ok(FluxBoundInputs {
            two_scale,
            gamma_bar: self.gamma_bar(),
            overlaps: calibration.overlaps,
        })
    }
}

/// Parameters of the four-junction double-well potential.
#[derive(Clone, Copy, Debug)]
pub struct FluxPotentialParams {
    pub e_j: f64,
    /// Relative strength of the tunable junction pair.
    pub beta: f64,
    /// Frustration of the small loop.
    pub f_a: f64,
    /// Combined frustration f1 + f2 / 2.
    pub f_b: f64,
}

/// Potential landscape over the junction phases:
///
/// ```text
/// U = E_J [2 + 2 beta - 2 cos(phi_p) cos(phi_m)
///          - 2 beta cos(pi f_a) cos(2 pi f_b + 2 phi_m)]
/// ```
///
/// At f_a = 1/3, f_b = 1/2 this is a double well, symmetric about the
/// phi_p axis, with minima at phi_p = 0, cos(phi_m) = 1 / (2 beta).
pub fn flux_potential(params: &FluxPotentialParams, phi_p: f64, phi_m: f64) -> f64 {
    let FluxPotentialParams {
        e_j,
        beta,
        f_a,
        f_b,
    } = *params;
    e_j * (2.0 + 2.0 * beta
        - 2.0 * phi_p.cos() * phi_m.cos()
        - 2.0 * beta * (std::f64::consts::PI * f_a).cos() * (TAU * f_b + 2.0 * phi_m).cos())
}
