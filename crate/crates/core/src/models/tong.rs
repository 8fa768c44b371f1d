//! Spin-1/2 in a rotating magnetic field.
//!
//! The field has magnitude omega0/2, tilt theta from the z axis, and
//! precesses about z at rate omega. In the z basis:
//!
//! ```text
//! H(t) = -(omega0/2) [[cos th,            e^{-i omega t} sin th],
//!                     [e^{i omega t} sin th,           -cos th]]
//! ```
//!
//! The eigenvalues are +-|omega0|/2 for all t, so the spectral gap is flat,
//! yet a resonant wobble drives a complete transition: the standard example
//! of the adiabatic approximation failing under a gap-preserving
//! perturbation. Schroedinger's equation is solvable in closed form here,
//! which makes the model the calibration oracle for everything else: the
//! exact propagator checks the direct integrator, the exact error checks the
//! rotating-frame integrator, and the split into a static diagonal drift
//! plus a rotating off-diagonal noise term feeds the two-time-scale bound.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::bounds::{EndpointOverlaps, TwoScaleBounds};
use crate::cmat::CMat;
use crate::dynamics::AbPoint;
use crate::error::{Error, Result};
use crate::schedule::{endpoint_overlaps, HamiltonianSchedule, NoiseProcess};
use crate::spectral::HermitianOperator;

#[derive(Clone, Copy, Debug)]
pub struct TongModel {
    /// Tilt of the field from the z axis (radians).
    pub theta: f64,
    /// Precession rate (MHz).
    pub omega: f64,
    /// Field strength; the gap is |omega0| (MHz).
    pub omega0: f64,
}

/// Inputs the model hands to the two-time-scale noise bound.
#[derive(Clone, Copy, Debug)]
pub struct TongBoundInputs {
    pub two_scale: TwoScaleBounds,
    pub gamma_bar: f64,
    pub overlaps: EndpointOverlaps,
}

impl Default for TongModel {
    /// The canonical demonstration parameters: theta = 0.001, omega = 10,
    /// omega0 = -10 (weak tilt, wobble near resonance).
    fn default() -> Self {
        Self {
            theta: 0.001,
            omega: 10.0,
            omega0: -10.0,
        }
    }
}

/// sin(x)/x, stable at the origin.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

impl TongModel {
    /// Rabi frequency of the exact solution:
    /// sqrt(omega0^2 + omega^2 + 2 omega0 omega cos theta).
    pub fn omega_bar(&self) -> f64 {
        let along = self.omega + self.omega0 * self.theta.cos();
        along.hypot(self.omega0 * self.theta.sin())
    }

    pub fn hamiltonian(&self, s: f64, tau: f64) -> HermitianOperator {
        let pre = -self.omega0 / 2.0;
        let (sin_th, cos_th) = self.theta.sin_cos();
        let phase = C64::from_polar(1.0, -self.omega * s * tau);
        let mut m = CMat::zeros(2);
        m[(0, 0)] = C64::new(pre * cos_th, 0.0);
        m[(1, 1)] = C64::new(-pre * cos_th, 0.0);
        m[(0, 1)] = phase * (pre * sin_th);
        m[(1, 0)] = phase.conj() * (pre * sin_th);
        HermitianOperator::new(m).expect("rotating-field Hamiltonian is Hermitian")
    }

    /// Closed-form propagator U(t) with U(0) = I.
    pub fn exact_unitary(&self, t: f64) -> CMat {
        let wb = self.omega_bar();
        let half = wb * t / 2.0;
        let cos_half = half.cos();
        // sin(wb t / 2) / wb, written through sinc so the resonant limit
        // wb -> 0 stays finite.
        let sin_over = (t / 2.0) * sinc(half);
        let along = self.omega + self.omega0 * self.theta.cos();
        let transverse = self.omega0 * self.theta.sin();
        let e_minus = C64::from_polar(1.0, -self.omega * t / 2.0);
        let e_plus = e_minus.conj();

        let diag = C64::new(cos_half, along * sin_over);
        let off = C64::new(0.0, transverse * sin_over);
        let mut u = CMat::zeros(2);
        u[(0, 0)] = diag * e_minus;
        u[(0, 1)] = off * e_minus;
        u[(1, 0)] = off * e_plus;
        u[(1, 1)] = diag.conj() * e_plus;
        u
    }

    /// Exact leaked amplitude |omega0 sin th / omega_bar| |sin(omega_bar t / 2)|.
    ///
    /// At resonance (omega = -omega0 cos th) this is |sin(omega0 sin th t / 2)|:
    /// the wobble eventually drives a full transition.
    pub fn exact_error(&self, t: f64) -> f64 {
        let wb = self.omega_bar();
        let half = wb * t / 2.0;
        (self.omega0 * self.theta.sin() * (t / 2.0) * sinc(half)).abs()
    }

    /// The static diagonal part, taken as the intended Hamiltonian.
    pub fn drift_schedule(&self) -> Result<HamiltonianSchedule> {
        let z = -self.omega0 / 2.0 * self.theta.cos();
        HamiltonianSchedule::with_derivatives(
            2,
            Arc::new(move |_| HermitianOperator::from_pauli(0.0, 0.0, z, 0.0)),
            Arc::new(|_| HermitianOperator::from_pauli(0.0, 0.0, 0.0, 0.0)),
            Arc::new(|_| HermitianOperator::from_pauli(0.0, 0.0, 0.0, 0.0)),
        )
    }

    /// The rotating off-diagonal part, treated as noise on physical time.
    pub fn noise_process(&self) -> Result<NoiseProcess> {
        let amp = -self.omega0 / 2.0 * self.theta.sin();
        let om = self.omega;
        let field = move |t: f64, order: u32| {
            // k-th derivative of amp (cos(om t), sin(om t)) . (sx, sy)
            let scale = amp * om.powi(order as i32);
            let phase = om * t + (order as f64) * std::f64::consts::FRAC_PI_2;
            HermitianOperator::from_pauli(scale * phase.cos(), scale * phase.sin(), 0.0, 0.0)
        };
        NoiseProcess::new(
            2,
            Arc::new(move |t| field(t, 0)),
            Arc::new(move |t| field(t, 1)),
            Arc::new(move |t| field(t, 2)),
            Some(om.abs() / std::f64::consts::TAU),
        )
    }

    /// Derivative bounds of the drift/noise split. The drift is constant in
    /// s (c1 = c2 = 0); the noise derivative norms are exact:
    /// d1 = |omega omega0 sin th| / 2, d2 = omega^2 |omega0 sin th| / 2.
    /// The gap never moves, so gamma_bar = |omega0|. Endpoint overlaps are
    /// computed from the actual projectors; precession about z leaves them
    /// independent of tau.
    pub fn bound_inputs(&self) -> Result<TongBoundInputs> {
        let transverse = (self.omega0 * self.theta.sin()).abs();
        let d1 = self.omega.abs() * transverse / 2.0;
        let d2 = self.omega * self.omega * transverse / 2.0;
        let two_scale = TwoScaleBounds::new(0.0, 0.0, d1, d2)?;
        let overlaps = if self.theta == 0.0 {
            EndpointOverlaps::zero()
        } else {
            endpoint_overlaps(&self.drift_schedule()?, &self.noise_process()?, 1.0)?
        };
        Ok(TongBoundInputs {
            two_scale,
            gamma_bar: self.omega0.abs(),
            overlaps,
        })
    }

    /// Equivalent planar-field form for the rotating-frame integrator.
    ///
    /// In the zero-geometric-phase eigenbasis the coupling has magnitude
    /// omega sin th / 2 and its phase winds at |omega0| + sign(omega0)
    /// omega cos th relative to the dynamical phase. A field of magnitude
    /// half that detuning rotating in the x-z plane at rate omega sin th
    /// obeys identical amplitude equations, so |c1(t)| reproduces the exact
    /// error of the full model.
    pub fn planar_equivalent(&self) -> Result<impl Fn(f64) -> Result<AbPoint> + Clone> {
        let detuning = self.omega0.abs() + self.omega0.signum() * self.omega * self.theta.cos();
        if detuning == 0.0 && (self.omega * self.theta.sin()) == 0.0 {
            return Err(Error::DegenerateSpectrum {
                context: "planar equivalent collapses to zero field".into(),
            });
        }
        let radius = detuning.abs() / 2.0;
        let rate = self.omega * self.theta.sin();
        Ok(move |t: f64| -> Result<AbPoint> {
            let alpha = std::f64::consts::FRAC_PI_2 + rate * t;
            let (sin_a, cos_a) = alpha.sin_cos();
            Ok(AbPoint {
                a: radius * sin_a,
                b: radius * cos_a,
                a_dot: radius * cos_a * rate,
                b_dot: -radius * sin_a * rate,
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eigendecompose, operator_two_norm};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn zero_tilt_is_diagonal() {
        let model = TongModel {
            theta: 0.0,
            omega: 3.0,
            omega0: -7.0,
        };
        for &(s, tau) in &[(0.0, 1.0), (0.5, 2.0), (1.0, 11.0)] {
            let h = model.hamiltonian(s, tau);
            let expect = HermitianOperator::from_pauli(0.0, 0.0, 3.5, 0.0);
            assert!(operator_two_norm(&h.mat().sub(expect.mat())) < 1e-15);
        }
    }

    #[test]
    fn initial_hamiltonian_tilted_in_xz() {
        let model = TongModel::default();
        let h = model.hamiltonian(0.0, 5.0);
        let pre = -model.omega0 / 2.0;
        let expect = HermitianOperator::from_pauli(
            pre * model.theta.sin(),
            0.0,
            pre * model.theta.cos(),
            0.0,
        );
        assert!(operator_two_norm(&h.mat().sub(expect.mat())) < 1e-15);
    }

    #[test]
    fn norm_and_gap_are_flat() {
        let model = TongModel::default();
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..1000 {
            let s: f64 = rng.random_range(0.0..1.0);
            let tau: f64 = rng.random_range(0.01..30.0);
            let h = model.hamiltonian(s, tau);
            assert!((operator_two_norm(h.mat()) - 5.0).abs() < 1e-12);
            let spec = eigendecompose(&h).unwrap();
            assert!((spec.eigenvalues[0] + 5.0).abs() < 1e-12);
            assert!((spec.eigenvalues[1] - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_unitary_starts_at_identity_and_stays_unitary() {
        let model = TongModel::default();
        assert!(
            model
                .exact_unitary(0.0)
                .sub(&CMat::identity(2))
                .max_abs_entry()
                < 1e-15
        );
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..100 {
            let t: f64 = rng.random_range(0.0..40.0);
            let u = model.exact_unitary(t);
            let residual = u.adjoint().mul(&u).sub(&CMat::identity(2));
            assert!(operator_two_norm(&residual) < 1e-12);
        }
    }

    #[test]
    fn exact_error_small_angle_form() {
        // For theta = 0.001, omega = 10, omega0 = -10 the exact error is
        // |sin(0.005 t)| up to the small-angle prefactor (|off| < 2e-7).
        let model = TongModel::default();
        assert_eq!(model.exact_error(0.0), 0.0);
        for &t in &[0.3f64, 5.0, 77.0, 314.0] {
            let display = (0.005 * t).sin().abs();
            assert!((model.exact_error(t) - display).abs() < 2e-7, "t = {t}");
        }
    }

    #[test]
    fn exact_error_resonant_case() {
        // omega = -omega0 cos th: full transitions with Rabi frequency
        // |omega0| sin th.
        let theta = 0.3f64;
        let omega0 = -8.0f64;
        let model = TongModel {
            theta,
            omega: -omega0 * theta.cos(),
            omega0,
        };
        assert!((model.omega_bar() - omega0.abs() * theta.sin()).abs() < 1e-12);
        for &t in &[0.1f64, 0.9, 2.3] {
            let expect = (omega0 * theta.sin() * t / 2.0).sin().abs();
            assert!((model.exact_error(t) - expect).abs() < 1e-12);
        }
        // peak of the envelope: a complete transition at omega_bar t = pi
        let t_peak = std::f64::consts::PI / model.omega_bar();
        assert!((model.exact_error(t_peak) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn off_resonance_peak_is_envelope() {
        let model = TongModel {
            theta: 0.2,
            omega: 4.0,
            omega0: -9.0,
        };
        let envelope = (model.omega0 * model.theta.sin() / model.omega_bar()).abs();
        let t_peak = std::f64::consts::PI / model.omega_bar();
        assert!((model.exact_error(t_peak) - envelope).abs() < 1e-12);
    }

    #[test]
    fn combined_gap_profile_is_flat() {
        // The drift/noise recombination leaves the gap pinned at |omega0|
        // for every s and tau.
        let model = TongModel::default();
        let drift = model.drift_schedule().unwrap();
        let noise = model.noise_process().unwrap();
        let grid = crate::schedule::uniform_grid(101);
        for &tau in &[0.5, 7.0, 19.0] {
            let profile =
                crate::schedule::combined_gap_profile(&drift, Some(&noise), tau, &grid).unwrap();
            assert!((profile.gamma_min - 10.0).abs() < 1e-9, "tau {tau}");
            for g in &profile.gamma {
                assert!((g - 10.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn exact_unitary_matches_direct_propagation_at_fractions() {
        // Evolving the s-parameterized Hamiltonian for total time T gives
        // U(T) regardless of the split, so partial times of a tau = 5 run
        // are full runs at smaller tau.
        let model = TongModel::default();
        for &t_end in &[1.25, 2.5, 5.0] {
            let schedule = crate::schedule::HamiltonianSchedule::new(
                2,
                std::sync::Arc::new(move |s: f64| model.hamiltonian(s, t_end)),
            )
            .unwrap();
            let u = crate::dynamics::evolve_direct(&schedule, t_end, 30_000).unwrap();
            let exact = model.exact_unitary(t_end);
            assert!(
                operator_two_norm(&u.sub(&exact)) < 1e-8,
                "t = {t_end}: {}",
                operator_two_norm(&u.sub(&exact))
            );
        }
    }

    #[test]
    fn schedule_derivative_norm_is_flat() {
        // |dH/ds| of the combined Hamiltonian at fixed tau equals
        // |omega omega0 tau sin theta| / 2 for every s.
        let model = TongModel::default();
        let tau = 3.0;
        let schedule = crate::schedule::HamiltonianSchedule::new(
            2,
            std::sync::Arc::new(move |s: f64| model.hamiltonian(s, tau)),
        )
        .unwrap();
        let expect = (model.omega * model.omega0 * model.theta.sin()).abs() * tau / 2.0;
        for &s in &[0.1, 0.5, 0.9] {
            let n = operator_two_norm(schedule.d1(s).mat());
            assert!(
                (n - expect).abs() <= 1e-6 * expect,
                "s = {s}: {n} vs {expect}"
            );
        }
    }

    #[test]
    fn bound_inputs_reference_values() {
        let model = TongModel::default();
        let inputs = model.bound_inputs().unwrap();
        let sin_th = 0.001f64.sin();
        assert!((inputs.two_scale.d1 - 50.0 * sin_th).abs() < 1e-12);
        assert!((inputs.two_scale.d2 - 500.0 * sin_th).abs() < 1e-12);
        assert_eq!(inputs.two_scale.c1, 0.0);
        assert_eq!(inputs.two_scale.c2, 0.0);
        assert!((inputs.gamma_bar - 10.0).abs() < 1e-15);
        // delta = sin(theta / 2) at both ends, 0.0005 to ten digits.
        assert!((inputs.overlaps.delta0 - 0.0005).abs() < 1e-9);
        assert!((inputs.overlaps.delta1 - 0.0005).abs() < 1e-9);
    }

    #[test]
    fn zero_tilt_bound_inputs_vanish() {
        let model = TongModel {
            theta: 0.0,
            omega: 10.0,
            omega0: -10.0,
        };
        let inputs = model.bound_inputs().unwrap();
        assert_eq!(inputs.two_scale.d1, 0.0);
        assert_eq!(inputs.two_scale.d2, 0.0);
        assert_eq!(inputs.overlaps.delta0, 0.0);
        assert_eq!(inputs.overlaps.delta1, 0.0);
    }

    #[test]
    fn planar_equivalent_geometry() {
        let model = TongModel::default();
        let provider = model.planar_equivalent().unwrap();
        let p0 = provider(0.0).unwrap();
        // field magnitude = half the residual detuning
        let detuning = 10.0 - 10.0 * 0.001f64.cos();
        assert!((p0.a.hypot(p0.b) - detuning / 2.0).abs() < 1e-15);
        // rotation rate = omega sin theta
        let rate = 10.0 * 0.001f64.sin();
        let p = provider(0.7).unwrap();
        let theta_dot = (p.a_dot * p.b - p.a * p.b_dot) / (p.a * p.a + p.b * p.b);
        assert!((theta_dot - rate).abs() < 1e-9);
    }
}
