//! Time-dependent Hamiltonians and the numeric extraction of bound inputs.
//!
//! A [`HamiltonianSchedule`] is a drift `H(s)` on normalized time s in
//! [0, 1]; a [`NoiseProcess`] is a perturbation `H_noise(t)` on physical
//! time t (microseconds). Their combination `H(s) + H_noise(s tau)` is what
//! an evolution of total duration tau actually follows.
//!
//! Sampled suprema carry a 1.01 safety factor since a finite grid can miss
//! the true extremum; analytic derivative evaluators are cross-checked
//! against centered finite differences at construction.

use std::sync::Arc;

use crate::bounds::{
    DerivativeBounds, EndpointOverlaps, OverlapSource, TabulatedBounds, TwoScaleBounds,
};
use crate::error::{Error, Result};
use crate::noise::SUP_SAFETY_FACTOR;
use crate::spectral::{
    eigendecompose, gap_profile, operator_two_norm, projector_distance, subspace_projector,
    GapProfile, HermitianOperator, SpectralData,
};

type OperatorFn = Arc<dyn Fn(f64) -> HermitianOperator + Send + Sync>;

/// Default centered finite-difference step in s.
pub const FD_STEP: f64 = 1e-5;

/// A drift Hamiltonian H(s), with optional analytic s-derivatives.
#[derive(Clone)]
pub struct HamiltonianSchedule {
    dim: usize,
    eval: OperatorFn,
    d1: Option<OperatorFn>,
    d2: Option<OperatorFn>,
    fd_step: f64,
}

impl HamiltonianSchedule {
    pub fn new(dim: usize, eval: OperatorFn) -> Result<Self> {
        let schedule = Self {
            dim,
            eval,
            d1: None,
            d2: None,
            fd_step: FD_STEP,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn with_derivatives(
        dim: usize,
        eval: OperatorFn,
        d1: OperatorFn,
        d2: OperatorFn,
    ) -> Result<Self> {
        let schedule = Self {
            dim,
            eval,
            d1: Some(d1),
            d2: Some(d2),
            fd_step: FD_STEP,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.d1.is_some()
    }

    pub fn hamiltonian(&self, s: f64) -> HermitianOperator {
        (self.eval)(s)
    }

    pub fn d1(&self, s: f64) -> HermitianOperator {
        match &self.d1 {
            Some(f) => f(s),
            None => self.fd_first(s),
        }
    }

    pub fn d2(&self, s: f64) -> HermitianOperator {
        match &self.d2 {
            Some(f) => f(s),
            None => self.fd_second(s),
        }
    }

    fn fd_first(&self, s: f64) -> HermitianOperator {
        let h = self.fd_step;
        let hi = self.hamiltonian(s + h);
        let lo = self.hamiltonian(s - h);
        let m = hi.mat().sub(lo.mat()).scale((0.5 / h).into());
        HermitianOperator::new(m).expect("centered difference of Hermitian operators")
    }

    fn fd_second(&self, s: f64) -> HermitianOperator {
        // Larger step than the first difference: the double division by h
        // amplifies rounding in the operator entries.
        let h = self.fd_step.sqrt() * 1e-2;
        let hi = self.hamiltonian(s + h);
        let mid = self.hamiltonian(s);
        let lo = self.hamiltonian(s - h);
        let m = hi
            .mat()
            .add(lo.mat())
            .sub(&mid.mat().scale(2.0.into()))
            .scale((1.0 / (h * h)).into());
        HermitianOperator::new(m).expect("centered difference of Hermitian operators")
    }

    /// Hermiticity at sampled points is enforced by the operator type; what
    /// remains is consistency of any analytic derivatives with centered
    /// finite differences at 11 Chebyshev-distributed interior points.
    fn validate(&self) -> Result<()> {
        let nodes: Vec<f64> = (0..11)
            .map(|k| 0.5 * (1.0 + ((2 * k + 1) as f64 * std::f64::consts::PI / 22.0).cos()))
            .collect();
        for &s in &nodes {
            let h = self.hamiltonian(s);
            if h.dim() != self.dim {
                return Err(Error::Dimension {
                    expected: self.dim,
                    got: h.dim(),
                });
            }
            if !h.mat().is_finite() {
                return Err(Error::NonFiniteEvaluation {
                    variable: "s",
                    at: s,
                });
            }
        }
        if let Some(d1) = &self.d1 {
            for &s in &nodes {
                let analytic = d1(s);
                let fd = self.fd_first(s);
                let diff = operator_two_norm(&analytic.mat().sub(fd.mat()));
                let scale = operator_two_norm(analytic.mat());
                let h_scale = operator_two_norm(self.hamiltonian(s).mat());
                let tol = (1e-6f64)
                    .max(1e-4 * scale)
                    .max(10.0 * f64::EPSILON * h_scale / self.fd_step);
                if diff > tol {
                    return Err(Error::InvalidArgument(format!(
                        "analytic first derivative disagrees with finite difference at s = {s}: |diff| = {diff:.3e} > {tol:.3e}"
                    )));
                }
            }
        }
        if let Some(d2) = &self.d2 {
            let h2 = self.fd_step.sqrt() * 1e-2;
            for &s in &nodes {
                let analytic = d2(s);
                let fd = self.fd_second(s);
                let diff = operator_two_norm(&analytic.mat().sub(fd.mat()));
                let scale = operator_two_norm(analytic.mat());
                let h_scale = operator_two_norm(self.hamiltonian(s).mat());
                let tol = (1e-6f64)
                    .max(1e-4 * scale)
                    .max(100.0 * f64::EPSILON * h_scale / (h2 * h2));
                if diff > tol {
                    return Err(Error::InvalidArgument(format!(
                        "analytic second derivative disagrees with finite difference at s = {s}: |diff| = {diff:.3e} > {tol:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A noise Hamiltonian H_noise(t) with analytic time derivatives.
#[derive(Clone)]
pub struct NoiseProcess {
    dim: usize,
    eval: OperatorFn,
    d1: OperatorFn,
    d2: OperatorFn,
    /// Lowest frequency present, used to size calibration windows.
    min_frequency: Option<f64>,
}

impl NoiseProcess {
    pub fn new(
        dim: usize,
        eval: OperatorFn,
        d1: OperatorFn,
        d2: OperatorFn,
        min_frequency: Option<f64>,
    ) -> Result<Self> {
        let process = Self {
            dim,
            eval,
            d1,
            d2,
            min_frequency,
        };
        process.validate()?;
        Ok(process)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn min_frequency(&self) -> Option<f64> {
        self.min_frequency
    }

    pub fn hamiltonian(&self, t: f64) -> HermitianOperator {
        (self.eval)(t)
    }

    pub fn d1(&self, t: f64) -> HermitianOperator {
        (self.d1)(t)
    }

    pub fn d2(&self, t: f64) -> HermitianOperator {
        (self.d2)(t)
    }

    fn validate(&self) -> Result<()> {
        // Probe over one long-wavelength period (or unit time without a
        // declared spectrum) with the same derivative consistency rule as
        // the drift.
        let span = self.min_frequency.map(|f| 1.0 / f).unwrap_or(1.0);
        let h = span * 1e-6;
        for k in 0..7 {
            let t = span * (0.05 + 0.15 * k as f64);
            let op = self.hamiltonian(t);
            if op.dim() != self.dim {
                return Err(Error::Dimension {
                    expected: self.dim,
                    got: op.dim(),
                });
            }
            let fd = self
                .hamiltonian(t + h)
                .mat()
                .sub(self.hamiltonian(t - h).mat())
                .scale((0.5 / h).into());
            let analytic = self.d1(t);
            let diff = operator_two_norm(&analytic.mat().sub(&fd));
            let scale = operator_two_norm(analytic.mat());
            let op_scale = operator_two_norm(op.mat());
            let tol = (1e-6f64)
                .max(1e-4 * scale)
                .max(10.0 * f64::EPSILON * op_scale / h);
            if diff > tol {
                return Err(Error::InvalidArgument(format!(
                    "noise derivative disagrees with finite difference at t = {t}: |diff| = {diff:.3e} > {tol:.3e}"
                )));
            }
        }
        Ok(())
    }
}

/// Uniform grid of n points covering [0, 1].
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 101 {
        return Err(Error::InvalidArgument(format!(
            "grid must have at least 101 points, got {}",
            grid.len()
        )));
    }
    let first = *grid.first().unwrap();
    let last = *grid.last().unwrap();
    if first.abs() > 1e-9 || (last - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(
            "grid must cover [0, 1] endpoint to endpoint".into(),
        ));
    }
    Ok(())
}

/// Sampled sup-norm bounds b1 >= |H'(s)|, b2 >= |H''(s)| over the grid,
/// safety factor included, with the per-point tabulation retained for the
/// integral-form bound.
pub fn derivative_norm_bounds(
    schedule: &HamiltonianSchedule,
    grid: &[f64],
) -> Result<DerivativeBounds> {
    check_grid(grid)?;
    let mut tab_b1 = Vec::with_capacity(grid.len());
    let mut tab_b2 = Vec::with_capacity(grid.len());
    for &s in grid {
        let n1 = operator_two_norm(schedule.d1(s).mat());
        let n2 = operator_two_norm(schedule.d2(s).mat());
        if !n1.is_finite() || !n2.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                variable: "s",
                at: s,
            });
        }
        tab_b1.push(n1 * SUP_SAFETY_FACTOR);
        tab_b2.push(n2 * SUP_SAFETY_FACTOR);
    }
    let b1 = tab_b1.iter().cloned().fold(0.0, f64::max);
    let b2 = tab_b2.iter().cloned().fold(0.0, f64::max);
    Ok(DerivativeBounds {
        b1,
        b2,
        tabulated: Some(TabulatedBounds {
            s: grid.to_vec(),
            b1: tab_b1,
            b2: tab_b2,
        }),
    })
}

/// Split derivative bounds: c's from the drift on the s-grid, d's from the
/// noise sampled over a window much longer than its slowest component.
pub fn two_scale_bounds(
    drift: &HamiltonianSchedule,
    noise: &NoiseProcess,
    t_window: f64,
    s_grid: &[f64],
    t_samples: usize,
) -> Result<TwoScaleBounds> {
    if let Some(nu_min) = noise.min_frequency() {
        let required = 10.0 / nu_min;
        if t_window < required {
            return Err(Error::WindowTooShort {
                required,
                got: t_window,
            });
        }
    }
    if t_samples < 2 {
        return Err(Error::InvalidArgument(
            "need at least 2 time samples".into(),
        ));
    }
    let drift_bounds = derivative_norm_bounds(drift, s_grid)?;

    let dt = t_window / (t_samples - 1) as f64;
    let mut d1 = 0.0f64;
    let mut d2 = 0.0f64;
    for k in 0..t_samples {
        let t = k as f64 * dt;
        let n1 = operator_two_norm(noise.d1(t).mat());
        let n2 = operator_two_norm(noise.d2(t).mat());
        if !n1.is_finite() || !n2.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                variable: "t",
                at: t,
            });
        }
        d1 = d1.max(n1);
        d2 = d2.max(n2);
    }
    TwoScaleBounds::new(
        drift_bounds.b1,
        drift_bounds.b2,
        d1 * SUP_SAFETY_FACTOR,
        d2 * SUP_SAFETY_FACTOR,
    )
}

fn spectra_on_grid(
    drift: &HamiltonianSchedule,
    noise: Option<&NoiseProcess>,
    tau: f64,
    grid: &[f64],
) -> Result<Vec<SpectralData>> {
    grid.iter()
        .map(|&s| {
            let mut h = drift.hamiltonian(s);
            if let Some(np) = noise {
                h = h.add(&np.hamiltonian(s * tau))?;
            }
            eigendecompose(&h)
        })
        .collect()
}

/// Ground-band gap profile of the combined Hamiltonian H(s) + H_noise(s tau).
pub fn combined_gap_profile(
    drift: &HamiltonianSchedule,
    noise: Option<&NoiseProcess>,
    tau: f64,
    grid: &[f64],
) -> Result<GapProfile> {
    check_grid(grid)?;
    let spectra = spectra_on_grid(drift, noise, tau, grid)?;
    gap_profile(grid, &spectra, 0, 0)
}

/// Gap profile of the drift alone for an arbitrary tracked band.
pub fn drift_gap_profile(
    drift: &HamiltonianSchedule,
    grid: &[f64],
    m: usize,
    n: usize,
) -> Result<GapProfile> {
    check_grid(grid)?;
    let spectra = spectra_on_grid(drift, None, 1.0, grid)?;
    gap_profile(grid, &spectra, m, n)
}

fn ground_projector(h: &HermitianOperator) -> Result<(SpectralData, crate::spectral::Projector)> {
    let spec = eigendecompose(h)?;
    let gap = spec.eigenvalues[1] - spec.eigenvalues[0];
    let scale = spec
        .eigenvalues
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    if gap <= 1e-12 * scale {
        return Err(Error::DegenerateSpectrum {
            context: format!("ground state degenerate (gap {gap:.3e})"),
        });
    }
    let p = subspace_projector(&spec, 0, 0)?;
    Ok((spec, p))
}

/// Exact endpoint overlaps: the two-norm distance between the ground
/// projectors of the combined and intended Hamiltonians at s = 0 and s = 1.
pub fn endpoint_overlaps(
    drift: &HamiltonianSchedule,
    noise: &NoiseProcess,
    tau: f64,
) -> Result<EndpointOverlaps> {
    let mut deltas = [0.0f64; 2];
    for (slot, &s) in [0.0f64, 1.0].iter().enumerate() {
        let intended = drift.hamiltonian(s);
        let combined = intended.add(&noise.hamiltonian(s * tau))?;
        let (_, p_int) = ground_projector(&intended)?;
        let (_, p_com) = ground_projector(&combined)?;
        deltas[slot] = projector_distance(&p_int, &p_com)?;
    }
    EndpointOverlaps::new(deltas[0], deltas[1], OverlapSource::ExactProjector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::CMat;

    fn constant_schedule(z: f64) -> HamiltonianSchedule {
        HamiltonianSchedule::new(
            2,
            Arc::new(move |_s| HermitianOperator::from_pauli(0.0, 0.0, z, 0.0)),
        )
        .unwrap()
    }

    fn cosine_schedule() -> HamiltonianSchedule {
        // H(s) = cos(s) sigma_z with analytic derivatives.
        HamiltonianSchedule::with_derivatives(
            2,
            Arc::new(|s: f64| HermitianOperator::from_pauli(0.0, 0.0, s.cos(), 0.0)),
            Arc::new(|s: f64| HermitianOperator::from_pauli(0.0, 0.0, -s.sin(), 0.0)),
            Arc::new(|s: f64| HermitianOperator::from_pauli(0.0, 0.0, -s.cos(), 0.0)),
        )
        .unwrap()
    }

    #[test]
    fn constant_schedule_has_zero_bounds() {
        let grid = uniform_grid(101);
        let b = derivative_norm_bounds(&constant_schedule(1.0), &grid).unwrap();
        assert_eq!(b.b1, 0.0);
        assert_eq!(b.b2, 0.0);
    }

    #[test]
    fn cosine_schedule_bounds_match_analytic_suprema() {
        let grid = uniform_grid(1001);
        let b = derivative_norm_bounds(&cosine_schedule(), &grid).unwrap();
        // sup |sin| on [0, 1] = sin(1), sup |cos| = 1; both tagged with the
        // safety factor.
        assert!((b.b1 - 1.0f64.sin() * SUP_SAFETY_FACTOR).abs() < 1e-4);
        assert!((b.b2 - 1.0 * SUP_SAFETY_FACTOR).abs() < 1e-4);
    }

    #[test]
    fn bad_analytic_derivative_rejected() {
        let result = HamiltonianSchedule::with_derivatives(
            2,
            Arc::new(|s: f64| HermitianOperator::from_pauli(0.0, 0.0, s.cos(), 0.0)),
            // wrong sign
            Arc::new(|s: f64| HermitianOperator::from_pauli(0.0, 0.0, s.sin(), 0.0)),
            Arc::new(|s: f64| HermitianOperator::from_pauli(0.0, 0.0, -s.cos(), 0.0)),
        );
        assert!(result.is_err());
    }

    #[test]
    fn refinement_never_shrinks_bounds() {
        let coarse = derivative_norm_bounds(&cosine_schedule(), &uniform_grid(101)).unwrap();
        let fine = derivative_norm_bounds(&cosine_schedule(), &uniform_grid(401)).unwrap();
        assert!(fine.b1 >= coarse.b1 - 1e-15);
        assert!(fine.b2 >= coarse.b2 - 1e-15);
    }

    #[test]
    fn short_grid_rejected() {
        let grid = uniform_grid(50);
        assert!(derivative_norm_bounds(&constant_schedule(1.0), &grid).is_err());
    }

    fn cosine_noise(amp: f64, nu: f64) -> NoiseProcess {
        let om = std::f64::consts::TAU * nu;
        NoiseProcess::new(
            2,
            Arc::new(move |t: f64| {
                HermitianOperator::from_pauli(0.0, 0.0, amp * (om * t).cos(), 0.0)
            }),
            Arc::new(move |t: f64| {
                HermitianOperator::from_pauli(0.0, 0.0, -amp * om * (om * t).sin(), 0.0)
            }),
            Arc::new(move |t: f64| {
                HermitianOperator::from_pauli(0.0, 0.0, -amp * om * om * (om * t).cos(), 0.0)
            }),
            Some(nu),
        )
        .unwrap()
    }

    #[test]
    fn single_cosine_noise_two_scale_bounds() {
        let amp = 0.3;
        let nu = 2.0;
        let noise = cosine_noise(amp, nu);
        let drift = cosine_schedule();
        let ts = two_scale_bounds(&drift, &noise, 10.0, &uniform_grid(501), 40_000).unwrap();
        let om = std::f64::consts::TAU * nu;
        assert!((ts.d1 - amp * om * SUP_SAFETY_FACTOR).abs() / (amp * om) < 2e-2);
        assert!((ts.d2 - amp * om * om * SUP_SAFETY_FACTOR).abs() / (amp * om * om) < 2e-2);
        assert!(ts.d1 <= amp * om * SUP_SAFETY_FACTOR * (1.0 + 1e-12));
        assert!(ts.d2 <= amp * om * om * SUP_SAFETY_FACTOR * (1.0 + 1e-12));
    }

    #[test]
    fn zero_noise_gives_zero_d() {
        let noise = cosine_noise(0.0, 1.0);
        let drift = cosine_schedule();
        let ts = two_scale_bounds(&drift, &noise, 20.0, &uniform_grid(101), 1000).unwrap();
        assert_eq!(ts.d1, 0.0);
        assert_eq!(ts.d2, 0.0);
    }

    #[test]
    fn window_check_enforced() {
        let noise = cosine_noise(0.1, 0.5);
        let drift = cosine_schedule();
        assert!(matches!(
            two_scale_bounds(&drift, &noise, 1.0, &uniform_grid(101), 1000),
            Err(Error::WindowTooShort { .. })
        ));
    }

    #[test]
    fn combined_gap_respects_weyl_perturbation() {
        // Diagonal drift with a small sigma_x noise: the gap can shrink by
        // at most twice the noise norm.
        let drift = HamiltonianSchedule::new(
            2,
            Arc::new(|s: f64| HermitianOperator::from_pauli(0.0, 0.0, 1.0 + 0.5 * s, 0.0)),
        )
        .unwrap();
        let eps = 0.05;
        let noise = NoiseProcess::new(
            2,
            Arc::new(move |t: f64| {
                HermitianOperator::from_pauli(eps * (3.0 * t).cos(), 0.0, 0.0, 0.0)
            }),
            Arc::new(move |t: f64| {
                HermitianOperator::from_pauli(-3.0 * eps * (3.0 * t).sin(), 0.0, 0.0, 0.0)
            }),
            Arc::new(move |t: f64| {
                HermitianOperator::from_pauli(-9.0 * eps * (3.0 * t).cos(), 0.0, 0.0, 0.0)
            }),
            None,
        )
        .unwrap();
        let grid = uniform_grid(201);
        let plain = combined_gap_profile(&drift, None, 1.0, &grid).unwrap();
        let noisy = combined_gap_profile(&drift, Some(&noise), 3.0, &grid).unwrap();
        assert!(noisy.gamma_min >= plain.gamma_min - 2.0 * eps - 1e-12);
        for (g_noisy, g_plain) in noisy.gamma.iter().zip(&plain.gamma) {
            assert!((g_noisy - g_plain).abs() <= 2.0 * eps + 1e-12);
        }
    }

    #[test]
    fn endpoint_overlaps_zero_noise() {
        let drift = cosine_schedule();
        let zero = NoiseProcess::new(
            2,
            Arc::new(|_| HermitianOperator::new(CMat::zeros(2)).unwrap()),
            Arc::new(|_| HermitianOperator::new(CMat::zeros(2)).unwrap()),
            Arc::new(|_| HermitianOperator::new(CMat::zeros(2)).unwrap()),
            None,
        )
        .unwrap();
        let o = endpoint_overlaps(&drift, &zero, 5.0).unwrap();
        assert_eq!(o.delta0, 0.0);
        assert_eq!(o.delta1, 0.0);
        assert_eq!(o.source, OverlapSource::ExactProjector);
    }

    #[test]
    fn endpoint_overlap_of_tilted_field() {
        // Drift sigma_z, constant sigma_x noise of strength eps: the ground
        // state tilts by theta/2 with tan(theta) = eps / 1.
        let drift = constant_schedule(1.0);
        let eps = 0.02;
        let noise = NoiseProcess::new(
            2,
            Arc::new(move |_| HermitianOperator::from_pauli(eps, 0.0, 0.0, 0.0)),
            Arc::new(|_| HermitianOperator::new(CMat::zeros(2)).unwrap()),
            Arc::new(|_| HermitianOperator::new(CMat::zeros(2)).unwrap()),
            None,
        )
        .unwrap();
        let o = endpoint_overlaps(&drift, &noise, 1.0).unwrap();
        let theta = (eps / 1.0).atan();
        let expected = (theta / 2.0).sin();
        assert!((o.delta0 - expected).abs() < 1e-10);
        assert!((o.delta1 - expected).abs() < 1e-10);
    }

    #[test]
    fn fd_derivatives_available_without_analytic() {
        let s = 0.37;
        let drift = HamiltonianSchedule::new(
            2,
            Arc::new(|s: f64| HermitianOperator::from_pauli(s * s, 0.0, 1.0 - s, 0.0)),
        )
        .unwrap();
        let d1 = drift.d1(s);
        // dH/ds = 2s sigma_x - sigma_z
        let expect = HermitianOperator::from_pauli(2.0 * s, 0.0, -1.0, 0.0);
        assert!(operator_two_norm(&d1.mat().sub(expect.mat())) < 1e-6);
        let d2 = drift.d2(s);
        let expect2 = HermitianOperator::from_pauli(2.0, 0.0, 0.0, 0.0);
        assert!(operator_two_norm(&d2.mat().sub(expect2.mat())) < 1e-4);
    }

    #[test]
    fn noise_sample_times_see_min_frequency_span() {
        // A slow noise validated over its own wavelength: would fail the
        // derivative consistency check if probed only near t = 0 with a
        // span-unaware step.
        let noise = cosine_noise(1.0, 0.01);
        let s = noise.hamiltonian(30.0);
        assert!(s.mat().is_finite());
    }
}
