//! High-accuracy propagation of two-level evolutions.
//!
//! The workhorse is [`evolve_rotating_frame`]: the state is expanded in the
//! instantaneous eigenbasis of `a(t) sigma_x + b(t) sigma_z` with the gauge
//! fixed so the geometric phase vanishes, leaving amplitude equations
//!
//! ```text
//! c0' = -c1 e^{-2i Phi(t)} theta'(t) / 2
//! c1' = +c0 e^{+2i Phi(t)} theta'(t) / 2
//! ```
//!
//! with `Phi(t) = int_0^t sqrt(a^2 + b^2)` and `theta' = (a' b - a b') /
//! (a^2 + b^2)`. |c1| is then exactly the leaked amplitude, free of the
//! fast dynamical phases that make the raw Schroedinger equation expensive.
//! The integrator is an embedded Dormand-Prince 5(4) pair with PI step
//! control; the phase integral is never recomputed from scratch, only
//! extended from the last accepted step (rejected steps roll the cache
//! back).
//!
//! [`evolve_direct`] is the deliberately unsophisticated cross-check: a
//! product of midpoint-rule matrix exponentials in the fixed basis, usable
//! at small tau where the phases stay resolvable.

mod quad;

use num_complex::Complex64 as C64;

use crate::cmat::CMat;
use crate::error::{Error, Result};
use crate::schedule::HamiltonianSchedule;
use crate::spectral::{operator_two_norm, HermitianOperator, Projector};

/// Planar field coefficients and their time derivatives at one instant.
#[derive(Clone, Copy, Debug)]
pub struct AbPoint {
    pub a: f64,
    pub b: f64,
    pub a_dot: f64,
    pub b_dot: f64,
}

impl AbPoint {
    fn gap_half(&self) -> f64 {
        self.a.hypot(self.b)
    }

    fn theta_dot(&self) -> f64 {
        let r2 = self.a * self.a + self.b * self.b;
        (self.a_dot * self.b - self.a * self.b_dot) / r2
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest step the controller may take (microseconds).
    pub max_step: f64,
    /// Starting step; 0 picks tau / 1000.
    pub initial_step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            initial_step: 0.0,
        }
    }
}

impl IntegratorConfig {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "integrator tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TrajectorySample {
    pub t: f64,
    pub c0: C64,
    pub c1: C64,
}

/// Rotating-frame amplitudes along the evolution, with diagnostics.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub final_error: f64,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

impl Trajectory {
    /// |c1| at the sample nearest to the requested time.
    pub fn error_at(&self, t: f64) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        for s in &self.samples {
            let d = (s.t - t).abs();
            if d < best.0 {
                best = (d, s.c1.norm());
            }
        }
        best.1
    }
}

/// Monotone checkpoint table for Phi(t); quadrature only ever runs forward
/// from the latest committed or memoized point.
struct PhaseCache {
    anchor_t: f64,
    anchor_phi: f64,
    /// Values computed inside the step currently being attempted. Dropped
    /// on rejection, promoted on acceptance.
    trial: Vec<(f64, f64)>,
    checkpoints: Vec<(f64, f64)>,
}

impl PhaseCache {
    fn new() -> Self {
        Self {
            anchor_t: 0.0,
            anchor_phi: 0.0,
            trial: Vec::new(),
            checkpoints: vec![(0.0, 0.0)],
        }
    }

    fn query(&mut self, t: f64, gap: &mut impl FnMut(f64) -> f64) -> f64 {
        // Start from the latest known point not past t.
        let (mut t0, mut phi0) = (self.anchor_t, self.anchor_phi);
        for &(tt, pp) in &self.trial {
            if tt <= t && tt > t0 {
                t0 = tt;
                phi0 = pp;
            }
        }
        if t == t0 {
            return phi0;
        }
        debug_assert!(t > self.anchor_t);
        let phi = phi0 + quad::integrate(gap, t0, t, 1e-12);
        self.trial.push((t, phi));
        phi
    }

    fn commit(&mut self, t: f64, gap: &mut impl FnMut(f64) -> f64) {
        let phi = self.query(t, gap);
        self.anchor_t = t;
        self.anchor_phi = phi;
        self.trial.clear();
        self.checkpoints.push((t, phi));
    }

    fn reject(&mut self) {
        self.trial.clear();
    }
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

type State = [C64; 2];

/// Integrate the rotating-frame amplitude equations over [0, tau] starting
/// from the tracked eigenstate (c0, c1) = (1, 0).
pub fn evolve_rotating_frame(
    provider: impl Fn(f64) -> Result<AbPoint>,
    tau: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    config.validate()?;
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tau must be positive, got {tau}"
        )));
    }

    let point_at = |t: f64| -> Result<AbPoint> {
        let p = provider(t)?;
        let gap = p.gap_half();
        if !gap.is_finite() || gap == 0.0 {
            return Err(Error::DegenerateSpectrum {
                context: format!("field vanishes at t = {t}"),
            });
        }
        Ok(p)
    };

    let mut cache = PhaseCache::new();
    let mut y: State = [C64::ONE, C64::ZERO];
    let mut t = 0.0f64;
    let mut h = if config.initial_step > 0.0 {
        config.initial_step
    } else {
        tau / 1000.0
    }
    .min(config.max_step)
    .min(tau);

    let mut samples = vec![TrajectorySample {
        t: 0.0,
        c0: y[0],
        c1: y[1],
    }];
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut err_prev = 1e-4f64;

    // RHS evaluation; the borrow of the cache is threaded manually because
    // the quadrature needs its own provider calls.
    let rhs = |t: f64, y: &State, cache: &mut PhaseCache| -> Result<State> {
        let p = point_at(t)?;
        let mut gap_fn = |w: f64| point_at(w).map(|q| q.gap_half()).unwrap_or(f64::NAN);
        let phi = cache.query(t, &mut gap_fn);
        if !phi.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                variable: "t",
                at: t,
            });
        }
        let k = p.theta_dot() / 2.0;
        let rot = C64::from_polar(1.0, 2.0 * phi);
        Ok([-y[1] * rot.conj() * k, y[0] * rot * k])
    };

    while t < tau {
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::IntegrationFailure {
                t,
                reason: "step size underflow (stiffness?)".into(),
                accepted,
                rejected,
            });
        }
        if t + h > tau {
            h = tau - t;
        }

        let mut k: [State; 7] = [[C64::ZERO; 2]; 7];
        k[0] = rhs(t, &y, &mut cache)?;
        for stage in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = DP_A[stage - 1][j];
                if a != 0.0 {
                    ys[0] += kj[0] * (a * h);
                    ys[1] += kj[1] * (a * h);
                }
            }
            k[stage] = rhs(t + DP_C[stage] * h, &ys, &mut cache)?;
        }

        let mut y5 = y;
        let mut err_vec = [C64::ZERO; 2];
        for (j, kj) in k.iter().enumerate() {
            y5[0] += kj[0] * (DP_B5[j] * h);
            y5[1] += kj[1] * (DP_B5[j] * h);
            let diff = DP_B5[j] - DP_B4[j];
            err_vec[0] += kj[0] * (diff * h);
            err_vec[1] += kj[1] * (diff * h);
        }

        let mut err = 0.0f64;
        for i in 0..2 {
            let scale = config.abs_tol + config.rel_tol * y[i].norm().max(y5[i].norm());
            let e = err_vec[i].norm() / scale;
            err += e * e;
        }
        err = (err / 2.0).sqrt();

        if err <= 1.0 {
            let t_next = t + h;
            let mut gap_fn = |w: f64| point_at(w).map(|q| q.gap_half()).unwrap_or(f64::NAN);
            cache.commit(t_next, &mut gap_fn);
            t = t_next;
            y = y5;
            accepted += 1;
            samples.push(TrajectorySample {
                t,
                c0: y[0],
                c1: y[1],
            });

            let norm = y[0].norm_sqr() + y[1].norm_sqr();
            if (norm - 1.0).abs() > 1e-8 {
                return Err(Error::IntegrationFailure {
                    t,
                    reason: format!("normalization drifted to {norm}"),
                    accepted,
                    rejected,
                });
            }

            let fac = 0.9 * err.max(1e-10).powf(-0.14) * err_prev.powf(0.08);
            h = (h * fac.clamp(0.2, 5.0)).min(config.max_step);
            err_prev = err.max(1e-10);
        } else {
            cache.reject();
            rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }

    Ok(Trajectory {
        final_error: y[1].norm(),
        samples,
        steps_accepted: accepted,
        steps_rejected: rejected,
    })
}

/// exp(M) by scaling and squaring with a Taylor core; the callers keep
/// |M| small so the series converges to machine precision quickly.
fn expm(m: &CMat) -> CMat {
    let norm_est = m.frobenius_norm();
    let squarings = if norm_est > 0.25 {
        (norm_est / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m.scale(C64::new(1.0 / f64::powi(2.0, squarings as i32), 0.0));

    let mut result = CMat::identity(m.dim());
    let mut term = CMat::identity(m.dim());
    for order in 1..=16 {
        term = term.mul(&scaled).scale(C64::new(1.0 / order as f64, 0.0));
        result = result.add(&term);
    }
    for _ in 0..squarings {
        result = result.mul(&result);
    }
    result
}

/// Propagate over s in [0, 1] with a product of midpoint-rule exponentials
/// exp(-i tau H(s_mid) ds). Requires |H| tau / steps <= 0.01 so each factor
/// is a small rotation; returns the final unitary.
pub fn evolve_direct(schedule: &HamiltonianSchedule, tau: f64, steps: usize) -> Result<CMat> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be positive".into()));
    }
    // Sample |H| coarsely; the step criterion protects the product formula.
    let mut h_norm = 0.0f64;
    for i in 0..=100 {
        let s = i as f64 / 100.0;
        let n = operator_two_norm(schedule.hamiltonian(s).mat());
        if !n.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                variable: "s",
                at: s,
            });
        }
        h_norm = h_norm.max(n);
    }
    let per_step = h_norm * tau / steps as f64;
    // negated form so a NaN criterion is rejected too
    if !(per_step <= 0.01) {
        return Err(Error::StepCriterion {
            got: per_step,
            limit: 0.01,
        });
    }

    let ds = 1.0 / steps as f64;
    let mut u = CMat::identity(schedule.dim());
    for i in 0..steps {
        let s_mid = (i as f64 + 0.5) * ds;
        let h = schedule.hamiltonian(s_mid);
        let gen = h.mat().scale(C64::new(0.0, -tau * ds));
        u = expm(&gen).mul(&u);
    }

    let unitarity = operator_two_norm(&u.adjoint().mul(&u).sub(&CMat::identity(u.dim())));
    if !(unitarity <= 1e-9) {
        return Err(Error::IntegrationFailure {
            t: tau,
            reason: format!("propagator lost unitarity: {unitarity:.3e}"),
            accepted: steps,
            rejected: 0,
        });
    }
    Ok(u)
}

/// |Q_final U P_0|: the amplitude leaked out of the tracked subspace.
pub fn adiabatic_error_operator_norm(u: &CMat, p0: &Projector, q_final: &Projector) -> Result<f64> {
    if u.dim() != p0.dim() || u.dim() != q_final.dim() {
        return Err(Error::Dimension {
            expected: u.dim(),
            got: p0.dim().min(q_final.dim()),
        });
    }
    Ok(operator_two_norm(&q_final.mat().mul(u).mul(p0.mat())))
}

/// Pauli coordinates of a two-level Hermitian operator.
fn pauli_coords(h: &HermitianOperator) -> (f64, f64, f64, f64) {
    let m = h.mat();
    let x = m[(0, 1)].re;
    let y = -m[(0, 1)].im;
    let z = (m[(0, 0)].re - m[(1, 1)].re) / 2.0;
    let id = (m[(0, 0)].re + m[(1, 1)].re) / 2.0;
    (x, y, z, id)
}

/// Augment a drift with the counter-adiabatic term (i/tau)[P'(s), P(s)],
/// the perturbation under which the tracked ground subspace is followed
/// exactly. The perturbation scales as 1/tau, so it vanishes for slow
/// sweeps. Two-level drifts get the analytic construction; larger systems
/// use finite-difference projectors.
pub fn counter_adiabatic_schedule(
    drift: &HamiltonianSchedule,
    tau: f64,
) -> Result<HamiltonianSchedule> {
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tau must be positive, got {tau}"
        )));
    }
    let dim = drift.dim();
    if dim == 2 {
        let drift_h = drift.clone();
        let drift_d = drift.clone();
        let eval = std::sync::Arc::new(move |s: f64| {
            let h = drift_h.hamiltonian(s);
            let dh = drift_d.d1(s);
            let (x, y, z, _) = pauli_coords(&h);
            let (dx, dy, dz, _) = pauli_coords(&dh);
            let v = [x, y, z];
            let dv = [dx, dy, dz];
            let r2 = v.iter().map(|c| c * c).sum::<f64>();
            if r2 == 0.0 {
                // Degenerate point; the counter-adiabatic term is undefined.
                // Surfaced as NaN entries so the Hermiticity gate trips, but
                // physical schedules are expected to keep a finite gap.
                return HermitianOperator::from_pauli(f64::NAN, f64::NAN, f64::NAN, 0.0);
            }
            let r = r2.sqrt();
            // d(v/r)/ds = dv/r - v (v . dv) / r^3
            let vdotdv = v[0] * dv[0] + v[1] * dv[1] + v[2] * dv[2];
            let du = [
                dv[0] / r - v[0] * vdotdv / (r2 * r),
                dv[1] / r - v[1] * vdotdv / (r2 * r),
                dv[2] / r - v[2] * vdotdv / (r2 * r),
            ];
            let u = [v[0] / r, v[1] / r, v[2] / r];
            // (i/tau)[P', P] = -(1/(2 tau)) (du x u) . sigma
            let cross = [
                du[1] * u[2] - du[2] * u[1],
                du[2] * u[0] - du[0] * u[2],
                du[0] * u[1] - du[1] * u[0],
            ];
            let f = -1.0 / (2.0 * tau);
            let cd = HermitianOperator::from_pauli(f * cross[0], f * cross[1], f * cross[2], 0.0);
            h.add(&cd).expect("dimensions match")
        });
        return HamiltonianSchedule::new(2, eval);
    }

    // General case: finite-difference ground projectors.
    let drift_fd = drift.clone();
    let fd = 1e-6;
    let eval = std::sync::Arc::new(move |s: f64| {
        let ground = |s: f64| -> Projector {
            let spec = crate::spectral::eigendecompose(&drift_fd.hamiltonian(s))
                .expect("drift must stay Hermitian");
            crate::spectral::subspace_projector(&spec, 0, 0).expect("ground projector")
        };
        let p = ground(s);
        let p_dot = ground(s + fd)
            .mat()
            .sub(ground(s - fd).mat())
            .scale(C64::new(0.5 / fd, 0.0));
        let comm = p_dot.commutator(p.mat());
        let cd = comm.scale(C64::new(0.0, 1.0 / tau));
        // i[P', P] is Hermitian up to finite-difference rounding; fold the
        // residue away so the operator gate stays meaningful.
        let sym = CMat::from_fn(cd.dim(), |i, j| (cd[(i, j)] + cd[(j, i)].conj()) * 0.5);
        let h = drift_fd.hamiltonian(s);
        HermitianOperator::new(h.mat().add(&sym)).expect("symmetrized counter-adiabatic term")
    });
    HamiltonianSchedule::new(dim, eval)
}

/// Evolve `(field(s) + noise(s tau)) sigma_z` from a sigma_z eigenstate and
/// return the leaked amplitude, which vanishes because the perturbation
/// commutes with the tracked Hamiltonian at all times.
pub fn commuting_noise_check(
    field: impl Fn(f64) -> f64 + Send + Sync + 'static,
    noise: impl Fn(f64) -> f64 + Send + Sync + 'static,
    tau: f64,
    steps: usize,
) -> Result<f64> {
    scalar_noise_error(field, noise, NoiseAxis::Z, tau, steps)
}

/// Which Pauli axis carries the scalar noise in [`scalar_noise_error`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseAxis {
    Z,
    X,
}

/// Evolve `field(s) sigma_z + noise(s tau) sigma_axis` from the ground state
/// of the field term and return the final leaked amplitude relative to the
/// intended (noiseless) eigenstates.
pub fn scalar_noise_error(
    field: impl Fn(f64) -> f64 + Send + Sync + 'static,
    noise: impl Fn(f64) -> f64 + Send + Sync + 'static,
    axis: NoiseAxis,
    tau: f64,
    steps: usize,
) -> Result<f64> {
    let m0 = field(0.0);
    let m1 = field(1.0);
    if m0 == 0.0 || m1 == 0.0 {
        return Err(Error::DegenerateSpectrum {
            context: "field vanishes at an endpoint".into(),
        });
    }
    let schedule = HamiltonianSchedule::new(
        2,
        std::sync::Arc::new(move |s: f64| {
            let (x, z) = match axis {
                NoiseAxis::Z => (0.0, field(s) + noise(s * tau)),
                NoiseAxis::X => (noise(s * tau), field(s)),
            };
            HermitianOperator::from_pauli(x, 0.0, z, 0.0)
        }),
    )?;
    let u = evolve_direct(&schedule, tau, steps)?;

    let ground = |m: f64| -> Result<Projector> {
        let spec =
            crate::spectral::eigendecompose(&HermitianOperator::from_pauli(0.0, 0.0, m, 0.0))?;
        crate::spectral::subspace_projector(&spec, 0, 0)
    };
    let p0 = ground(m0)?;
    let q1 = ground(m1)?.complement();
    adiabatic_error_operator_norm(&u, &p0, &q1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::TongModel;
    use crate::schedule::uniform_grid;
    use crate::spectral::{eigendecompose, subspace_projector};
    use std::sync::Arc;

    #[test]
    fn static_field_stays_put() {
        let provider = |_t: f64| {
            Ok(AbPoint {
                a: 0.3,
                b: -1.1,
                a_dot: 0.0,
                b_dot: 0.0,
            })
        };
        let traj = evolve_rotating_frame(provider, 5.0, &IntegratorConfig::default()).unwrap();
        assert!(traj.final_error < 1e-14);
        assert!((traj.samples.last().unwrap().c0.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_field_rejected() {
        let provider = |_t: f64| {
            Ok(AbPoint {
                a: 0.0,
                b: 0.0,
                a_dot: 0.0,
                b_dot: 0.0,
            })
        };
        assert!(matches!(
            evolve_rotating_frame(provider, 1.0, &IntegratorConfig::default()),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn rotating_frame_matches_tong_oracle() {
        let model = TongModel::default();
        let provider = model.planar_equivalent().unwrap();
        let tau = 50.0;
        let traj = evolve_rotating_frame(provider, tau, &IntegratorConfig::default()).unwrap();
        for k in 1..=10 {
            let s = k as f64 / 10.0;
            let exact = model.exact_error(s * tau);
            // nearest-sample comparison is too coarse; integrate afresh to
            // each time instead
            let sub = evolve_rotating_frame(
                model.planar_equivalent().unwrap(),
                s * tau,
                &IntegratorConfig::default(),
            )
            .unwrap();
            assert!(
                (sub.final_error - exact).abs() < 1e-6,
                "s = {s}: {} vs {exact}",
                sub.final_error
            );
        }
        assert!(traj.steps_accepted > 0);
    }

    #[test]
    fn expm_of_pauli_rotation() {
        // exp(-i phi sigma_z) = diag(e^{-i phi}, e^{i phi})
        let phi = 0.7;
        let gen = CMat::pauli_z().scale(C64::new(0.0, -phi));
        let u = expm(&gen);
        assert!((u[(0, 0)] - C64::from_polar(1.0, -phi)).norm() < 1e-14);
        assert!((u[(1, 1)] - C64::from_polar(1.0, phi)).norm() < 1e-14);
        assert!(u[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn direct_identity_for_zero_hamiltonian() {
        let schedule = HamiltonianSchedule::new(
            2,
            Arc::new(|_| HermitianOperator::from_pauli(0.0, 0.0, 0.0, 0.0)),
        )
        .unwrap();
        let u = evolve_direct(&schedule, 1.0, 10).unwrap();
        assert!(u.sub(&CMat::identity(2)).max_abs_entry() < 1e-14);
    }

    #[test]
    fn direct_constant_sigma_z() {
        let schedule = HamiltonianSchedule::new(
            2,
            Arc::new(|_| HermitianOperator::from_pauli(0.0, 0.0, 1.0, 0.0)),
        )
        .unwrap();
        let u = evolve_direct(&schedule, 1.0, 200).unwrap();
        assert!((u[(0, 0)] - C64::from_polar(1.0, -1.0)).norm() < 1e-10);
        assert!((u[(1, 1)] - C64::from_polar(1.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn direct_rejects_nonfinite_hamiltonian() {
        let schedule = HamiltonianSchedule::new(
            2,
            Arc::new(|s: f64| {
                // poisoned halfway through the sweep
                let z = if s > 0.5 { f64::NAN } else { 1.0 };
                HermitianOperator::from_pauli(0.0, 0.0, z, 0.0)
            }),
        );
        // the schedule validator probes interior points and may reject
        // immediately; if it happens to miss the poisoned region, the
        // propagator must catch it instead
        if let Ok(schedule) = schedule {
            assert!(matches!(
                evolve_direct(&schedule, 0.001, 1000),
                Err(Error::NonFiniteEvaluation { .. })
            ));
        }
    }

    #[test]
    fn counter_adiabatic_degenerate_drift_fails_loudly() {
        // a drift with no field anywhere has no ground direction; the
        // counter-adiabatic construction must refuse it rather than hand
        // back NaN operators
        let drift = HamiltonianSchedule::new(
            2,
            Arc::new(|_s: f64| HermitianOperator::from_pauli(0.0, 0.0, 0.0, 0.0)),
        )
        .unwrap();
        assert!(counter_adiabatic_schedule(&drift, 1.0).is_err());
    }

    #[test]
    fn direct_step_criterion_enforced() {
        let schedule = HamiltonianSchedule::new(
            2,
            Arc::new(|_| HermitianOperator::from_pauli(0.0, 0.0, 10.0, 0.0)),
        )
        .unwrap();
        assert!(matches!(
            evolve_direct(&schedule, 1.0, 100),
            Err(Error::StepCriterion { .. })
        ));
    }

    #[test]
    fn direct_matches_tong_exact_unitary() {
        let model = TongModel::default();
        let tau = 2.0;
        let schedule =
            HamiltonianSchedule::new(2, Arc::new(move |s: f64| model.hamiltonian(s, tau))).unwrap();
        let u = evolve_direct(&schedule, tau, 8000).unwrap();
        let exact = model.exact_unitary(tau);
        assert!(operator_two_norm(&u.sub(&exact)) < 1e-8);
    }

    #[test]
    fn error_operator_examples() {
        let h = HermitianOperator::from_pauli(0.0, 0.0, 1.0, 0.0);
        let spec = eigendecompose(&h).unwrap();
        let p0 = subspace_projector(&spec, 0, 0).unwrap();
        let q = p0.complement();
        let err = adiabatic_error_operator_norm(&CMat::identity(2), &p0, &q).unwrap();
        assert!(err < 1e-15);
        // A full spin flip leaks everything.
        let err = adiabatic_error_operator_norm(&CMat::pauli_x(), &p0, &q).unwrap();
        assert!((err - 1.0).abs() < 1e-12);
    }

    #[test]
    fn counter_adiabatic_drives_perfectly() {
        // Fast linear sweep of a two-level drift; without the correction the
        // evolution is wildly nonadiabatic, with it the leak vanishes.
        let drift = HamiltonianSchedule::with_derivatives(
            2,
            Arc::new(|s: f64| HermitianOperator::from_pauli(-1.0, 0.0, 2.0 * s - 1.0, 0.0)),
            Arc::new(|_| HermitianOperator::from_pauli(0.0, 0.0, 2.0, 0.0)),
            Arc::new(|_| HermitianOperator::from_pauli(0.0, 0.0, 0.0, 0.0)),
        )
        .unwrap();
        let tau = 0.01;
        let augmented = counter_adiabatic_schedule(&drift, tau).unwrap();

        let ground_of = |s: f64| {
            let spec = eigendecompose(&drift.hamiltonian(s)).unwrap();
            subspace_projector(&spec, 0, 0).unwrap()
        };
        let u = evolve_direct(&augmented, tau, 60_000).unwrap();
        let err = adiabatic_error_operator_norm(&u, &ground_of(0.0), &ground_of(1.0).complement())
            .unwrap();
        assert!(err < 1e-6, "counter-adiabatic error {err}");

        let u_bare = evolve_direct(&drift, tau, 2_000).unwrap();
        let err_bare =
            adiabatic_error_operator_norm(&u_bare, &ground_of(0.0), &ground_of(1.0).complement())
                .unwrap();
        assert!(
            err_bare > 1e-2,
            "bare fast sweep should leak, got {err_bare}"
        );
    }

    #[test]
    fn counter_adiabatic_of_constant_drift_is_identity() {
        // P' = 0 for a static drift, so the augmentation changes nothing.
        let drift = HamiltonianSchedule::new(
            2,
            Arc::new(|_s: f64| HermitianOperator::from_pauli(-0.7, 0.0, 0.4, 0.0)),
        )
        .unwrap();
        let augmented = counter_adiabatic_schedule(&drift, 0.5).unwrap();
        for &s in &[0.0, 0.3, 1.0] {
            let diff = augmented
                .hamiltonian(s)
                .mat()
                .sub(drift.hamiltonian(s).mat());
            assert!(operator_two_norm(&diff) < 1e-12);
        }
    }

    #[test]
    fn counter_adiabatic_term_shrinks_with_tau() {
        let drift = HamiltonianSchedule::new(
            2,
            Arc::new(|s: f64| HermitianOperator::from_pauli(-1.0, 0.0, s, 0.0)),
        )
        .unwrap();
        let norm_at = |tau: f64| {
            let aug = counter_adiabatic_schedule(&drift, tau).unwrap();
            let diff = aug.hamiltonian(0.5).mat().sub(drift.hamiltonian(0.5).mat());
            operator_two_norm(&diff)
        };
        let n1 = norm_at(1.0);
        let n10 = norm_at(10.0);
        assert!((n1 / n10 - 10.0).abs() < 1e-6, "ratio {}", n1 / n10);
    }

    #[test]
    fn counter_adiabatic_matches_fd_route() {
        // The analytic two-level construction and the finite-difference
        // projector route must agree; exercise the latter through a dim > 2
        // embedding of the same physics is overkill, so compare directly by
        // rebuilding with the generic code path on the 2x2 drift.
        let drift = HamiltonianSchedule::new(
            2,
            Arc::new(|s: f64| HermitianOperator::from_pauli(-0.8, 0.0, s - 0.3, 0.0)),
        )
        .unwrap();
        let tau = 2.0;
        let analytic = counter_adiabatic_schedule(&drift, tau).unwrap();
        // FD route: same formula evaluated through projectors.
        let s = 0.45;
        let fd = 1e-6;
        let ground = |s: f64| {
            let spec = eigendecompose(&drift.hamiltonian(s)).unwrap();
            subspace_projector(&spec, 0, 0).unwrap()
        };
        let p_dot = ground(s + fd)
            .mat()
            .sub(ground(s - fd).mat())
            .scale(C64::new(0.5 / fd, 0.0));
        let comm = p_dot.commutator(ground(s).mat());
        let cd_fd = comm.scale(C64::new(0.0, 1.0 / tau));
        let cd_analytic = analytic
            .hamiltonian(s)
            .mat()
            .sub(drift.hamiltonian(s).mat());
        assert!(operator_two_norm(&cd_fd.sub(&cd_analytic)) < 1e-6);
    }

    #[test]
    fn commuting_noise_is_harmless() {
        let err = commuting_noise_check(|s| 1.0 + 0.5 * s, |t| 0.4 * (7.0 * t).cos(), 8.0, 20_000)
            .unwrap();
        assert!(err <= 1e-10, "commuting noise leaked {err}");
    }

    #[test]
    fn transverse_noise_is_not_harmless() {
        let err = scalar_noise_error(
            |_s| 1.0,
            |t| 0.2 * (2.0 * t).cos(),
            NoiseAxis::X,
            10.0,
            40_000,
        )
        .unwrap();
        assert!(
            err > 1e-4,
            "resonant transverse noise should leak, got {err}"
        );
    }

    #[test]
    fn zero_berry_phase_basis() {
        // The planar eigenbasis has identically vanishing Berry connection;
        // verify <phi_n | d/dt phi_n> = 0 by finite differences along the
        // flux-style coefficient path.
        let theta_of = |t: f64| 0.3 + 0.2 * t;
        let basis = |t: f64| crate::spectral::theta_basis(theta_of(t)).0;
        let h = 1e-6;
        for &t in &[0.0, 0.5, 2.0] {
            let up = basis(t + h);
            let dn = basis(t - h);
            let mid = basis(t);
            let overlap: C64 = mid
                .iter()
                .zip(up.iter().zip(dn.iter()))
                .map(|(m, (u, d))| m.conj() * (u - d) / (2.0 * h))
                .sum();
            assert!(overlap.norm() <= 1e-10);
        }
    }

    #[test]
    fn direct_multilevel_three_level() {
        // The direct propagator is dimension-agnostic; spot-check on a
        // 3-level constant Hamiltonian diag(0, 1, 2).
        let mut m = CMat::zeros(3);
        m[(1, 1)] = C64::new(1.0, 0.0);
        m[(2, 2)] = C64::new(2.0, 0.0);
        let h = HermitianOperator::new(m).unwrap();
        let schedule = HamiltonianSchedule::new(3, Arc::new(move |_| h.clone())).unwrap();
        let u = evolve_direct(&schedule, 0.5, 2000).unwrap();
        for (i, expect) in [(0usize, 0.0), (1, -0.5), (2, -1.0)] {
            assert!((u[(i, i)] - C64::from_polar(1.0, expect)).norm() < 1e-10);
        }
    }

    #[test]
    fn derivative_bound_inequality_on_models() {
        // |P'(s)| <= 2 D(s) b1(s) / gamma(s) pointwise, checked with
        // finite-difference projectors on a smooth two-level schedule.
        let drift = HamiltonianSchedule::new(
            2,
            Arc::new(|s: f64| {
                HermitianOperator::from_pauli((1.2 * s).cos(), 0.0, (0.7 * s).sin() - 0.5, 0.0)
            }),
        )
        .unwrap();
        let grid = uniform_grid(101);
        let fd = 1e-6;
        for &s in grid.iter().skip(1).take(99) {
            let ground = |s: f64| {
                let spec = eigendecompose(&drift.hamiltonian(s)).unwrap();
                subspace_projector(&spec, 0, 0).unwrap()
            };
            let p_dot = ground(s + fd)
                .mat()
                .sub(ground(s - fd).mat())
                .scale(C64::new(0.5 / fd, 0.0));
            let p_dot_norm = operator_two_norm(&p_dot);
            let spec = eigendecompose(&drift.hamiltonian(s)).unwrap();
            let gamma = spec.eigenvalues[1] - spec.eigenvalues[0];
            let b1 = operator_two_norm(drift.d1(s).mat());
            // ground band: D = 1
            assert!(
                p_dot_norm <= 2.0 * b1 / gamma + 1e-6,
                "s = {s}: |P'| = {p_dot_norm}, cap = {}",
                2.0 * b1 / gamma
            );
        }
    }
}
