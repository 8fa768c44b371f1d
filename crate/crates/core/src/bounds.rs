//! The bound engine: every theorem-grade error bound with its constants
//! written out, plus the perturbation estimates used for endpoint overlaps.
//!
//! All bounds share the same shape in the total evolution time tau:
//!
//! ```text
//! error <= A tau + B + C / tau + E
//! ```
//!
//! where the linear coefficient A comes from noise acting on the physical
//! time scale, the 1/tau coefficient C from the drift acting on normalized
//! time, B from cross terms, and E from endpoint subspace mismatch. Results
//! are clamped at 1 (the trivial norm bound for a projected unitary), with
//! the raw value retained for diagnostics.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral::GapProfile;

/// Sup-norm bounds on the first and second schedule derivatives, optionally
/// tabulated on a grid for the integral-form bound.
#[derive(Clone, Debug)]
pub struct DerivativeBounds {
    pub b1: f64,
    pub b2: f64,
    pub tabulated: Option<TabulatedBounds>,
}

#[derive(Clone, Debug)]
pub struct TabulatedBounds {
    pub s: Vec<f64>,
    pub b1: Vec<f64>,
    pub b2: Vec<f64>,
}

impl DerivativeBounds {
    pub fn constant(b1: f64, b2: f64) -> Self {
        Self {
            b1,
            b2,
            tabulated: None,
        }
    }
}

/// Derivative bounds split across the two time scales: `c1`, `c2` bound the
/// drift in s; `d1`, `d2` bound the noise in t (units MHz^2 and MHz^3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoScaleBounds {
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
}

impl TwoScaleBounds {
    pub fn new(c1: f64, c2: f64, d1: f64, d2: f64) -> Result<Self> {
        for (name, v) in [("c1", c1), ("c2", c2), ("d1", d1), ("d2", d2)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(Self { c1, c2, d1, d2 })
    }
}

/// How an endpoint overlap estimate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlapSource {
    /// Computed from the actual projectors (exact, the preferred route).
    ExactProjector,
    /// Eigenvector rotation bound using the perturbed ground energy.
    SinTheta,
    /// Eigenvector rotation bound using only the unperturbed gap.
    BauerFike,
    /// No perturbation at the endpoints.
    Zero,
}

/// delta_0 and delta_1: sines of the angles between the perturbed and
/// intended ground states at s = 0 and s = 1.
#[derive(Clone, Copy, Debug)]
pub struct EndpointOverlaps {
    pub delta0: f64,
    pub delta1: f64,
    pub source: OverlapSource,
}

impl EndpointOverlaps {
    pub fn new(delta0: f64, delta1: f64, source: OverlapSource) -> Result<Self> {
        for (name, v) in [("delta0", delta0), ("delta1", delta1)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(Self {
            delta0,
            delta1,
            source,
        })
    }

    pub fn zero() -> Self {
        Self {
            delta0: 0.0,
            delta1: 0.0,
            source: OverlapSource::Zero,
        }
    }

    /// delta_0 + delta_1 + delta_0 delta_1, the additive endpoint cost.
    pub fn endpoint_term(&self) -> f64 {
        self.delta0 + self.delta1 + self.delta0 * self.delta1
    }
}

/// Per-term breakdown of a bound: value(tau) = tau_linear_coeff * tau
/// + constant_term + inv_tau_coeff / tau + endpoint_term.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoundTerms {
    pub tau_linear_coeff: f64,
    pub constant_term: f64,
    pub inv_tau_coeff: f64,
    pub endpoint_term: f64,
}

impl BoundTerms {
    pub fn evaluate(&self, tau: f64) -> f64 {
        self.tau_linear_coeff * tau
            + self.constant_term
            + self.inv_tau_coeff / tau
            + self.endpoint_term
    }
}

/// A bound evaluated at a specific tau. `value` is clamped at 1; the
/// unclamped evaluation stays available as `raw_value`.
#[derive(Clone, Copy, Debug)]
pub struct BoundResult {
    pub value: f64,
    pub raw_value: f64,
    pub terms: BoundTerms,
    pub tau: f64,
}

impl BoundResult {
    fn assemble(terms: BoundTerms, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tau must be positive, got {tau}"
            )));
        }
        let raw = terms.evaluate(tau);
        Ok(Self {
            value: raw.min(1.0),
            raw_value: raw,
            terms,
            tau,
        })
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) {
        return Err(Error::GapClosure { s: f64::NAN, gamma });
    }
    Ok(())
}

/// Integral-form bound: boundary terms at 0 and `s_end` plus the trapezoid
/// integral of `(8 D^2 / (tau gamma^2)) (8 (1 + D) b1^2 / gamma + b2)`.
///
/// The profile grid is the quadrature grid; refinement is the caller's
/// responsibility and the quadrature error is O(h^2) in the grid spacing.
/// `s_end` must be a grid point.
pub fn at_bound_integral(
    profile: &GapProfile,
    b1: &[f64],
    b2: &[f64],
    tau: f64,
    s_end: f64,
) -> Result<BoundResult> {
    let n = profile.s.len();
    if b1.len() != n || b2.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: b1.len().min(b2.len()),
        });
    }
    if !(s_end > 0.0 && s_end <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "s_end must lie in (0, 1], got {s_end}"
        )));
    }
    let end_idx = profile
        .s
        .iter()
        .position(|&s| (s - s_end).abs() <= 1e-12)
        .ok_or_else(|| Error::InvalidArgument(format!("s_end = {s_end} is not a grid point")))?;
    if end_idx == 0 {
        return Err(Error::InvalidArgument(
            "s_end must be strictly after the first grid point".into(),
        ));
    }
    for (&g, &s) in profile.gamma.iter().zip(&profile.s) {
        if !(g > 0.0) {
            return Err(Error::GapClosure { s, gamma: g });
        }
    }

    let boundary = |i: usize| {
        8.0 * profile.d[i] * profile.d[i] * b1[i] / (tau * profile.gamma[i] * profile.gamma[i])
    };
    let integrand = |i: usize| {
        let g = profile.gamma[i];
        let d = profile.d[i];
        8.0 * d * d / (tau * g * g) * (8.0 * (1.0 + d) * b1[i] * b1[i] / g + b2[i])
    };

    let mut integral = 0.0;
    for i in 0..end_idx {
        let h = profile.s[i + 1] - profile.s[i];
        integral += 0.5 * h * (integrand(i) + integrand(i + 1));
    }

    let total = boundary(0) + boundary(end_idx) + integral;
    // The whole expression scales as 1/tau; report it through the breakdown.
    let terms = BoundTerms {
        inv_tau_coeff: total * tau,
        ..Default::default()
    };
    BoundResult::assemble(terms, tau)
}

/// Constant-gap bound `(8 D^2 / (tau gamma^2)) (2 b1 + s b2 + s 8 (1 + D)
/// b1^2 / gamma)`. For a nondegenerate ground state D = 1 and the last
/// factor becomes `16 b1^2 / gamma`.
pub fn at_bound_constant(
    b1: f64,
    b2: f64,
    gamma_bar: f64,
    d_bar: f64,
    tau: f64,
    s: f64,
) -> Result<BoundResult> {
    check_gamma(gamma_bar)?;
    if d_bar < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "D must be >= 1, got {d_bar}"
        )));
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "s must lie in (0, 1], got {s}"
        )));
    }
    let pre = 8.0 * d_bar * d_bar / (gamma_bar * gamma_bar);
    let inner = 2.0 * b1 + s * b2 + s * 8.0 * (1.0 + d_bar) * b1 * b1 / gamma_bar;
    let terms = BoundTerms {
        inv_tau_coeff: pre * inner,
        ..Default::default()
    };
    BoundResult::assemble(terms, tau)
}

/// Bound for an imperfect initial state `eta (|psi_0> + delta |perp>)`:
/// `|eta| (|delta| + constant-form bound)` with `eta^-2 = 1 + |delta|^2`.
pub fn at_initial_bound(
    delta: C64,
    b1: f64,
    b2: f64,
    gamma_bar: f64,
    tau: f64,
    s: f64,
) -> Result<BoundResult> {
    if !delta.is_finite() {
        return Err(Error::NonFiniteEvaluation {
            variable: "delta",
            at: f64::NAN,
        });
    }
    let base = at_bound_constant(b1, b2, gamma_bar, 1.0, tau, s)?;
    let eta = 1.0 / (1.0 + delta.norm_sqr()).sqrt();
    let terms = BoundTerms {
        inv_tau_coeff: eta * base.terms.inv_tau_coeff,
        endpoint_term: eta * delta.norm(),
        ..Default::default()
    };
    BoundResult::assemble(terms, tau)
}

/// Bound under a systematic Hamiltonian perturbation, measured against the
/// intended eigenstates: the constant-form bound built from the perturbed
/// system's derivative norms and gap, plus `delta_0 + delta_1 +
/// delta_0 delta_1` for the endpoint mismatch.
pub fn at_error_bound(
    b1: f64,
    b2: f64,
    gamma_eps: f64,
    overlaps: &EndpointOverlaps,
    tau: f64,
) -> Result<BoundResult> {
    let base = at_bound_constant(b1, b2, gamma_eps, 1.0, tau, 1.0)?;
    let terms = BoundTerms {
        inv_tau_coeff: base.terms.inv_tau_coeff,
        endpoint_term: overlaps.endpoint_term(),
        ..Default::default()
    };
    BoundResult::assemble(terms, tau)
}

/// Eigenvector rotation estimate `eps |Delta| / (lambda_1 - lambda_0^eps)`
/// using the perturbed ground energy; clamped to [0, 1].
pub fn sin_theta_delta(perturbation_norm: f64, gap_to_perturbed_ground: f64) -> Result<f64> {
    if perturbation_norm < 0.0 {
        return Err(Error::InvalidArgument(
            "perturbation norm must be nonnegative".into(),
        ));
    }
    if !(gap_to_perturbed_ground > 0.0) {
        return Err(Error::InapplicableBound {
            reason: format!(
                "nonpositive denominator {gap_to_perturbed_ground} in eigenvector rotation bound"
            ),
        });
    }
    Ok((perturbation_norm / gap_to_perturbed_ground).clamp(0.0, 1.0))
}

/// Coarser rotation estimate `eps |Delta| / (gamma - eps |Delta|)` that only
/// needs the unperturbed gap. Always at least as large as the sin-theta
/// estimate on the same instance.
pub fn bauer_fike_delta(perturbation_norm: f64, unperturbed_gap: f64) -> Result<f64> {
    if perturbation_norm < 0.0 {
        return Err(Error::InvalidArgument(
            "perturbation norm must be nonnegative".into(),
        ));
    }
    let denom = unperturbed_gap - perturbation_norm;
    if !(denom > 0.0) {
        return Err(Error::InapplicableBound {
            reason: format!(
                "gap {unperturbed_gap} does not exceed perturbation {perturbation_norm}"
            ),
        });
    }
    Ok((perturbation_norm / denom).clamp(0.0, 1.0))
}

/// Coupling norms `eps |Delta(s)|` at the endpoints and their supremum.
#[derive(Clone, Copy, Debug)]
pub struct EnvCoupling {
    pub at_start: f64,
    pub sup: f64,
    pub at_end: f64,
}

/// Bound for coupling to a static low-temperature environment.
///
/// Requires a spectral budget `w = |H_env| + 2 sup eps|Delta| < gamma`. With
/// coupling present the tracked band has gap `gamma - w` and ratio
/// `D = 1 + 2 w / (pi (gamma - w))`; without coupling this is the plain
/// ground-state bound.
pub fn at_env_bound(
    env_norm: f64,
    coupling: &EnvCoupling,
    gamma_bar: f64,
    b1: f64,
    b2: f64,
    tau: f64,
) -> Result<BoundResult> {
    check_gamma(gamma_bar)?;
    if env_norm < 0.0 || coupling.at_start < 0.0 || coupling.sup < 0.0 || coupling.at_end < 0.0 {
        return Err(Error::InvalidArgument(
            "environment and coupling norms must be nonnegative".into(),
        ));
    }
    let coupled = coupling.sup > 0.0 || coupling.at_start > 0.0 || coupling.at_end > 0.0;
    let w = env_norm + 2.0 * coupling.sup;
    if (coupled || env_norm > 0.0) && w >= gamma_bar {
        return Err(Error::EnvironmentTooHot {
            w,
            gamma: gamma_bar,
        });
    }

    let (gamma_eps, d_bar) = if coupled {
        let g = gamma_bar - w;
        (g, 1.0 + 2.0 * w / (std::f64::consts::PI * g))
    } else {
        (gamma_bar, 1.0)
    };

    let delta_at = |c: f64| -> Result<f64> {
        if c == 0.0 {
            return Ok(0.0);
        }
        let denom = gamma_bar - env_norm - c;
        if !(denom > 0.0) {
            return Err(Error::EnvironmentTooHot {
                w,
                gamma: gamma_bar,
            });
        }
        Ok((c / denom).clamp(0.0, 1.0))
    };
    let delta0 = delta_at(coupling.at_start)?;
    let delta1 = delta_at(coupling.at_end)?;

    let base = at_bound_constant(b1, b2, gamma_eps, d_bar, tau, 1.0)?;
    let terms = BoundTerms {
        inv_tau_coeff: base.terms.inv_tau_coeff,
        endpoint_term: delta0 + delta1 + delta0 * delta1,
        ..Default::default()
    };
    BoundResult::assemble(terms, tau)
}

/// Coefficients of the two-time-scale noise bound, before choosing tau.
///
/// ```text
/// A = (8 / gamma^2) (d2 + 16 d1^2 / gamma)
/// B = (8 / gamma^2) 2 d1 (1 + 16 c1 / gamma)
/// C = (8 / gamma^2) (2 c1 + c2 + 16 c1^2 / gamma)
/// E = delta_0 + delta_1 + delta_0 delta_1
/// ```
pub fn noise_bound_terms(
    ts: &TwoScaleBounds,
    gamma_noise: f64,
    overlaps: &EndpointOverlaps,
) -> Result<BoundTerms> {
    check_gamma(gamma_noise)?;
    let g = gamma_noise;
    let pre = 8.0 / (g * g);
    Ok(BoundTerms {
        tau_linear_coeff: pre * (ts.d2 + 16.0 * ts.d1 * ts.d1 / g),
        constant_term: pre * 2.0 * ts.d1 * (1.0 + 16.0 * ts.c1 / g),
        inv_tau_coeff: pre * (2.0 * ts.c1 + ts.c2 + 16.0 * ts.c1 * ts.c1 / g),
        endpoint_term: overlaps.endpoint_term(),
    })
}

/// Two-time-scale noise bound: grows linearly in tau (noise has more time to
/// act), decays as 1/tau (drift is traversed more slowly), with a constant
/// cross term and the endpoint mismatch added once.
pub fn at_noise_bound(
    ts: &TwoScaleBounds,
    gamma_noise: f64,
    overlaps: &EndpointOverlaps,
    tau: f64,
) -> Result<BoundResult> {
    let terms = noise_bound_terms(ts, gamma_noise, overlaps)?;
    BoundResult::assemble(terms, tau)
}

/// Solution of `A tau + (B + E) + C / tau <= tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasibleTau {
    pub tau_min: f64,
    /// None when the bound stays below tolerance for arbitrarily large tau.
    pub tau_max: Option<f64>,
    /// Minimizer sqrt(C / A) of the bound, when both coefficients are positive.
    pub tau_star: Option<f64>,
}

/// Feasible evolution times for a given tolerance, or `None` when no tau
/// satisfies the bound. The inequality is quadratic in tau: `A tau^2 +
/// (B + E - tol) tau + C <= 0`.
pub fn feasible_tau_interval(terms: &BoundTerms, tolerance: f64) -> Option<FeasibleTau> {
    if !(0.0..1.0).contains(&tolerance) || tolerance <= 0.0 {
        return None;
    }
    let a = terms.tau_linear_coeff;
    let b = terms.constant_term + terms.endpoint_term;
    let c = terms.inv_tau_coeff;
    let slack = tolerance - b;

    let tau_star = if a > 0.0 && c > 0.0 {
        Some((c / a).sqrt())
    } else {
        None
    };

    if a == 0.0 && c == 0.0 {
        return if slack >= 0.0 {
            Some(FeasibleTau {
                tau_min: 0.0,
                tau_max: None,
                tau_star,
            })
        } else {
            None
        };
    }
    if slack <= 0.0 {
        return None;
    }
    if a == 0.0 {
        // C / tau <= slack
        return Some(FeasibleTau {
            tau_min: c / slack,
            tau_max: None,
            tau_star,
        });
    }
    if c == 0.0 {
        return Some(FeasibleTau {
            tau_min: 0.0,
            tau_max: Some(slack / a),
            tau_star,
        });
    }
    let disc = slack * slack - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    Some(FeasibleTau {
        tau_min: (slack - sq) / (2.0 * a),
        tau_max: Some((slack + sq) / (2.0 * a)),
        tau_star,
    })
}
