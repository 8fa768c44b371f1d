//! Dense spectral analysis for small Hermitian operators: two-norms,
//! eigendecomposition, spectral projectors, gap profiles and projector
//! distances.
//!
//! The eigensolver is a cyclic complex Jacobi iteration. For the matrix sizes
//! this crate cares about (2 to ~64) it converges in a handful of sweeps and
//! delivers residuals near machine precision, with no external linear-algebra
//! dependency and a reproducible eigenvector phase convention.

use num_complex::Complex64 as C64;

use crate::cmat::CMat;
use crate::error::{Error, Result};

/// Absolute Hermiticity tolerance enforced at construction. Inputs violating
/// it are rejected rather than symmetrized so that model bugs surface early.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// A validated Hermitian operator. Entries are energies (MHz with hbar = 1).
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    mat: CMat,
}

impl HermitianOperator {
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.dim() == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if !mat.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                variable: "entry",
                at: f64::NAN,
            });
        }
        let violation = mat.hermiticity_violation();
        if violation > HERMITICITY_TOL {
            return Err(Error::NonHermitian {
                max_violation: violation,
                tolerance: HERMITICITY_TOL,
            });
        }
        Ok(Self { mat })
    }

    /// Two-level operator x*sigma_x + y*sigma_y + z*sigma_z + id*I.
    pub fn from_pauli(x: f64, y: f64, z: f64, id: f64) -> Self {
        Self {
            mat: CMat::pauli_sum(x, y, z, id),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: rhs.dim(),
            });
        }
        // Entrywise sums preserve conjugate symmetry exactly in floating point.
        Ok(Self {
            mat: self.mat.add(&rhs.mat),
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            mat: self.mat.scale(C64::new(factor, 0.0)),
        }
    }

    pub fn two_norm(&self) -> f64 {
        let (vals, _) = hermitian_eigen(&self.mat);
        vals.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// An orthogonal projector, validated for idempotency and Hermiticity.
#[derive(Clone, Debug)]
pub struct Projector {
    mat: CMat,
    rank: usize,
}

impl Projector {
    pub fn new(mat: CMat) -> Result<Self> {
        let herm = mat.hermiticity_violation();
        if herm > 1e-10 {
            return Err(Error::NonHermitian {
                max_violation: herm,
                tolerance: 1e-10,
            });
        }
        let idem = operator_two_norm(&mat.mul(&mat).sub(&mat));
        if idem > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "not idempotent: |P^2 - P| = {idem:.3e}"
            )));
        }
        let tr = mat.trace().re;
        let rank = tr.round() as usize;
        if (tr - rank as f64).abs() > 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "projector trace {tr} is not close to an integer"
            )));
        }
        Ok(Self { mat, rank })
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// Q = I - P.
    pub fn complement(&self) -> Self {
        Self {
            mat: CMat::identity(self.dim()).sub(&self.mat),
            rank: self.dim() - self.rank,
        }
    }
}

/// Pointwise gap data for a tracked eigenband over a schedule grid.
///
/// `gamma` is the separation of the band from the rest of the spectrum,
/// `width` the spread inside the band, and `d = 1 + 2 width / (pi gamma)`
/// the contour-length ratio entering the subspace bounds.
#[derive(Clone, Debug)]
pub struct GapProfile {
    pub s: Vec<f64>,
    pub gamma: Vec<f64>,
    pub width: Vec<f64>,
    pub d: Vec<f64>,
    pub gamma_min: f64,
    pub w_max: f64,
    pub d_max: f64,
}

/// Largest singular value of a square complex matrix.
///
/// For a Hermitian input this equals the largest eigenvalue magnitude; the
/// general case goes through the Hermitian product A^dag A.
pub fn operator_two_norm(a: &CMat) -> f64 {
    let scale = a.max_abs_entry();
    if scale == 0.0 {
        return 0.0;
    }
    if a.hermiticity_violation() <= 1e-13 * scale.max(1.0) {
        let (vals, _) = hermitian_eigen(a);
        return vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    }
    let ata = a.adjoint().mul(a);
    let (vals, _) = hermitian_eigen(&ata);
    vals.iter().fold(0.0f64, |m, &v| m.max(v.max(0.0))).sqrt()
}

/// Checked variant used by boundary APIs that accept raw row data.
pub fn operator_two_norm_checked(rows: &[Vec<C64>]) -> Result<f64> {
    let m = CMat::from_rows(rows)?;
    Ok(operator_two_norm(&m))
}

/// Full eigendecomposition with deterministic eigenvector phases: the
/// largest-magnitude component of each eigenvector is made real positive.
pub fn eigendecompose(h: &HermitianOperator) -> Result<SpectralData> {
    let (mut vals, mut vecs) = hermitian_eigen(h.mat());

    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut sorted_vecs = CMat::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vecs.set_column(dst, &vecs.column(src));
    }
    vals = sorted_vals;
    vecs = sorted_vecs;

    for j in 0..n {
        let col = vecs.column(j);
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for (i, z) in col.iter().enumerate() {
            let m = z.norm();
            if m > best_mag + 1e-14 {
                best_mag = m;
                best = i;
            }
        }
        let pivot = col[best];
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            let fixed: Vec<C64> = col.iter().map(|z| z * phase).collect();
            vecs.set_column(j, &fixed);
        }
    }

    Ok(SpectralData {
        eigenvalues: vals,
        eigenvectors: vecs,
    })
}

/// Angles and energies of a*sigma_x + b*sigma_z.
///
/// `theta` is the cotangent-based field angle in [0, pi), chosen over the
/// arctangent because the schedules of interest start near b = 0. In that
/// convention the eigenvector pair is (-sin(theta/2), cos(theta/2)) and
/// (cos(theta/2), sin(theta/2)); the first carries eigenvalue
/// e0 = -sqrt(a^2 + b^2) when a > 0 and e1 when a < 0. The rotating-frame
/// dynamics track
/// |c1| which is insensitive to that labeling.
#[derive(Clone, Copy, Debug)]
pub struct TwoLevelAngles {
    pub e0: f64,
    pub e1: f64,
    pub theta: f64,
}

pub fn two_level_angles(a: f64, b: f64) -> Result<TwoLevelAngles> {
    if a == 0.0 && b == 0.0 {
        return Err(Error::DegenerateSpectrum {
            context: "a = b = 0 in two-level operator".into(),
        });
    }
    let r = a.hypot(b);
    let mut theta = a.atan2(b);
    if theta < 0.0 {
        theta += std::f64::consts::PI;
    }
    Ok(TwoLevelAngles {
        e0: -r,
        e1: r,
        theta,
    })
}

/// The basis vectors associated with a field angle theta.
pub fn theta_basis(theta: f64) -> ([C64; 2], [C64; 2]) {
    let (s, c) = (theta / 2.0).sin_cos();
    (
        [C64::new(-s, 0.0), C64::new(c, 0.0)],
        [C64::new(c, 0.0), C64::new(s, 0.0)],
    )
}

/// Projector onto the eigenspace of eigenvalues m..=n.
pub fn subspace_projector(spec: &SpectralData, m: usize, n: usize) -> Result<Projector> {
    let dim = spec.dim();
    if m > n || n >= dim {
        return Err(Error::IndexOutOfRange {
            index: n.max(m),
            dim,
        });
    }
    let mut p = CMat::zeros(dim);
    for k in m..=n {
        let v = spec.eigenvectors.column(k);
        for i in 0..dim {
            for j in 0..dim {
                p[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    // Enforce exact conjugate symmetry; the accumulation above is symmetric
    // only up to rounding.
    let sym = CMat::from_fn(dim, |i, j| (p[(i, j)] + p[(j, i)].conj()) * 0.5);
    Projector::new(sym)
}

/// Two-norm distance between equal-rank projectors; for rank-1 projectors
/// this is the sine of the principal angle between the ranges.
pub fn projector_distance(p1: &Projector, p2: &Projector) -> Result<f64> {
    if p1.dim() != p2.dim() {
        return Err(Error::Dimension {
            expected: p1.dim(),
            got: p2.dim(),
        });
    }
    if p1.rank() != p2.rank() {
        return Err(Error::RankMismatch {
            rank1: p1.rank(),
            rank2: p2.rank(),
        });
    }
    Ok(operator_two_norm(&p1.mat().sub(p2.mat())).min(1.0))
}

/// Gap profile of the band [m, n] over a schedule of spectra.
///
/// gamma(s) is the smaller of the gaps above and below the band (only the
/// upper gap exists for m = 0, only the lower one for n = dim - 1). A
/// non-positive gamma anywhere is reported as a closure at that s.
pub fn gap_profile(
    s_values: &[f64],
    spectra: &[SpectralData],
    m: usize,
    n: usize,
) -> Result<GapProfile> {
    if s_values.len() != spectra.len() || spectra.is_empty() {
        return Err(Error::InvalidArgument(
            "gap profile needs one spectrum per grid point".into(),
        ));
    }
    let dim = spectra[0].dim();
    if m > n || n >= dim {
        return Err(Error::IndexOutOfRange {
            index: n.max(m),
            dim,
        });
    }
    if m == 0 && n == dim - 1 {
        return Err(Error::InvalidArgument(
            "band covers the whole spectrum; no gap is defined".into(),
        ));
    }

    let mut gamma = Vec::with_capacity(spectra.len());
    let mut width = Vec::with_capacity(spectra.len());
    let mut d = Vec::with_capacity(spectra.len());
    for (&s, spec) in s_values.iter().zip(spectra) {
        if spec.dim() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: spec.dim(),
            });
        }
        let ev = &spec.eigenvalues;
        let upper = if n + 1 < dim {
            ev[n + 1] - ev[n]
        } else {
            f64::INFINITY
        };
        let lower = if m > 0 {
            ev[m] - ev[m - 1]
        } else {
            f64::INFINITY
        };
        let g = upper.min(lower);
        if !(g > 0.0) {
            return Err(Error::GapClosure { s, gamma: g });
        }
        let w = ev[n] - ev[m];
        gamma.push(g);
        width.push(w);
        d.push(1.0 + 2.0 * w / (std::f64::consts::PI * g));
    }

    let gamma_min = gamma.iter().cloned().fold(f64::INFINITY, f64::min);
    let w_max = width.iter().cloned().fold(0.0, f64::max);
    let d_max = d.iter().cloned().fold(1.0, f64::max);
    Ok(GapProfile {
        s: s_values.to_vec(),
        gamma,
        width,
        d,
        gamma_min,
        w_max,
        d_max,
    })
}

/// Cyclic complex Jacobi eigensolver. Returns unsorted eigenvalues and the
/// accumulated unitary (columns are eigenvectors).
fn hermitian_eigen(input: &CMat) -> (Vec<f64>, CMat) {
    let n = input.dim();
    let mut a = input.clone();
    let mut v = CMat::identity(n);
    if n == 1 {
        return (vec![a[(0, 0)].re], v);
    }

    let norm = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let tol = 1e-15 * norm;
    const MAX_SWEEPS: usize = 100;

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * a[(i, j)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= tol / (n as f64) {
                    continue;
                }
                // Phase that makes the (p, q) entry real positive, then the
                // classical symmetric Jacobi rotation on the real block.
                let phase = apq / mag; // e^{i phi}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // R = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q).
                let rpp = C64::new(c, 0.0);
                let rpq = C64::new(s, 0.0);
                let rqp = -s * phase.conj();
                let rqq = c * phase.conj();

                // A <- R^dag A R, touching only rows/columns p and q.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * rpp + aiq * rqp;
                    a[(i, q)] = aip * rpq + aiq * rqq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = rpp.conj() * apj + rqp.conj() * aqj;
                    a[(q, j)] = rpq.conj() * apj + rqq.conj() * aqj;
                }
                // Clean the rotated pivot of rounding residue.
                a[(p, q)] = C64::ZERO;
                a[(q, p)] = C64::ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * rpp + viq * rqp;
                    v[(i, q)] = vip * rpq + viq * rqq;
                }
            }
        }
    }

    let vals = (0..n).map(|i| a[(i, i)].re).collect();
    (vals, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_hermitian(rng: &mut StdRng, dim: usize) -> HermitianOperator {
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..dim {
                let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        HermitianOperator::new(m).unwrap()
    }

    fn random_complex(rng: &mut StdRng, dim: usize) -> CMat {
        CMat::from_fn(dim, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    /// Power iteration on A^dag A, independent of the Jacobi path.
    fn power_iteration_two_norm(a: &CMat, iters: usize) -> f64 {
        let ata = a.adjoint().mul(a);
        let n = a.dim();
        let mut v: Vec<C64> = (0..n)
            .map(|i| C64::new(1.0 / ((i + 1) as f64), 0.3 / ((i + 2) as f64)))
            .collect();
        let mut lambda = 0.0;
        for _ in 0..iters {
            let w = ata.apply(&v);
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            lambda = norm / v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = w.iter().map(|z| z / norm).collect();
        }
        lambda.sqrt()
    }

    #[test]
    fn two_norm_of_pauli_z_is_one() {
        assert!((operator_two_norm(&CMat::pauli_z()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_norm_matches_power_iteration() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_complex(&mut rng, 4);
            let jac = operator_two_norm(&a);
            let pow = power_iteration_two_norm(&a, 3000);
            assert!(
                (jac - pow).abs() <= 1e-10 * jac.max(1e-30),
                "jacobi {jac} vs power {pow}"
            );
        }
    }

    #[test]
    fn two_norm_rejects_ragged_rows() {
        let rows = vec![vec![C64::ONE], vec![C64::ZERO, C64::ONE]];
        assert!(operator_two_norm_checked(&rows).is_err());
    }

    #[test]
    fn eigendecompose_diagonal() {
        let h = HermitianOperator::from_pauli(0.0, 0.0, 1.0, 0.0); // diag(1, -1)
        let spec = eigendecompose(&h).unwrap();
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-14);
        // ascending order puts e_2 = (0, 1) first
        assert!((spec.eigenvectors[(1, 0)].re - 1.0).abs() < 1e-14);
        assert!((spec.eigenvectors[(0, 1)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigendecompose_reconstructs_random_8x8() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, 8);
            let spec = eigendecompose(&h).unwrap();
            let v = &spec.eigenvectors;
            // unitarity
            let vtv = v.adjoint().mul(v);
            assert!(vtv.sub(&CMat::identity(8)).max_abs_entry() < 1e-10);
            // reconstruction V Lambda V^dag
            let mut lam = CMat::zeros(8);
            for i in 0..8 {
                lam[(i, i)] = C64::new(spec.eigenvalues[i], 0.0);
            }
            let rec = v.mul(&lam).mul(&v.adjoint());
            let scale = operator_two_norm(h.mat());
            assert!(operator_two_norm(&rec.sub(h.mat())) <= 1e-9 * scale);
            // residuals per pair
            for j in 0..8 {
                let col = v.column(j);
                let hv = h.mat().apply(&col);
                let res: f64 = hv
                    .iter()
                    .zip(&col)
                    .map(|(a, b)| (a - b * spec.eigenvalues[j]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-9 * scale.max(1e-30));
            }
        }
    }

    #[test]
    fn eigenvector_phase_is_deterministic() {
        let mut rng = StdRng::seed_from_u64(3);
        let h = random_hermitian(&mut rng, 5);
        let s1 = eigendecompose(&h).unwrap();
        let s2 = eigendecompose(&h).unwrap();
        assert!(s1.eigenvectors.sub(&s2.eigenvectors).max_abs_entry() == 0.0);
        for j in 0..5 {
            let col = s1.eigenvectors.column(j);
            let max = col
                .iter()
                .cloned()
                .fold(C64::ZERO, |m, z| if z.norm() > m.norm() { z } else { m });
            assert!(max.im.abs() < 1e-12 && max.re > 0.0);
        }
    }

    #[test]
    fn two_level_angles_pure_sigma_x() {
        let ang = two_level_angles(-1.0, 0.0).unwrap();
        assert!((ang.e0 + 1.0).abs() < 1e-15);
        assert!((ang.e1 - 1.0).abs() < 1e-15);
        assert!((ang.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn two_level_angles_degenerate_rejected() {
        assert!(matches!(
            two_level_angles(0.0, 0.0),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn two_level_angles_match_eigendecompose() {
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..50 {
            let a: f64 = rng.random_range(-2.0..2.0);
            let b: f64 = rng.random_range(-2.0..2.0);
            if a.hypot(b) < 1e-3 {
                continue;
            }
            let ang = two_level_angles(a, b).unwrap();
            let h = HermitianOperator::from_pauli(a, 0.0, b, 0.0);
            let spec = eigendecompose(&h).unwrap();
            assert!((ang.e0 - spec.eigenvalues[0]).abs() < 1e-10 * a.hypot(b).max(1.0));
            assert!((ang.e1 - spec.eigenvalues[1]).abs() < 1e-10 * a.hypot(b).max(1.0));

            let (v_minus, v_plus) = theta_basis(ang.theta);
            // For a > 0, (-sin, cos) is the ground state; for a < 0 the
            // labels swap. Compare overlap magnitudes against the solver.
            let ground = spec.eigenvectors.column(0);
            let target: &[C64; 2] = if a >= 0.0 { &v_minus } else { &v_plus };
            let overlap: C64 = ground
                .iter()
                .zip(target.iter())
                .map(|(g, t)| g.conj() * t)
                .sum();
            assert!(
                (overlap.norm() - 1.0).abs() < 1e-10,
                "a={a} b={b} overlap={}",
                overlap.norm()
            );
        }
    }

    #[test]
    fn subspace_projector_ground_of_diag() {
        let h = HermitianOperator::from_pauli(0.0, 0.0, 0.5, 0.5); // diag(1, 0)
        let spec = eigendecompose(&h).unwrap();
        let p = subspace_projector(&spec, 0, 0).unwrap();
        assert_eq!(p.rank(), 1);
        assert!((p.mat()[(1, 1)].re - 1.0).abs() < 1e-12);
        assert!(p.mat()[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn full_space_projector_is_identity() {
        let mut rng = StdRng::seed_from_u64(5);
        let h = random_hermitian(&mut rng, 4);
        let spec = eigendecompose(&h).unwrap();
        let p = subspace_projector(&spec, 0, 3).unwrap();
        assert!(p.mat().sub(&CMat::identity(4)).max_abs_entry() < 1e-10);
    }

    #[test]
    fn projector_commutes_with_operator() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, 6);
            let spec = eigendecompose(&h).unwrap();
            let p = subspace_projector(&spec, 0, 1).unwrap();
            let comm = h.mat().commutator(p.mat());
            assert!(operator_two_norm(&comm) <= 1e-9 * operator_two_norm(h.mat()));
        }
    }

    #[test]
    fn projector_out_of_range() {
        let h = HermitianOperator::from_pauli(0.0, 0.0, 1.0, 0.0);
        let spec = eigendecompose(&h).unwrap();
        assert!(matches!(
            subspace_projector(&spec, 0, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn projector_distance_identical_is_zero() {
        let h = HermitianOperator::from_pauli(0.3, 0.1, -0.7, 0.0);
        let spec = eigendecompose(&h).unwrap();
        let p = subspace_projector(&spec, 0, 0).unwrap();
        assert!(projector_distance(&p, &p).unwrap() < 1e-14);
    }

    #[test]
    fn projector_distance_rank_one_is_sine() {
        for &alpha in &[0.0f64, 0.1, 0.4, 1.0, 1.5] {
            let p1 = Projector::new(CMat::from_fn(2, |i, j| {
                if i == 0 && j == 0 {
                    C64::ONE
                } else {
                    C64::ZERO
                }
            }))
            .unwrap();
            let (c, s) = (alpha.cos(), alpha.sin());
            let v = [C64::new(c, 0.0), C64::new(s, 0.0)];
            let m = CMat::from_fn(2, |i, j| v[i] * v[j].conj());
            let p2 = Projector::new(m).unwrap();
            let d = projector_distance(&p1, &p2).unwrap();
            assert!((d - alpha.sin().abs()).abs() < 1e-12, "alpha = {alpha}");
        }
    }

    #[test]
    fn projector_distance_rank_mismatch_rejected() {
        let h = HermitianOperator::from_pauli(0.0, 0.0, 1.0, 0.0);
        let spec = eigendecompose(&h).unwrap();
        let p1 = subspace_projector(&spec, 0, 0).unwrap();
        let p2 = subspace_projector(&spec, 0, 1).unwrap();
        assert!(matches!(
            projector_distance(&p1, &p2),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn gap_profile_constant_two_level() {
        let h = HermitianOperator::from_pauli(0.0, 0.0, 0.5, 0.5); // diag(1, 0)
        let spec = eigendecompose(&h).unwrap();
        let s: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let spectra: Vec<SpectralData> = s.iter().map(|_| spec.clone()).collect();
        let gp = gap_profile(&s, &spectra, 0, 0).unwrap();
        assert!((gp.gamma_min - 1.0).abs() < 1e-12);
        assert!(gp.w_max.abs() < 1e-12);
        assert!((gp.d_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gap_profile_three_level_band() {
        // diag(0, g, g + w) tracking the band {0, g}: width g, gap w.
        let g = 0.4;
        let w = 0.25;
        let mut m = CMat::zeros(3);
        m[(1, 1)] = C64::new(g, 0.0);
        m[(2, 2)] = C64::new(g + w, 0.0);
        let spec = eigendecompose(&HermitianOperator::new(m).unwrap()).unwrap();
        let gp = gap_profile(&[0.0], &[spec], 0, 1).unwrap();
        assert!((gp.gamma[0] - w).abs() < 1e-12);
        assert!((gp.width[0] - g).abs() < 1e-12);
        let expected_d = 1.0 + 2.0 * g / (std::f64::consts::PI * w);
        assert!((gp.d[0] - expected_d).abs() < 1e-12);
    }

    #[test]
    fn gap_profile_reports_closure() {
        let mut m = CMat::zeros(2);
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(1, 1)] = C64::new(0.5, 0.0);
        let spec = eigendecompose(&HermitianOperator::new(m).unwrap()).unwrap();
        let err = gap_profile(&[0.25], &[spec], 0, 0);
        match err {
            Err(Error::GapClosure { s, .. }) => assert!((s - 0.25).abs() < 1e-15),
            other => panic!("expected gap closure, got {other:?}"),
        }
    }

    #[test]
    fn hermiticity_gate() {
        let mut m = CMat::pauli_sum(1.0, 0.0, 0.0, 0.0);
        m[(0, 1)] += C64::new(1e-9, 0.0);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn norm_is_submultiplicative_and_subadditive() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..40 {
            let a = random_complex(&mut rng, 4);
            let b = random_complex(&mut rng, 4);
            let na = operator_two_norm(&a);
            let nb = operator_two_norm(&b);
            assert!(operator_two_norm(&a.mul(&b)) <= na * nb + 1e-10 * na * nb);
            assert!(operator_two_norm(&a.add(&b)) <= na + nb + 1e-10 * (na + nb));
        }
    }

    #[test]
    fn unitaries_and_projectors_have_unit_norm() {
        let mut rng = StdRng::seed_from_u64(43);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, 5);
            let spec = eigendecompose(&h).unwrap();
            // the eigenvector matrix is unitary
            assert!((operator_two_norm(&spec.eigenvectors) - 1.0).abs() < 1e-10);
            for (m, n) in [(0usize, 0usize), (0, 2), (1, 3)] {
                let p = subspace_projector(&spec, m, n).unwrap();
                assert!((operator_two_norm(p.mat()) - 1.0).abs() < 1e-10);
                if p.rank() < 5 {
                    assert!((operator_two_norm(p.complement().mat()) - 1.0).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn projector_distance_is_a_metric() {
        let mut rng = StdRng::seed_from_u64(47);
        for _ in 0..30 {
            let ps: Vec<Projector> = (0..3)
                .map(|_| {
                    let h = random_hermitian(&mut rng, 4);
                    let spec = eigendecompose(&h).unwrap();
                    subspace_projector(&spec, 0, 1).unwrap()
                })
                .collect();
            let d01 = projector_distance(&ps[0], &ps[1]).unwrap();
            let d10 = projector_distance(&ps[1], &ps[0]).unwrap();
            let d12 = projector_distance(&ps[1], &ps[2]).unwrap();
            let d02 = projector_distance(&ps[0], &ps[2]).unwrap();
            assert!((d01 - d10).abs() < 1e-12);
            assert!(d02 <= d01 + d12 + 1e-9, "triangle: {d02} vs {d01} + {d12}");
            assert!(d01 >= 0.0);
            assert!(projector_distance(&ps[0], &ps[0]).unwrap() < 1e-12);
        }
    }
}
