//! Small dense complex matrices, row-major, square.
//!
//! Everything in this crate works on operators of dimension 2 up to a few
//! dozen, so a flat `Vec<Complex64>` with value semantics beats any clever
//! storage. Matrices are immutable in spirit: operations return new values.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        for r in rows {
            if r.len() != dim {
                return Err(Error::NonSquare {
                    rows: dim,
                    cols: r.len(),
                });
            }
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pauli_x() -> Self {
        Self::from_fn(2, |i, j| if i != j { C64::ONE } else { C64::ZERO })
    }

    pub fn pauli_y() -> Self {
        let mut m = Self::zeros(2);
        m[(0, 1)] = C64::new(0.0, -1.0);
        m[(1, 0)] = C64::new(0.0, 1.0);
        m
    }

    pub fn pauli_z() -> Self {
        let mut m = Self::zeros(2);
        m[(0, 0)] = C64::ONE;
        m[(1, 1)] = -C64::ONE;
        m
    }

    /// x*sigma_x + y*sigma_y + z*sigma_z + id*I with real coefficients.
    pub fn pauli_sum(x: f64, y: f64, z: f64, id: f64) -> Self {
        let mut m = Self::zeros(2);
        m[(0, 0)] = C64::new(id + z, 0.0);
        m[(1, 1)] = C64::new(id - z, 0.0);
        m[(0, 1)] = C64::new(x, -y);
        m[(1, 0)] = C64::new(x, y);
        m
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o += r;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o -= r;
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o *= factor;
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|A[i][j] - conj(A[j][i])|` over all entries.
    pub fn hermiticity_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Apply the matrix to a state vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        assert_eq!(v.len(), self.dim);
        for i in 0..self.dim {
            self[(i, j)] = v[i];
        }
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let x = CMat::pauli_x();
        let y = CMat::pauli_y();
        let z = CMat::pauli_z();
        // sigma_x sigma_y = i sigma_z
        let xy = x.mul(&y);
        let iz = z.scale(C64::new(0.0, 1.0));
        assert!(xy.sub(&iz).max_abs_entry() < 1e-15);
        // involutions
        assert!(x.mul(&x).sub(&CMat::identity(2)).max_abs_entry() < 1e-15);
        assert!(z.mul(&z).sub(&CMat::identity(2)).max_abs_entry() < 1e-15);
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let rows = vec![vec![C64::ONE, C64::ZERO], vec![C64::ZERO]];
        assert!(matches!(
            CMat::from_rows(&rows),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn adjoint_of_product() {
        let a = CMat::pauli_sum(0.3, -1.2, 0.7, 0.1);
        let b = CMat::pauli_sum(-0.5, 0.2, 1.3, -0.4);
        let lhs = a.mul(&b).adjoint();
        let rhs = b.adjoint().mul(&a.adjoint());
        assert!(lhs.sub(&rhs).max_abs_entry() < 1e-15);
    }
}
