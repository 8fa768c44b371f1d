//! User-supplied two-level schedules given as a table of (s, a, b) rows,
//! interpolated with natural cubic splines so the derivative inputs of the
//! bounds and the rotating-frame integrator exist.

use std::sync::Arc;

use crate::dynamics::AbPoint;
use crate::error::{Error, Result};
use crate::schedule::HamiltonianSchedule;
use crate::spectral::HermitianOperator;

/// Natural cubic spline through strictly increasing knots.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots (zero at the ends).
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::InvalidArgument(
                "spline needs at least two matching knots".into(),
            ));
        }
        for w in x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidArgument(
                    "spline knots must be strictly increasing".into(),
                ));
            }
        }
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior tridiagonal system.
            let mut sub = vec![0.0; n - 2];
            let mut diag = vec![0.0; n - 2];
            let mut sup = vec![0.0; n - 2];
            let mut rhs = vec![0.0; n - 2];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                sub[i - 1] = h0;
                diag[i - 1] = 2.0 * (h0 + h1);
                sup[i - 1] = h1;
                rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for i in 1..n - 2 {
                let w = sub[i] / diag[i - 1];
                diag[i] -= w * sup[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[n - 2] = rhs[n - 3] / diag[n - 3];
            for i in (1..n - 2).rev() {
                m[i] = (rhs[i - 1] - sup[i - 1] * m[i + 1]) / diag[i - 1];
            }
        }
        Ok(Self {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    fn segment(&self, q: f64) -> usize {
        // Extrapolate with the end segments for probes just outside the
        // table (finite-difference validation needs that).
        match self.x.binary_search_by(|v| v.partial_cmp(&q).unwrap()) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.x.len() - 2),
        }
    }

    pub fn value(&self, q: f64) -> f64 {
        let i = self.segment(q);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - q) / h;
        let b = (q - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn d1(&self, q: f64) -> f64 {
        let i = self.segment(q);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - q) / h;
        let b = (q - self.x[i]) / h;
        (self.y[i + 1] - self.y[i]) / h
            + ((3.0 * b * b - 1.0) * self.m[i + 1] - (3.0 * a * a - 1.0) * self.m[i]) * h / 6.0
    }

    pub fn d2(&self, q: f64) -> f64 {
        let i = self.segment(q);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - q) / h;
        let b = (q - self.x[i]) / h;
        a * self.m[i] + b * self.m[i + 1]
    }
}

/// A two-level drift defined by sampled planar coefficients.
#[derive(Clone, Debug)]
pub struct TableModel {
    a: CubicSpline,
    b: CubicSpline,
}

impl TableModel {
    /// Rows are (s, a, b); s must ascend from 0 to 1.
    pub fn new(rows: &[(f64, f64, f64)]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Config("custom table needs at least two rows".into()));
        }
        let s: Vec<f64> = rows.iter().map(|r| r.0).collect();
        if (s[0]).abs() > 1e-12 || (s[s.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(Error::Config(
                "custom table must span s = 0 to s = 1".into(),
            ));
        }
        let a: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let b: Vec<f64> = rows.iter().map(|r| r.2).collect();
        Ok(Self {
            a: CubicSpline::natural(&s, &a)?,
            b: CubicSpline::natural(&s, &b)?,
        })
    }

    pub fn coefficients(&self, s: f64) -> (f64, f64) {
        (self.a.value(s), self.b.value(s))
    }

    pub fn drift_schedule(&self) -> Result<HamiltonianSchedule> {
        let (a0, a1, a2) = (self.a.clone(), self.a.clone(), self.a.clone());
        let (b0, b1, b2) = (self.b.clone(), self.b.clone(), self.b.clone());
        HamiltonianSchedule::with_derivatives(
            2,
            Arc::new(move |s| HermitianOperator::from_pauli(a0.value(s), 0.0, b0.value(s), 0.0)),
            Arc::new(move |s| HermitianOperator::from_pauli(a1.d1(s), 0.0, b1.d1(s), 0.0)),
            Arc::new(move |s| HermitianOperator::from_pauli(a2.d2(s), 0.0, b2.d2(s), 0.0)),
        )
    }

    pub fn provider(&self, tau: f64) -> impl Fn(f64) -> Result<AbPoint> + Clone {
        let a = self.a.clone();
        let b = self.b.clone();
        move |t: f64| {
            let s = t / tau;
            Ok(AbPoint {
                a: a.value(s),
                b: b.value(s),
                a_dot: a.d1(s) / tau,
                b_dot: b.d1(s) / tau,
            })
        }
    }
}
