//! Differentiable 1/nu noise synthesized as a finite cosine sum.
//!
//! A realization is `N(t) = C sum_j cos(2 pi nu_j t + xi_j) dnu / sqrt(nu_j)`
//! over `n` equally spaced frequencies in `[nu_min, nu_max]`, with phases
//! drawn uniformly from a seeded generator. Each component carries power
//! proportional to 1/nu_j, and the sum is smooth to all orders, so the
//! derivative bounds needed by the noise theorems exist (step-like
//! fluctuator models do not qualify).
//!
//! Times are microseconds and frequencies MHz; `N` itself is dimensionless
//! (it perturbs a magnetic frustration), with couplings carrying the energy
//! units.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// Safety factor applied to sampled suprema: a finite grid can straddle but
/// never exceed the true extremum.
pub const SUP_SAFETY_FACTOR: f64 = 1.01;

#[derive(Clone, Debug)]
pub struct OneOverFNoise {
    amplitude: f64,
    nu_min: f64,
    nu_max: f64,
    delta_nu: f64,
    /// Component frequencies nu_j = nu_min + j dnu, j = 1..=n.
    frequencies: Vec<f64>,
    phases: Vec<f64>,
}

/// N and its first two time derivatives at one instant.
#[derive(Clone, Copy, Debug)]
pub struct NoiseSample {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Sampled suprema of |N|, |dN/dt| and |d2N/dt2| (safety factor included).
#[derive(Clone, Copy, Debug)]
pub struct AmplitudeBounds {
    pub sup_value: f64,
    pub sup_d1: f64,
    pub sup_d2: f64,
}

/// Term-wise worst cases `C sum dnu / sqrt(nu_j) * (2 pi nu_j)^k`; sampled
/// suprema can never exceed these.
#[derive(Clone, Copy, Debug)]
pub struct AnalyticCaps {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Deterministic uniform phases in [0, 2 pi). The stream is ChaCha12 keyed
/// by `seed_from_u64`, so a seed pins the realization bit for bit.
pub fn seeded_phases(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<f64>() * TAU).collect()
}

impl OneOverFNoise {
    pub fn new(
        amplitude: f64,
        n: usize,
        nu_min: f64,
        nu_max: f64,
        phases: Vec<f64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one component".into()));
        }
        if !(nu_min > 0.0 && nu_max > nu_min) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < nu_min < nu_max, got [{nu_min}, {nu_max}]"
            )));
        }
        if phases.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: phases.len(),
            });
        }
        if phases.iter().any(|p| !(0.0..TAU).contains(p)) {
            return Err(Error::InvalidArgument(
                "phases must lie in [0, 2 pi)".into(),
            ));
        }
        let delta_nu = (nu_max - nu_min) / n as f64;
        let frequencies = (1..=n).map(|j| nu_min + j as f64 * delta_nu).collect();
        Ok(Self {
            amplitude,
            nu_min,
            nu_max,
            delta_nu,
            frequencies,
            phases,
        })
    }

    pub fn seeded(amplitude: f64, n: usize, nu_min: f64, nu_max: f64, seed: u64) -> Result<Self> {
        Self::new(amplitude, n, nu_min, nu_max, seeded_phases(seed, n))
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn nu_min(&self) -> f64 {
        self.nu_min
    }

    pub fn nu_max(&self) -> f64 {
        self.nu_max
    }

    pub fn delta_nu(&self) -> f64 {
        self.delta_nu
    }

    pub fn component_count(&self) -> usize {
        self.frequencies.len()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Longest wavelength present, 1/nu_min.
    pub fn longest_wavelength(&self) -> f64 {
        1.0 / self.nu_min
    }

    /// Value and the first two analytic derivatives at time t.
    pub fn sample(&self, t: f64) -> NoiseSample {
        let mut value = 0.0;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for (&nu, &xi) in self.frequencies.iter().zip(&self.phases) {
            let weight = self.amplitude * self.delta_nu / nu.sqrt();
            let omega = TAU * nu;
            let (s, c) = (omega * t + xi).sin_cos();
            value += weight * c;
            d1 -= weight * omega * s;
            d2 -= weight * omega * omega * c;
        }
        NoiseSample { value, d1, d2 }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.sample(t).value
    }

    pub fn analytic_caps(&self) -> AnalyticCaps {
        let mut caps = AnalyticCaps {
            value: 0.0,
            d1: 0.0,
            d2: 0.0,
        };
        for &nu in &self.frequencies {
            let weight = self.amplitude.abs() * self.delta_nu / nu.sqrt();
            let omega = TAU * nu;
            caps.value += weight;
            caps.d1 += weight * omega;
            caps.d2 += weight * omega * omega;
        }
        caps
    }

    /// Sampled suprema of |N|, |N'|, |N''| over `[0, window]`, scaled by the
    /// safety factor. The window must cover at least ten of the longest
    /// wavelengths and the grid must resolve the fastest component.
    pub fn amplitude_bounds(&self, window: f64, samples: usize) -> Result<AmplitudeBounds> {
        let required = 10.0 * self.longest_wavelength();
        if window < required {
            return Err(Error::WindowTooShort {
                required,
                got: window,
            });
        }
        if samples < 100_000 {
            return Err(Error::InvalidArgument(format!(
                "need at least 1e5 samples for calibration, got {samples}"
            )));
        }
        let dt = window / samples as f64;
        if dt > 0.1 / self.nu_max {
            return Err(Error::InvalidArgument(format!(
                "sampling step {dt} does not resolve nu_max = {}",
                self.nu_max
            )));
        }
        let mut sup = AmplitudeBounds {
            sup_value: 0.0,
            sup_d1: 0.0,
            sup_d2: 0.0,
        };
        for k in 0..=samples {
            let s = self.sample(k as f64 * dt);
            sup.sup_value = sup.sup_value.max(s.value.abs());
            sup.sup_d1 = sup.sup_d1.max(s.d1.abs());
            sup.sup_d2 = sup.sup_d2.max(s.d2.abs());
        }
        sup.sup_value *= SUP_SAFETY_FACTOR;
        sup.sup_d1 *= SUP_SAFETY_FACTOR;
        sup.sup_d2 *= SUP_SAFETY_FACTOR;
        Ok(sup)
    }

    /// Power carried by each component, recovered from a long sample by
    /// correlation against e^{-2 pi i nu_j t}. Returns (nu_j, power_j)
    /// pairs; for the synthesized process power_j ~ (C dnu)^2 / (2 nu_j).
    pub fn component_power(&self, window: f64, samples: usize) -> Vec<(f64, f64)> {
        let dt = window / samples as f64;
        // One pass over the samples, accumulating all correlators.
        let mut acc: Vec<(f64, f64)> = vec![(0.0, 0.0); self.frequencies.len()];
        for k in 0..samples {
            let t = k as f64 * dt;
            let v = self.value(t);
            for (j, &nu) in self.frequencies.iter().enumerate() {
                let (s, c) = (TAU * nu * t).sin_cos();
                acc[j].0 += v * c;
                acc[j].1 -= v * s;
            }
        }
        self.frequencies
            .iter()
            .zip(acc)
            .map(|(&nu, (re, im))| {
                let scale = 2.0 * dt / window;
                let amp_re = re * scale;
                let amp_im = im * scale;
                (nu, 0.5 * (amp_re * amp_re + amp_im * amp_im))
            })
            .collect()
    }
}
