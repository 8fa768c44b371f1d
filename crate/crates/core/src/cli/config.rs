//! Run configuration: a versioned JSON document that fully determines a
//! bound/simulation run. Unknown fields are rejected so typos surface as
//! schema errors naming the offending field.

use serde::{Deserialize, Serialize};

use crate::dynamics::IntegratorConfig;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub model: ModelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<TauSpec>,
    /// Grid resolution for derivative-norm and gap scans.
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default)]
    pub integrator: IntegratorSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationConfig>,
    /// Endpoint overlaps injected instead of being computed from the
    /// realization (useful for reproducing externally calibrated runs).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlaps: Option<OverlapsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

fn default_grid_points() -> usize {
    1001
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Tong {
        #[serde(default = "default_theta")]
        theta: f64,
        #[serde(default = "default_omega")]
        omega: f64,
        #[serde(default = "default_omega0")]
        omega0: f64,
    },
    Flux {
        #[serde(default = "default_e_j")]
        e_j: f64,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
    },
    Custom {
        /// Rows (s, a, b) in MHz, s ascending from 0 to 1.
        table: Vec<(f64, f64, f64)>,
    },
}

fn default_theta() -> f64 {
    0.001
}
fn default_omega() -> f64 {
    10.0
}
fn default_omega0() -> f64 {
    -10.0
}
fn default_e_j() -> f64 {
    crate::models::flux::DEFAULT_E_J
}
fn default_epsilon() -> f64 {
    -2.0e-4
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// Amplitude C (MHz^(-1/2) scale).
    pub c: f64,
    /// Number of cosine components.
    pub n: usize,
    pub nu_min_ghz: f64,
    pub nu_max_ghz: f64,
    pub seed: u64,
    /// Seeds for multi-realization sweeps; supersedes `seed` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
}

impl NoiseConfig {
    pub fn nu_min_mhz(&self) -> f64 {
        self.nu_min_ghz * 1e3
    }

    pub fn nu_max_mhz(&self) -> f64 {
        self.nu_max_ghz * 1e3
    }

    pub fn seed_list(&self) -> Vec<u64> {
        match &self.seeds {
            Some(list) if !list.is_empty() => list.clone(),
            _ => vec![self.seed],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TauSpec {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        #[serde(default)]
        log: bool,
    },
}

impl TauSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        let taus = match self {
            TauSpec::List(v) => v.clone(),
            TauSpec::Range {
                start,
                stop,
                count,
                log,
            } => {
                if *count < 1 {
                    return Err(Error::Config("tau range count must be >= 1".into()));
                }
                if *count == 1 {
                    vec![*start]
                } else if *log {
                    if !(*start > 0.0 && *stop > 0.0) {
                        return Err(Error::Config(
                            "log-spaced tau range needs positive endpoints".into(),
                        ));
                    }
                    let (l0, l1) = (start.ln(), stop.ln());
                    (0..*count)
                        .map(|i| (l0 + (l1 - l0) * i as f64 / (*count - 1) as f64).exp())
                        .collect()
                } else {
                    (0..*count)
                        .map(|i| start + (stop - start) * i as f64 / (*count - 1) as f64)
                        .collect()
                }
            }
        };
        if taus.is_empty() {
            return Err(Error::Config("tau list must not be empty".into()));
        }
        if taus.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(Error::Config(
                "tau values must be positive and finite".into(),
            ));
        }
        Ok(taus)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSettings {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_step: Option<f64>,
}

fn default_rel_tol() -> f64 {
    1e-9
}
fn default_abs_tol() -> f64 {
    1e-12
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rel_tol: default_rel_tol(),
            abs_tol: default_abs_tol(),
            max_step: None,
            initial_step: None,
        }
    }
}

impl IntegratorSettings {
    pub fn to_config(self) -> IntegratorConfig {
        IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step.unwrap_or(f64::INFINITY),
            initial_step: self.initial_step.unwrap_or(0.0),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationConfig {
    /// Sampling window in microseconds; defaults to 1000 / nu_min.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    /// Sample count; defaults to 1e6.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Externally supplied amplitude suprema, bypassing the sampled scan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_ndot: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_nddot: Option<f64>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapsConfig {
    pub delta0: f64,
    pub delta1: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
    /// When set (single tau, single seed), the full trajectory is written
    /// here as CSV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory_path: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} unsupported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.grid_points < 101 {
            return Err(Error::Config("grid_points must be at least 101".into()));
        }
        match &self.model {
            ModelConfig::Tong {
                theta,
                omega,
                omega0,
            } => {
                if ![*theta, *omega, *omega0].iter().all(|v| v.is_finite()) {
                    return Err(Error::Config(
                        "field `model`: tong parameters must be finite".into(),
                    ));
                }
                if *omega0 == 0.0 {
                    return Err(Error::Config(
                        "field `model.omega0`: zero field strength closes the gap".into(),
                    ));
                }
            }
            ModelConfig::Flux { e_j, epsilon } => {
                if !(*e_j > 0.0) || !e_j.is_finite() {
                    return Err(Error::Config(
                        "field `model.e_j` must be positive and finite".into(),
                    ));
                }
                if !epsilon.is_finite() {
                    return Err(Error::Config("field `model.epsilon` must be finite".into()));
                }
            }
            ModelConfig::Custom { table } => {
                if table.len() < 2 {
                    return Err(Error::Config(
                        "field `model.table` needs at least two rows".into(),
                    ));
                }
            }
        }
        if let Some(noise) = &self.noise {
            if matches!(self.model, ModelConfig::Tong { .. }) {
                return Err(Error::Config(
                    "field `noise`: the tong model carries its own rotating perturbation".into(),
                ));
            }
            if matches!(self.model, ModelConfig::Custom { .. }) {
                return Err(Error::Config(
                    "field `noise`: custom table models do not define a noise coupling".into(),
                ));
            }
            if noise.n == 0 {
                return Err(Error::Config("field `noise.n` must be positive".into()));
            }
            if !(noise.nu_min_ghz > 0.0 && noise.nu_max_ghz > noise.nu_min_ghz) {
                return Err(Error::Config(
                    "field `noise.nu_min_ghz`/`nu_max_ghz`: need 0 < min < max".into(),
                ));
            }
        }
        if let Some(tau) = &self.tau {
            tau.values()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_tong_config_parses() {
        let text = r#"{"schema_version": 1, "model": {"type": "tong"}, "tau": [1.0, 5.0]}"#;
        let config = RunConfig::from_json(text).unwrap();
        match config.model {
            ModelConfig::Tong {
                theta,
                omega,
                omega0,
            } => {
                assert_eq!(theta, 0.001);
                assert_eq!(omega, 10.0);
                assert_eq!(omega0, -10.0);
            }
            _ => panic!("wrong model"),
        }
        assert_eq!(config.tau.unwrap().values().unwrap(), vec![1.0, 5.0]);
    }

    #[test]
    fn unknown_field_names_itself() {
        let text = r#"{"schema_version": 1, "model": {"type": "tong"}, "bogus": 3}"#;
        let err = RunConfig::from_json(text).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn empty_tau_rejected() {
        let text = r#"{"schema_version": 1, "model": {"type": "tong"}, "tau": []}"#;
        assert!(RunConfig::from_json(text).is_err());
    }

    #[test]
    fn wrong_schema_version_rejected() {
        let text = r#"{"schema_version": 7, "model": {"type": "tong"}}"#;
        assert!(RunConfig::from_json(text).is_err());
    }

    #[test]
    fn tau_range_log_spacing() {
        let spec = TauSpec::Range {
            start: 0.01,
            stop: 1.0,
            count: 3,
            log: true,
        };
        let v = spec.values().unwrap();
        assert!((v[0] - 0.01).abs() < 1e-15);
        assert!((v[1] - 0.1).abs() < 1e-12);
        assert!((v[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn config_round_trips_through_own_parser() {
        let text = r#"{
            "schema_version": 1,
            "model": {"type": "flux", "epsilon": -0.0002},
            "noise": {"c": 1e-10, "n": 100, "nu_min_ghz": 2.5, "nu_max_ghz": 3.5, "seed": 7},
            "tau": {"start": 0.002, "stop": 0.05, "count": 10, "log": true},
            "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-13}
        }"#;
        let config = RunConfig::from_json(text).unwrap();
        let round = RunConfig::from_json(&config.to_json()).unwrap();
        assert_eq!(config.to_json(), round.to_json());
    }

    #[test]
    fn nonpositive_e_j_rejected() {
        let text = r#"{"schema_version": 1, "model": {"type": "flux", "e_j": -1.0}}"#;
        assert!(RunConfig::from_json(text).is_err());
    }

    #[test]
    fn tong_with_noise_rejected() {
        let text = r#"{"schema_version": 1, "model": {"type": "tong"},
            "noise": {"c": 1e-10, "n": 10, "nu_min_ghz": 2.5, "nu_max_ghz": 3.5, "seed": 1}}"#;
        assert!(RunConfig::from_json(text).is_err());
    }
}
