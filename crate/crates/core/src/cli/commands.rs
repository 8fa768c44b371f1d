//! Implementations of the CLI subcommands, kept in the library so they can
//! be tested directly.

use rayon::prelude::*;

use crate::bounds::{self, BoundTerms, EndpointOverlaps, OverlapSource};
use crate::cli::config::{CalibrationConfig, ModelConfig, NoiseConfig, OutputFormat, RunConfig};
use crate::dynamics::{evolve_rotating_frame, IntegratorConfig, NoiseAxis, Trajectory};
use crate::error::{Error, Result};
use crate::models::{FluxCalibration, FluxQubitModel, TableModel, TongModel};
use crate::noise::OneOverFNoise;
use crate::schedule::{derivative_norm_bounds, drift_gap_profile, uniform_grid};

/// A rectangular numeric dataset with stable column order; the unit of
/// output for every subcommand. Floats are rendered with Rust's shortest
/// round-trip formatting, so identical runs produce identical bytes.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        // BTreeMap keys are emitted sorted, which keeps the bytes stable.
        let rows: Vec<std::collections::BTreeMap<&str, f64>> = self
            .rows
            .iter()
            .map(|row| {
                self.columns
                    .iter()
                    .cloned()
                    .zip(row.iter().cloned())
                    .collect()
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&rows).expect("numeric rows serialize");
        text.push('\n');
        text
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

enum BuiltModel {
    Tong(TongModel),
    Flux(FluxQubitModel),
    Custom(TableModel),
}

fn build_model(config: &RunConfig) -> Result<BuiltModel> {
    Ok(match &config.model {
        ModelConfig::Tong {
            theta,
            omega,
            omega0,
        } => BuiltModel::Tong(TongModel {
            theta: *theta,
            omega: *omega,
            omega0: *omega0,
        }),
        ModelConfig::Flux { e_j, epsilon } => BuiltModel::Flux(FluxQubitModel::new(*e_j, *epsilon)),
        ModelConfig::Custom { table } => BuiltModel::Custom(TableModel::new(table)?),
    })
}

/// The two frustration loops get independent realizations derived from one
/// sweep seed: 2 seed and 2 seed + 1.
fn flux_noise_pair(noise: &NoiseConfig, seed: u64) -> Result<(OneOverFNoise, OneOverFNoise)> {
    let make =
        |s: u64| OneOverFNoise::seeded(noise.c, noise.n, noise.nu_min_mhz(), noise.nu_max_mhz(), s);
    Ok((make(2 * seed)?, make(2 * seed + 1)?))
}

fn calibration_window(noise: &NoiseConfig, cal: Option<&CalibrationConfig>) -> (f64, usize) {
    let window = cal
        .and_then(|c| c.window)
        .unwrap_or(1000.0 / noise.nu_min_mhz());
    let samples = cal.and_then(|c| c.samples).unwrap_or(1_000_000);
    (window, samples)
}

/// Per-seed state reused across a tau sweep: the noise realization and its
/// amplitude suprema (the expensive scan). Endpoint overlaps depend on tau
/// and are computed per point.
struct SeedContext {
    model: Option<FluxQubitModel>,
    sups: (f64, f64, f64),
}

fn seed_context(config: &RunConfig, built: &BuiltModel, seed: u64) -> Result<SeedContext> {
    let BuiltModel::Flux(model) = built else {
        return Ok(SeedContext {
            model: None,
            sups: (0.0, 0.0, 0.0),
        });
    };
    let Some(noise_cfg) = &config.noise else {
        return Ok(SeedContext {
            model: Some(model.clone()),
            sups: (0.0, 0.0, 0.0),
        });
    };
    let (n1, n2) = flux_noise_pair(noise_cfg, seed)?;
    let model = model.clone().with_noise(n1, n2);
    let cal_cfg = config.calibration.as_ref();
    let injected = cal_cfg
        .map(|c| c.sup_ndot.is_some() && c.sup_nddot.is_some())
        .unwrap_or(false);
    let sups = if injected {
        let c = cal_cfg.unwrap();
        (
            c.sup_n.unwrap_or(0.0),
            c.sup_ndot.unwrap(),
            c.sup_nddot.unwrap(),
        )
    } else {
        let (window, samples) = calibration_window(noise_cfg, cal_cfg);
        let b1 = model
            .noise1
            .as_ref()
            .expect("noise installed")
            .amplitude_bounds(window, samples)?;
        let b2 = model
            .noise2
            .as_ref()
            .expect("noise installed")
            .amplitude_bounds(window, samples)?;
        (
            b1.sup_value.max(b2.sup_value),
            b1.sup_d1.max(b2.sup_d1),
            b1.sup_d2.max(b2.sup_d2),
        )
    };
    Ok(SeedContext {
        model: Some(model),
        sups,
    })
}

/// Bound coefficients for a model at one (seed, tau); seed only matters for
/// noisy flux runs.
fn bound_terms_for(
    config: &RunConfig,
    built: &BuiltModel,
    ctx: &SeedContext,
    tau: f64,
) -> Result<BoundTerms> {
    match built {
        BuiltModel::Tong(model) => {
            let inputs = model.bound_inputs()?;
            bounds::noise_bound_terms(&inputs.two_scale, inputs.gamma_bar, &inputs.overlaps)
        }
        BuiltModel::Flux(_) => {
            let model = ctx.model.as_ref().expect("flux context carries the model");
            let overlaps = if config.noise.is_none() {
                EndpointOverlaps::zero()
            } else if let Some(o) = &config.overlaps {
                EndpointOverlaps::new(o.delta0, o.delta1, OverlapSource::ExactProjector)?
            } else {
                let process = model.noise_process()?.expect("noise installed");
                crate::schedule::endpoint_overlaps(&model.drift_schedule()?, &process, tau)?
            };
            let calibration = FluxCalibration {
                sup_n: ctx.sups.0,
                sup_ndot: ctx.sups.1,
                sup_nddot: ctx.sups.2,
                overlaps,
            };
            let inputs = model.bound_inputs(&calibration)?;
            bounds::noise_bound_terms(&inputs.two_scale, inputs.gamma_bar, &inputs.overlaps)
        }
        BuiltModel::Custom(model) => {
            let drift = model.drift_schedule()?;
            let grid = uniform_grid(config.grid_points);
            let db = derivative_norm_bounds(&drift, &grid)?;
            let profile = drift_gap_profile(&drift, &grid, 0, 0)?;
            let base = bounds::at_bound_constant(db.b1, db.b2, profile.gamma_min, 1.0, tau, 1.0)?;
            Ok(base.terms)
        }
    }
}

fn seeds_for(config: &RunConfig) -> Vec<u64> {
    config
        .noise
        .as_ref()
        .map(|n| n.seed_list())
        .unwrap_or_else(|| vec![0])
}

fn taus_for(config: &RunConfig) -> Result<Vec<f64>> {
    config
        .tau
        .as_ref()
        .ok_or_else(|| Error::Config("field `tau` is required for this command".into()))?
        .values()
}

/// Evaluate the configured bound over the tau grid.
///
/// Columns: tau, seed, bound, raw, tau_coeff, const_coeff, inv_tau_coeff,
/// endpoint.
pub fn cmd_bound(config: &RunConfig) -> Result<Dataset> {
    let taus = taus_for(config)?;
    let built = build_model(config)?;
    let mut rows = Vec::new();
    for &seed in &seeds_for(config) {
        let ctx = seed_context(config, &built, seed)?;
        for &tau in &taus {
            let terms = bound_terms_for(config, &built, &ctx, tau)?;
            let raw = terms.evaluate(tau);
            rows.push(vec![
                tau,
                seed as f64,
                raw.min(1.0),
                raw,
                terms.tau_linear_coeff,
                terms.constant_term,
                terms.inv_tau_coeff,
                terms.endpoint_term,
            ]);
        }
    }
    Ok(Dataset {
        columns: vec![
            "tau",
            "seed",
            "bound",
            "raw",
            "tau_coeff",
            "const_coeff",
            "inv_tau_coeff",
            "endpoint",
        ],
        rows,
    })
}

struct SimJob {
    tau: f64,
    seed: u64,
}

fn run_one_simulation(
    config: &RunConfig,
    built: &BuiltModel,
    ctx: &SeedContext,
    job: &SimJob,
    integrator: &IntegratorConfig,
) -> Result<(Trajectory, BoundTerms)> {
    let terms = bound_terms_for(config, built, ctx, job.tau)?;
    let trajectory = match built {
        BuiltModel::Tong(model) => {
            evolve_rotating_frame(model.planar_equivalent()?, job.tau, integrator)?
        }
        BuiltModel::Flux(_) => {
            let model = ctx.model.as_ref().expect("flux context carries the model");
            evolve_rotating_frame(model.provider(job.tau), job.tau, integrator)?
        }
        BuiltModel::Custom(model) => {
            evolve_rotating_frame(model.provider(job.tau), job.tau, integrator)?
        }
    };
    Ok((trajectory, terms))
}

/// Integrate the configured evolution for every (tau, seed) pair.
///
/// Columns: tau, seed, error (|c1| at the end), bound, steps_accepted,
/// steps_rejected. Failures are reported per row with error = NaN and the
/// sweep continues; any failure is surfaced as a numerical error after the
/// dataset is assembled.
pub fn cmd_simulate(config: &RunConfig, parallel: usize) -> Result<(Dataset, usize)> {
    let taus = taus_for(config)?;
    let built = build_model(config)?;
    let integrator = config.integrator.to_config();

    let seeds = seeds_for(config);
    let jobs: Vec<SimJob> = seeds
        .iter()
        .flat_map(|&seed| taus.iter().map(move |&tau| SimJob { tau, seed }))
        .collect();

    // Amplitude scans are per-seed, not per-job; do them up front.
    let mut contexts = std::collections::HashMap::new();
    for &seed in &seeds {
        contexts.insert(seed, seed_context(config, &built, seed)?);
    }

    let trajectory_requested = config
        .output
        .as_ref()
        .and_then(|o| o.trajectory_path.as_ref())
        .is_some();
    if trajectory_requested && jobs.len() != 1 {
        return Err(Error::Config(
            "trajectory_path requires exactly one tau and one seed".into(),
        ));
    }

    let run = |job: &SimJob| -> (Vec<f64>, Option<Trajectory>, bool) {
        let ctx = &contexts[&job.seed];
        match run_one_simulation(config, &built, ctx, job, &integrator) {
            Ok((traj, terms)) => {
                let raw = terms.evaluate(job.tau);
                let row = vec![
                    job.tau,
                    job.seed as f64,
                    traj.final_error,
                    raw.min(1.0),
                    traj.steps_accepted as f64,
                    traj.steps_rejected as f64,
                ];
                (row, Some(traj), false)
            }
            Err(_) => (
                vec![job.tau, job.seed as f64, f64::NAN, f64::NAN, 0.0, 0.0],
                None,
                true,
            ),
        }
    };

    let results: Vec<(Vec<f64>, Option<Trajectory>, bool)> = if parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallel)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        pool.install(|| jobs.par_iter().map(run).collect())
    } else {
        jobs.iter().map(run).collect()
    };

    let failures = results.iter().filter(|r| r.2).count();
    if trajectory_requested && failures == 0 {
        let path = config
            .output
            .as_ref()
            .unwrap()
            .trajectory_path
            .as_ref()
            .unwrap();
        let traj = results[0].1.as_ref().expect("single successful job");
        std::fs::write(path, trajectory_csv(traj))
            .map_err(|e| Error::Config(format!("cannot write {path}: {e}")))?;
    }

    let rows = results.into_iter().map(|r| r.0).collect();
    Ok((
        Dataset {
            columns: vec![
                "tau",
                "seed",
                "error",
                "bound",
                "steps_accepted",
                "steps_rejected",
            ],
            rows,
        },
        failures,
    ))
}

/// Columns t, re(c0), im(c0), re(c1), im(c1), |c1|.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,re_c0,im_c0,re_c1,im_c1,abs_c1\n");
    for s in &traj.samples {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.t,
            s.c0.re,
            s.c0.im,
            s.c1.re,
            s.c1.im,
            s.c1.norm()
        ));
    }
    out
}

/// Calibrate the configured noise: sampled suprema, analytic worst cases,
/// and the resulting derivative-norm and bound inputs for the flux model.
///
/// Columns: seed, sup_n, sup_ndot, sup_nddot, cap_n, cap_ndot, cap_nddot,
/// d1, d2, delta0, delta1, tau_coeff, const_coeff, inv_tau_coeff.
pub fn cmd_calibrate_noise(config: &RunConfig) -> Result<Dataset> {
    let noise_cfg = config
        .noise
        .as_ref()
        .ok_or_else(|| Error::Config("field `noise` is required for calibrate-noise".into()))?;
    let BuiltModel::Flux(model) = build_model(config)? else {
        return Err(Error::Config(
            "calibrate-noise needs the flux model (its couplings set d1, d2)".into(),
        ));
    };
    let tau_ref = config
        .tau
        .as_ref()
        .map(|t| t.values().map(|v| v[0]))
        .transpose()?
        .unwrap_or(0.01);
    let (window, samples) = calibration_window(noise_cfg, config.calibration.as_ref());

    let mut rows = Vec::new();
    for &seed in &noise_cfg.seed_list() {
        let (n1, n2) = flux_noise_pair(noise_cfg, seed)?;
        let caps1 = n1.analytic_caps();
        let caps2 = n2.analytic_caps();
        let model = model.clone().with_noise(n1, n2);
        let calibration = {
            let b1 = model
                .noise1
                .as_ref()
                .unwrap()
                .amplitude_bounds(window, samples)?;
            let b2 = model
                .noise2
                .as_ref()
                .unwrap()
                .amplitude_bounds(window, samples)?;
            let overlaps = if let Some(o) = &config.overlaps {
                EndpointOverlaps::new(o.delta0, o.delta1, OverlapSource::ExactProjector)?
            } else {
                crate::schedule::endpoint_overlaps(
                    &model.drift_schedule()?,
                    &model.noise_process()?.expect("noise installed"),
                    tau_ref,
                )?
            };
            FluxCalibration {
                sup_n: b1.sup_value.max(b2.sup_value),
                sup_ndot: b1.sup_d1.max(b2.sup_d1),
                sup_nddot: b1.sup_d2.max(b2.sup_d2),
                overlaps,
            }
        };
        let inputs = model.bound_inputs(&calibration)?;
        let terms =
            bounds::noise_bound_terms(&inputs.two_scale, inputs.gamma_bar, &inputs.overlaps)?;
        rows.push(vec![
            seed as f64,
            calibration.sup_n,
            calibration.sup_ndot,
            calibration.sup_nddot,
            caps1.value.max(caps2.value),
            caps1.d1.max(caps2.d1),
            caps1.d2.max(caps2.d2),
            inputs.two_scale.d1,
            inputs.two_scale.d2,
            calibration.overlaps.delta0,
            calibration.overlaps.delta1,
            terms.tau_linear_coeff,
            terms.constant_term,
            terms.inv_tau_coeff,
        ]);
    }
    Ok(Dataset {
        columns: vec![
            "seed",
            "sup_n",
            "sup_ndot",
            "sup_nddot",
            "cap_n",
            "cap_ndot",
            "cap_nddot",
            "d1",
            "d2",
            "delta0",
            "delta1",
            "tau_coeff",
            "const_coeff",
            "inv_tau_coeff",
        ],
        rows,
    })
}

/// One property check in the verification suite.
#[derive(Clone, Debug)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub pass: bool,
    /// Measured margin, interpreted against `threshold` by `direction`.
    pub measured: f64,
    pub threshold: f64,
    /// "<=" when the measurement must stay below the threshold, ">=" when
    /// it must exceed it.
    pub direction: &'static str,
}

impl VerifyCheck {
    fn below(name: &'static str, measured: f64, threshold: f64) -> Self {
        Self {
            name,
            pass: measured <= threshold,
            measured,
            threshold,
            direction: "<=",
        }
    }

    fn above(name: &'static str, measured: f64, threshold: f64) -> Self {
        Self {
            name,
            pass: measured >= threshold,
            measured,
            threshold,
            direction: ">=",
        }
    }

    fn failed(name: &'static str, threshold: f64) -> Self {
        Self {
            name,
            pass: false,
            measured: f64::NAN,
            threshold,
            direction: "<=",
        }
    }
}

pub fn format_verify_report(checks: &[VerifyCheck]) -> String {
    let mut out = String::new();
    for c in checks {
        out.push_str(&format!(
            "{}: {} measured={:e} {} {:e}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.direction,
            c.threshold
        ));
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    out.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    out
}

/// Run the property suite: oracle cross-checks, the counter-adiabatic
/// intertwining check, the commuting-noise null result, the projector
/// velocity cap, the overlap-estimate ordering, and the noise spectrum.
pub fn cmd_verify(seed: u64) -> Vec<VerifyCheck> {
    let mut checks = Vec::new();

    // Direct propagation against the closed-form propagator.
    checks.push(
        (|| {
            let model = TongModel::default();
            let tau = 2.0;
            let schedule = crate::schedule::HamiltonianSchedule::new(
                2,
                std::sync::Arc::new(move |s: f64| model.hamiltonian(s, tau)),
            )?;
            let u = crate::dynamics::evolve_direct(&schedule, tau, 8000)?;
            let exact = model.exact_unitary(tau);
            Ok::<_, Error>(crate::spectral::operator_two_norm(&u.sub(&exact)))
        })()
        .map(|m| VerifyCheck::below("direct-vs-exact-unitary", m, 1e-8))
        .unwrap_or_else(|_| VerifyCheck::failed("direct-vs-exact-unitary", 1e-8)),
    );

    // Rotating-frame integration against the closed-form error.
    checks.push(
        (|| {
            let model = TongModel::default();
            let mut worst = 0.0f64;
            for &frac in &[0.25, 0.5, 1.0] {
                let tau = 10.0 * frac;
                let traj = evolve_rotating_frame(
                    model.planar_equivalent()?,
                    tau,
                    &IntegratorConfig::default(),
                )?;
                worst = worst.max((traj.final_error - model.exact_error(tau)).abs());
            }
            Ok::<_, Error>(worst)
        })()
        .map(|m| VerifyCheck::below("rotating-frame-vs-exact-error", m, 1e-6))
        .unwrap_or_else(|_| VerifyCheck::failed("rotating-frame-vs-exact-error", 1e-6)),
    );

    // Counter-adiabatic driving nulls the error even for a fast sweep.
    checks.push(
        (|| {
            let model = FluxQubitModel::default_parameters();
            let drift = model.drift_schedule()?;
            let tau = 0.001;
            let augmented = crate::dynamics::counter_adiabatic_schedule(&drift, tau)?;
            let u = crate::dynamics::evolve_direct(&augmented, tau, 100_000)?;
            let ground = |s: f64| -> Result<crate::spectral::Projector> {
                let spec = crate::spectral::eigendecompose(&drift.hamiltonian(s))?;
                crate::spectral::subspace_projector(&spec, 0, 0)
            };
            crate::dynamics::adiabatic_error_operator_norm(
                &u,
                &ground(0.0)?,
                &ground(1.0)?.complement(),
            )
        })()
        .map(|m| VerifyCheck::below("counter-adiabatic-intertwining", m, 1e-6))
        .unwrap_or_else(|_| VerifyCheck::failed("counter-adiabatic-intertwining", 1e-6)),
    );

    // Commuting noise cannot leak amplitude; the transverse control must.
    checks.push(
        crate::dynamics::commuting_noise_check(
            |s| 1.0 + 0.5 * s,
            |t| 0.4 * (7.0 * t).cos(),
            8.0,
            20_000,
        )
        .map(|m| VerifyCheck::below("commuting-noise-null", m, 1e-10))
        .unwrap_or_else(|_| VerifyCheck::failed("commuting-noise-null", 1e-10)),
    );
    checks.push(
        crate::dynamics::scalar_noise_error(
            |_s| 1.0,
            |t| 0.2 * (2.0 * t).cos(),
            NoiseAxis::X,
            10.0,
            40_000,
        )
        .map(|m| VerifyCheck::above("transverse-noise-control", m, 1e-4))
        .unwrap_or_else(|_| VerifyCheck::failed("transverse-noise-control", 1e-4)),
    );

    // |P'| <= 2 D b1 / gamma on the flux drift.
    checks.push(
        (|| {
            let model = FluxQubitModel::default_parameters();
            let drift = model.drift_schedule()?;
            let fd = 1e-7;
            let mut worst = 0.0f64;
            for k in 1..100 {
                let s = k as f64 / 100.0;
                let ground = |s: f64| -> Result<crate::spectral::Projector> {
                    let spec = crate::spectral::eigendecompose(&drift.hamiltonian(s))?;
                    crate::spectral::subspace_projector(&spec, 0, 0)
                };
                let p_dot = ground(s + fd)?
                    .mat()
                    .sub(ground(s - fd)?.mat())
                    .scale(num_complex::Complex64::new(0.5 / fd, 0.0));
                let p_dot_norm = crate::spectral::operator_two_norm(&p_dot);
                let spec = crate::spectral::eigendecompose(&drift.hamiltonian(s))?;
                let gamma = spec.eigenvalues[1] - spec.eigenvalues[0];
                let b1 = crate::spectral::operator_two_norm(drift.d1(s).mat());
                worst = worst.max(p_dot_norm * gamma / (2.0 * b1));
            }
            Ok::<_, Error>(worst)
        })()
        .map(|m| VerifyCheck::below("projector-velocity-cap", m, 1.0 + 1e-6))
        .unwrap_or_else(|_| VerifyCheck::failed("projector-velocity-cap", 1.0 + 1e-6)),
    );

    // exact <= sin-theta <= coarse estimate on random two-level instances.
    checks.push(
        (|| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..40 {
                let gap: f64 = rng.random_range(0.5..3.0);
                let eps: f64 = rng.random_range(0.0..0.4) * gap / 2.0;
                let axis: f64 = rng.random_range(0.0..std::f64::consts::PI);
                let h = crate::spectral::HermitianOperator::from_pauli(0.0, 0.0, gap / 2.0, 0.0);
                let hp = crate::spectral::HermitianOperator::from_pauli(
                    eps * axis.sin(),
                    0.0,
                    gap / 2.0 + eps * axis.cos(),
                    0.0,
                );
                let s0 = crate::spectral::eigendecompose(&h)?;
                let s1 = crate::spectral::eigendecompose(&hp)?;
                let exact = crate::spectral::projector_distance(
                    &crate::spectral::subspace_projector(&s0, 0, 0)?,
                    &crate::spectral::subspace_projector(&s1, 0, 0)?,
                )?;
                let sin_t = bounds::sin_theta_delta(eps, s0.eigenvalues[1] - s1.eigenvalues[0])?;
                let bf = bounds::bauer_fike_delta(eps, gap)?;
                worst = worst.max(exact - sin_t).max(sin_t - bf);
            }
            Ok::<_, Error>(worst)
        })()
        .map(|m| VerifyCheck::below("overlap-estimate-ordering", m, 1e-12))
        .unwrap_or_else(|_| VerifyCheck::failed("overlap-estimate-ordering", 1e-12)),
    );

    // Synthesized noise carries 1/nu power per component.
    checks.push(
        (|| {
            let noise = OneOverFNoise::seeded(1e-10, 100, 2.5e3, 3.5e3, seed)?;
            let powers = noise.component_power(1.0, 70_000);
            // bin-average ten components and test flatness of power * nu
            let mut ratios = Vec::new();
            for chunk in powers.chunks(10) {
                let mean: f64 =
                    chunk.iter().map(|(nu, p)| p * nu).sum::<f64>() / chunk.len() as f64;
                ratios.push(mean);
            }
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().cloned().fold(0.0, f64::max);
            Ok::<_, Error>(hi / lo)
        })()
        .map(|m| VerifyCheck::below("noise-spectrum-inverse-frequency", m, 2.0))
        .unwrap_or_else(|_| VerifyCheck::failed("noise-spectrum-inverse-frequency", 2.0)),
    );

    checks
}
