//! `adiabound`: bounds and simulations for noisy adiabatic two-level
//! evolutions.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 property-suite failure.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use adiabound::cli::{
    cmd_bound, cmd_calibrate_noise, cmd_simulate, cmd_verify, format_verify_report, Dataset,
    OutputFormat, RunConfig, TauSpec,
};
use adiabound::Error;

#[derive(Parser)]
#[command(name = "adiabound", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured error bound over a tau grid.
    Bound(RunArgs),
    /// Integrate the configured evolution and report final errors.
    Simulate(SimulateArgs),
    /// Calibrate noise amplitude bounds and derived inputs.
    CalibrateNoise(RunArgs),
    /// Run the built-in property suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: std::path::PathBuf,
    /// Override the tau grid: "a,b,c" or "start:stop:count[:log]".
    #[arg(long)]
    tau: Option<String>,
    /// Override the noise seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the dataset here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Output format (csv or json); overrides the config.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Worker threads for the sweep (output is identical regardless).
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn parse_tau_flag(text: &str) -> Result<TauSpec, Error> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() < 3 || parts.len() > 4 {
            return Err(Error::Config(
                "tau range must be start:stop:count[:log]".into(),
            ));
        }
        let parse = |s: &str| -> Result<f64, Error> {
            s.parse::<f64>()
                .map_err(|_| Error::Config(format!("bad tau component `{s}`")))
        };
        let start = parse(parts[0])?;
        let stop = parse(parts[1])?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| Error::Config(format!("bad tau count `{}`", parts[2])))?;
        let log = match parts.get(3) {
            None => false,
            Some(&"log") => true,
            Some(other) => {
                return Err(Error::Config(format!(
                    "unknown tau range suffix `{other}` (expected `log`)"
                )))
            }
        };
        Ok(TauSpec::Range {
            start,
            stop,
            count,
            log,
        })
    } else {
        let values: Result<Vec<f64>, Error> = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad tau value `{s}`")))
            })
            .collect();
        Ok(TauSpec::List(values?))
    }
}

fn load_config(args: &RunArgs) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut config = RunConfig::from_json(&text)?;
    if let Some(tau) = &args.tau {
        config.tau = Some(parse_tau_flag(tau)?);
        config.validate()?;
    }
    if let Some(seed) = args.seed {
        match &mut config.noise {
            Some(noise) => {
                noise.seed = seed;
                noise.seeds = None;
            }
            None => {
                return Err(Error::Config(
                    "--seed given but the config has no noise section".into(),
                ))
            }
        }
    }
    Ok(config)
}

fn resolve_format(args: &RunArgs, config: &RunConfig) -> Result<OutputFormat, Error> {
    if let Some(f) = &args.format {
        return match f.as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown format `{other}` (expected csv or json)"
            ))),
        };
    }
    Ok(config.output.as_ref().map(|o| o.format).unwrap_or_default())
}

fn emit(ds: &Dataset, args: &RunArgs, config: &RunConfig) -> Result<(), Error> {
    let format = resolve_format(args, config)?;
    let rendered = ds.render(format);
    let path = args.out.clone().or_else(|| {
        config
            .output
            .as_ref()
            .and_then(|o| o.path.clone().map(Into::into))
    });
    match path {
        Some(p) => std::fs::write(&p, rendered)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_) => 1,
        _ => 2,
    }
}

fn run() -> Result<u8, Error> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successes; anything else is a config error
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().ok();
            return Ok(code);
        }
    };
    match cli.command {
        Command::Bound(args) => {
            let config = load_config(&args)?;
            let ds = cmd_bound(&config)?;
            emit(&ds, &args, &config)?;
            Ok(0)
        }
        Command::Simulate(args) => {
            let config = load_config(&args.run)?;
            let (ds, failures) = cmd_simulate(&config, args.parallel)?;
            emit(&ds, &args.run, &config)?;
            if failures > 0 {
                eprintln!("{failures} simulation row(s) failed");
                Ok(2)
            } else {
                Ok(0)
            }
        }
        Command::CalibrateNoise(args) => {
            let config = load_config(&args)?;
            let ds = cmd_calibrate_noise(&config)?;
            emit(&ds, &args, &config)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let checks = cmd_verify(args.seed);
            print!("{}", format_verify_report(&checks));
            if checks.iter().all(|c| c.pass) {
                Ok(0)
            } else {
                Ok(3)
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
