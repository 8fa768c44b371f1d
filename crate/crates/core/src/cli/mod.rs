//! Command-line front end: configuration schema and subcommand
//! implementations. The binary in `main.rs` is a thin dispatcher over this
//! module so everything here stays testable in-process.

pub mod commands;
pub mod config;

pub use commands::{
    cmd_bound, cmd_calibrate_noise, cmd_simulate, cmd_verify, format_verify_report, Dataset,
    VerifyCheck,
};
pub use config::{
    ModelConfig, NoiseConfig, OutputConfig, OutputFormat, RunConfig, TauSpec, SCHEMA_VERSION,
};
