use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("input is not square: {rows} rows, {cols} cols")]
    NonSquare { rows: usize, cols: usize },

    #[error("operator violates Hermiticity: max |A - A^dag| entry = {max_violation:.3e} (tolerance {tolerance:.3e})")]
    NonHermitian { max_violation: f64, tolerance: f64 },

    #[error("index out of range: requested {index}, dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("projector rank mismatch: {rank1} vs {rank2}")]
    RankMismatch { rank1: usize, rank2: usize },

    #[error("degenerate spectrum: {context}")]
    DegenerateSpectrum { context: String },

    #[error("spectral gap closes at s = {s}: gamma = {gamma:.6e}")]
    GapClosure { s: f64, gamma: f64 },

    #[error("bound inapplicable: {reason}")]
    InapplicableBound { reason: String },

    #[error("environment too hot: |H_env| + 2 sup eps|Delta| = {w:.6e} >= gap {gamma:.6e}")]
    EnvironmentTooHot { w: f64, gamma: f64 },

    #[error("sampling window too short: need at least {required:.6e} us, got {got:.6e} us")]
    WindowTooShort { required: f64, got: f64 },

    #[error("non-finite evaluation at {variable} = {at}")]
    NonFiniteEvaluation { variable: &'static str, at: f64 },

    #[error("step criterion violated: |H| tau / steps = {got:.3e} exceeds {limit:.3e}")]
    StepCriterion { got: f64, limit: f64 },

    #[error("integration failed at t = {t:.6e}: {reason} ({accepted} accepted, {rejected} rejected steps)")]
    IntegrationFailure {
        t: f64,
        reason: String,
        accepted: usize,
        rejected: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
