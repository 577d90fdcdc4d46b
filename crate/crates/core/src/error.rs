use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical kernel, the switching models, the protocol
/// and configuration loading.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is singular or numerically singular")]
    Singular,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("discrete Lyapunov series diverged after {terms} terms (spectral radius >= 1)")]
    Divergence { terms: usize },

    #[error("matrix is not row-stochastic: {0}")]
    NotStochastic(String),

    #[error("chain is reducible: mode {from} cannot reach mode {to}")]
    Reducible { from: usize, to: usize },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("invalid switching law: {0}")]
    InvalidLaw(String),

    #[error("invalid sojourn distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("time {t} outside [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },

    #[error("overflow symbol cannot be decoded to a box center; protocol must reset")]
    OverflowSymbol,

    #[error("bit string has length {got}, expected {expected}")]
    BitLength { got: usize, expected: usize },

    #[error("symbol field out of range: {0}")]
    SymbolRange(String),

    #[error(
        "finite data-rate condition violated for mode {mode}: ||exp(A tau)|| = {lambda:.6} >= N = {levels}"
    )]
    DataRate {
        mode: usize,
        lambda: f64,
        levels: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("overflow symbol emitted at sample {sample} under a sound estimate")]
    SoundnessBreach { sample: usize },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("failed to parse config: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
