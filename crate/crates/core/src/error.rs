use std::fmt;

use thiserror::Error;

/// The density-matrix property that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateInvariant {
    Trace,
    Hermiticity,
    Positivity,
}

impl fmt::Display for StateInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            StateInvariant::Trace => "trace",
            StateInvariant::Hermiticity => "hermiticity",
            StateInvariant::Positivity => "positivity",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed arguments that do not fit the operation (dimensions, names, configs).
    #[error("usage error: {0}")]
    Usage(String),

    /// Input is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid density matrix: {invariant} violated (deviation {deviation:.3e})")]
    InvalidState {
        invariant: StateInvariant,
        deviation: f64,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("singular system: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    Singular { pivot: f64, threshold: f64 },

    #[error("steady state is not unique: {0}")]
    Multiplicity(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
