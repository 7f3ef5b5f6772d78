use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid norm exponent {0}: p must be a finite real >= 1 or `inf`")]
    InvalidNorm(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("index {index} out of range for a profile of {n} agents")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("mechanism `{mechanism}` needs exactly {expected} agents, got {got}")]
    ArityMismatch {
        mechanism: String,
        expected: usize,
        got: usize,
    },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("no sign change found on (0, {max_bound}]")]
    NoRootFound { max_bound: f64 },

    #[error("invalid root query: {0}")]
    InvalidQuery(String),

    #[error("distribution has an atom at {location}, outside [0, {upper}]")]
    UnsupportedSupport { location: f64, upper: f64 },

    #[error("optimum of adversarial profile {j} sits at {location}, residual above tolerance {tolerance}")]
    OptMismatch {
        j: usize,
        location: f64,
        tolerance: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
