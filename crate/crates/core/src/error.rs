use thiserror::Error;

/// Errors raised by the capacity computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid channel configuration: {0}")]
    InvalidConfig(String),

    #[error("load gamma must be finite and > 0, got {0}")]
    InvalidGamma(f64),

    #[error("invalid input distribution: {0}")]
    InvalidDistribution(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms (partial sum {partial})")]
    SeriesNotConverged { terms: usize, partial: f64 },

    #[error("optimizer failure: {0}")]
    Optimizer(String),

    #[error("enumeration refused: {states} states exceed cap {cap}")]
    EnumerationCap { states: f64, cap: u64 },

    #[error("simulator refused: {0}")]
    SimulatorRefusal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
