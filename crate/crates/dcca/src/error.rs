//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by generation, estimation and the Monte Carlo harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DccaError {
    /// Fractional differencing order outside the supported domain.
    #[error("fractional differencing order must be finite and > -0.5, got d = {0}")]
    InvalidOrder(f64),

    /// Fractional differencing order outside the generator's grid domain.
    #[error("ARFIMA order must lie in (-0.5, 1.5], got d = {0}")]
    OrderOutOfRange(f64),

    /// Innovation correlation outside [-1, 1].
    #[error("innovation correlation must be finite with |rho| <= 1, got rho = {0}")]
    InvalidCorrelation(f64),

    /// A series is shorter than the operation requires.
    #[error("series too short: need length >= {min}, got {len}")]
    SeriesTooShort { min: usize, len: usize },

    /// A non-finite observation was encountered.
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    /// Window scale outside 4 <= s <= T.
    #[error("scale s = {s} out of range: need 4 <= s <= T = {len}")]
    InvalidScale { s: usize, len: usize },

    /// The two input series have different lengths.
    #[error("length mismatch: x has {x} observations, y has {y}")]
    LengthMismatch { x: usize, y: usize },

    /// A fluctuation or variance that must be strictly positive is zero,
    /// leaving the coefficient undefined. `quantity` names the offending
    /// term, e.g. "F²_DFA,x".
    #[error("degenerate input: {quantity} is zero, coefficient undefined")]
    DegenerateInput { quantity: &'static str },

    /// Empty sample passed to an aggregation routine.
    #[error("cannot aggregate an empty sample")]
    EmptySample,

    /// Monte Carlo grid parameters failed validation.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// An estimate escaped the mathematically guaranteed [-1, 1] range.
    #[error("estimate {value} outside [-1, 1] for {context}")]
    EstimateOutOfBounds { value: f64, context: String },

    /// Rows handed to the report writer or renderer are unusable.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// An aggregate CSV does not match the report schema.
    #[error("csv schema mismatch at line {line}: {message}")]
    CsvSchema { line: usize, message: String },

    /// I/O failure while writing reports or charts.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for DccaError {
    fn from(err: std::io::Error) -> Self {
        DccaError::Io(err.to_string())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, DccaError>;
