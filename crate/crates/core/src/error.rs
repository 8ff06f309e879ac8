use thiserror::Error;

/// Errors produced by the spectra toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty interval list")]
    EmptyInput,
    #[error("interval ({left}, {right}) has left >= right")]
    DegenerateInterval { left: String, right: String },
    #[error("exact and floating endpoints cannot be mixed in one interval union")]
    MixedRepresentation,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("budget exhausted: {0}")]
    BudgetExceeded(String),
    #[error("operation requires the exact-rational path: {0}")]
    NotRational(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("point {0} lies outside the numeric zero-set window")]
    OutsideWindow(f64),
    #[error("basis is not a generating set for its reference window")]
    NotGenerating,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
