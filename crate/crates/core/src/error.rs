use alloc::string::String;

/// Errors raised by the engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension {0} outside supported range 1..={max}", max = crate::MAX_DIM)]
    Dimension(usize),
    #[error("value count mismatch: expected {expected}, found {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("range violation: value {value} at index {index} outside {range}")]
    Range {
        index: usize,
        value: f64,
        range: &'static str,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("function is not 0/1-valued")]
    NotIndicator,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("dimension {n} too large for exact mode (limit {limit})")]
    TooLargeForExact { n: usize, limit: usize },
    #[error("function has no level-1 weight")]
    NoLevelOneWeight,
    #[error("unknown function name: {0}")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
