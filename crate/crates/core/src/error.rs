use thiserror::Error;

/// Errors produced by constructors, map evaluations, and the harness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty coordinate vector")]
    EmptyVector,
    #[error("negative coordinate {value} at position {index}")]
    NegativeCoordinate { index: usize, value: i64 },
    #[error("coordinate vectors have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("constraint x_n * xbar_n = 0 violated ({upper} * {lower} != 0)")]
    ConstraintViolation { upper: i64, lower: i64 },
    #[error("invalid shape: l must be >= 1")]
    InvalidShape,
    #[error("rank n = {n} is not supported here (need n >= {min})")]
    UnsupportedRank { n: usize, min: usize },
    #[error("index {index} out of range (valid: {min}..={max})")]
    IndexOutOfRange { index: usize, min: usize, max: usize },
    #[error("elements have different ranks ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("limit did not stabilize below the saturation cap")]
    NotStabilized,
    #[error("carrier margin too small: output changed under x_n -> x_n + 1")]
    MarginTooSmall,
    #[error("block {block} is not in canonical order")]
    NotCanonicallyOrdered { block: usize },
    #[error("invalid carrier species: {species}")]
    InvalidSpecies { species: String },
    #[error("negative input {value} at argument {index}")]
    NegativeInput { index: usize, value: i64 },
    #[error("shape bookkeeping failed: {0}")]
    ShapeMismatch(String),
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("configuration error: {0}")]
    ConfigError(String),
    #[error("unknown verification suite: {0}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
