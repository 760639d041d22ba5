use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("homogeneous coordinate vector is zero")]
    ZeroPoint,
    #[error("line defined by coincident points")]
    DegenerateLine,
    #[error("lines are identical")]
    IdenticalLines,
    #[error("empty point list")]
    EmptyInput,
    #[error("line does not pass through the given point")]
    PointNotOnLine,
    #[error("duplicate line: {0}")]
    DuplicateLine(String),
    #[error("invalid grid line: {0}")]
    InvalidGridLine(String),
    #[error("color {color} is not in the color set")]
    ColorNotInSet { color: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("structure has the wrong shape: {0}")]
    WrongShape(String),
    #[error("retry budget exhausted after {attempts} attempts: {reason}")]
    RetriesExhausted { attempts: usize, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
