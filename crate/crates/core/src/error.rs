use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("Hamming weight mismatch: {left} vs {right}")]
    WeightMismatch { left: usize, right: usize },

    #[error("bitstring of length {0} is too short for a cut point")]
    TooShort(usize),

    #[error("weight {weight} does not match bitstring (expected {expected})")]
    WrongWeight { weight: usize, expected: usize },

    #[error("zero-lengths runs sum to {sum}, expected {expected}")]
    InvalidRunSum { sum: usize, expected: usize },

    #[error("zero-lengths coding has {got} entries, expected {expected}")]
    InvalidRunCount { got: usize, expected: usize },

    #[error("position {position} out of range 1..={max}")]
    PositionOutOfRange { position: usize, max: usize },

    #[error("duplicate position {0}")]
    DuplicatePosition(usize),

    #[error("truth table length {0} is not a power of two >= 2")]
    BadTableLength(usize),

    #[error("bent fitness requires an even number of variables, got {0}")]
    OddVariableCount(u32),

    #[error("invalid orthogonal array parameters: {0}")]
    BadOaParameters(String),

    #[error("invalid column subset: {0}")]
    BadColumnSubset(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty sample")]
    EmptySample,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
