use thiserror::Error;

/// Errors produced by the exact-algebra layers and the certification
/// pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} outside the supported range [32003, 2^62)")]
    PrimeOutOfRange(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("general-position sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),

    #[error("invalid tuple: {0}")]
    InvalidTuple(String),

    #[error("degree obstruction: r = {r} exceeds deg F = {d}")]
    DegreeObstruction { r: usize, d: usize },

    #[error("not decomposable with these forms")]
    NotDecomposable,
}

pub type Result<T> = std::result::Result<T, Error>;
