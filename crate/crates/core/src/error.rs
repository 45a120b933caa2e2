use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cell is empty")]
    EmptyCell,
    #[error("box truncation did not stabilize: values {0:?}")]
    NotStabilized(Vec<i64>),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("initial form is zero")]
    ZeroInitialForm,
    #[error("no point count for symbol {0}")]
    MissingSymbol(String),
    #[error("coefficient denominator divisible by {q}")]
    BadReduction { q: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid stratum: {0}")]
    InvalidStratum(String),
    #[error("malformed fan: {0}")]
    MalformedFan(String),
    #[error("hypersurface is not schön: {0}")]
    NotSchoen(String),
    #[error("not weighted homogeneous: {0}")]
    NotWeightedHomogeneous(String),
    #[error("not equivariant: {0}")]
    NotEquivariant(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
