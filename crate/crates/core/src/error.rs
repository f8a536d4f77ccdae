use thiserror::Error;

/// Errors raised by constructions, transforms and exponent calculators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("construction requires odd characteristic, got p = 2")]
    EvenCharacteristic,
    #[error("space F_{p}^{d} has more than {cap} points")]
    SpaceTooLarge { p: u32, d: usize, cap: usize },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("operands live in different spaces")]
    SpaceMismatch,
    #[error("index {index} out of range for a space of {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("exponent must be at least {min}, got {got}")]
    ExponentTooSmall { min: f64, got: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("set is empty")]
    EmptySet,
    #[error("set has {size} points, above the verification cap of {cap}")]
    SetTooLarge { size: usize, cap: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("≥ {required} field sizes required, got {got}")]
    TooFewFieldSizes { required: usize, got: usize },
    #[error("{family} at p = {p}: {source}")]
    Family {
        family: String,
        p: u32,
        #[source]
        source: Box<Error>,
    },
    #[error("no admissible averaging exponent")]
    NoAdmissibleExponent,
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
