use thiserror::Error;

/// Errors raised by the library. Verification *failures* are never errors;
/// they are reported through the report types.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    NotOddPrime(u64),

    #[error("element has no inverse: zero in Z_{0}")]
    ZeroInverse(u32),

    #[error("modulus mismatch: Z_{0} vs Z_{1}")]
    ModulusMismatch(u32, u32),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero vector has no completion")]
    ZeroVector,

    #[error("input is not a Lagrangian semibasis")]
    NotASemibasis,

    #[error("tuple does not satisfy the third-level polynomial system")]
    InvalidTuple,

    #[error("dimension too large: d = {d} exceeds limit {limit}")]
    DimensionTooLarge { d: u32, limit: u32 },

    #[error("the first tuple element has a nonzero quadratic part")]
    PreconditionPhi1Nonzero,

    #[error("no nonzero pivot found during fraction-free elimination")]
    AllPivotsZero,

    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),

    #[error("coefficient {coeff} has a denominator divisible by {p}")]
    NonInvertibleDenominator { coeff: String, p: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
