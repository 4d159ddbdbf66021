use thiserror::Error;

/// Errors produced by the exact linear algebra layer and everything built on it.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be < 2^61)")]
    ModulusTooLarge(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("not a basis: columns are linearly dependent")]
    NotABasis,
    #[error("no left inverse: matrix does not have full column rank")]
    NoLeftInverse,
    #[error("matrix is singular")]
    Singular,
    #[error("transpose-basis decomposition degenerates: {0}")]
    DegenerateDecomposition(String),
    #[error("binomial undefined: k = {k} exceeds l = {l}")]
    BinomialRange { l: u64, k: u64 },
    #[error("randomization budget exhausted after {attempts} attempts: {detail}")]
    RetryBudget { attempts: u32, detail: String },
    #[error("invalid network: {0}")]
    Network(String),
    #[error("rank/min-cut cross-check failed: {0}")]
    CutRankMismatch(String),
    #[error("containment violated: {0}")]
    ContainmentViolation(String),
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),
    #[error("rank prescription is unsatisfiable: {0}")]
    UnsatisfiableRanks(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
