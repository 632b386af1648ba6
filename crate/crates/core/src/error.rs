use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Several variants (`NotClassConstant`, `DecompositionFailure`,
/// `InvolutionFailure`) can only fire on an internal bug; they are reported
/// rather than panicking so that corpus runs can isolate the entry.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("order cap exceeded: {what} has order above {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("chain budget exceeded: more than {budget} chains")]
    BudgetExceeded { budget: u64 },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not p-integral for p = {p}")]
    NotPIntegral { p: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coefficient function is not class constant: {0}")]
    NotClassConstant(String),
    #[error("central idempotent is not a sum of block idempotents: {0}")]
    DecompositionFailure(String),
    #[error("subgroup does not lie in the chain stabilizer")]
    PNotInStabilizer,
    #[error("involution needs a nontrivial p-subgroup")]
    PTrivial,
    #[error("unsupported point structure: {0}")]
    UnsupportedPointStructure(String),
    #[error("involution check failed: {0}")]
    InvolutionFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
