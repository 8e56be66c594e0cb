//! Shared error type.

/// Errors shared by all modules of the crate.
///
/// Outcomes that are legitimate results rather than failures (an
/// inconsistent linear system, a non-point-shaped basis, a missing
/// interpolation witness) are modeled as enum results on the operations
/// that produce them, not as errors here.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus is not prime: {0}")]
    NotPrime(u64),
    #[error("modulus {0} too large (must be < 2^63)")]
    ModulusTooLarge(u64),
    #[error("division by zero in GF({p})")]
    DivisionByZero { p: u64 },
    #[error("modulus mismatch: GF({left}) vs GF({right})")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("arity mismatch: expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("term budget exceeded: reached {reached} terms, budget {budget}")]
    TermBudgetExceeded { budget: usize, reached: usize },
    #[error(
        "iteration cap exceeded after {pairs_processed} pair reductions \
         ({pairs_remaining} queued, max intermediate degree {max_degree})"
    )]
    IterationCapExceeded {
        pairs_processed: usize,
        pairs_remaining: usize,
        max_degree: i64,
    },
    #[error("operation mode unavailable: {0}")]
    ModeUnavailable(&'static str),
    #[error("base point maps to parameter zero")]
    IdentityBase,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("degenerate conic (interpolation points do not span a plane conic)")]
    DegenerateConic,
    #[error("retries exhausted after {attempts} attempts; failures: {failures:?}")]
    RetriesExhausted {
        attempts: usize,
        failures: Vec<String>,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
