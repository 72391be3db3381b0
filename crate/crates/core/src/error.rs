use thiserror::Error;

/// Errors raised by the numeric core and the descriptor parsers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("indeterminate product 0 * infinity")]
    IndeterminateProduct,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation requires dimension {required}, found {found}")]
    UnsupportedDimension { required: usize, found: usize },
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("degenerate direction: Q(a + b) = 0")]
    DegenerateDirection,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("all {requested} samples fell inside the singular exclusion zone")]
    AllSamplesExcluded { requested: usize },
    #[error("flow at z = infinity is unbounded for this solution")]
    UnboundedFlow,
    #[error("iterate diverged at step {step}")]
    IterateDiverged { step: usize },
    #[error("input must be positive, got {0}")]
    NonPositiveInput(f64),
    #[error("f({u}) = {fu} exceeds its argument; not a solution on (0, inf)")]
    NotAOneDSolution { u: f64, fu: f64 },
    #[error("input vector is zero")]
    ZeroInput,
    #[error("direction is parallel to the exceptional vector")]
    DirectionParallelToA,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
