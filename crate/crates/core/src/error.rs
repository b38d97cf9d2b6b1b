use alloc::string::String;

/// Errors raised by the operator algebra, canonical forms and oracle.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("fiber rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("shape mismatch: expected a column of length {expected}, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("operator is not self-adjoint")]
    NotSelfAdjoint,
    #[error("operator is not skew-adjoint")]
    NotSkewAdjoint,
    #[error("symmetry violation in order-{order} symbol")]
    SymmetryViolation { order: usize },
    #[error("malformed canonical form: {0}")]
    MalformedCanonical(String),
    #[error("operation requires fiber rank 1, got {0}")]
    RequiresScalar(usize),
    #[error("operator does not annihilate constants")]
    ConstantsNotAnnihilated,
    #[error("operator order is below 2")]
    OrderTooLow,
    #[error("coordinate symbols are unsupported on the torus")]
    CoordinateOnTorus,
    #[error("unassigned symbol `{0}`")]
    Unassigned(String),
}

pub type Result<T> = core::result::Result<T, Error>;
