use thiserror::Error;

/// Errors raised by the algebraic and combinatorial constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("composite of consecutive differentials is nonzero at degree {degree}")]
    CompositionNonzero { degree: usize },
    #[error("induced map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("differential does not preserve the normalized subcomplex at degree {degree}")]
    RestrictionEscapes { degree: usize },
    #[error("a field of coefficients is required")]
    FieldRequired,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("truncation exceeded: need dimension {needed}, model certifies up to {available}")]
    TruncationExceeded { needed: usize, available: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("map is not surjective: {0}")]
    NotSurjective(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
