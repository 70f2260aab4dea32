use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid algebra specification: {0}")]
    InvalidAlgebra(String),

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid Jordan frame: {0}")]
    InvalidFrame(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("structural failure: {0}")]
    StructuralFailure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inconsistent regression constants: {0}")]
    InconsistentConstants(String),

    #[error("case classification failed: {0}")]
    Classification(String),
}
