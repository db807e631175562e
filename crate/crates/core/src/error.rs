use thiserror::Error;

/// Errors raised by evaluation, zero enumeration and the physics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("numeric degeneracy: {0}")]
    NumericDegeneracy(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("insufficient levels: need {needed}, table has {available}")]
    InsufficientLevels { needed: usize, available: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
