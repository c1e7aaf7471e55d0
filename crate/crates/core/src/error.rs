use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} must have degree {expected}, found {found}")]
    Degree {
        what: String,
        expected: usize,
        found: String,
    },
    #[error("{0} is not closed")]
    NotClosed(String),
    #[error("closure condition dH0 + e·ê = 0 fails")]
    ClosureCondition,
    #[error("gauge condition H - H' = dB fails")]
    GaugeCondition,
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("not a chain map: commutation fails at slot {slot}")]
    NotChainMap { slot: usize },
    #[error("incompatible complexes: {0}")]
    Incompatible(String),
    #[error("witness rejected: {0}")]
    Witness(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
