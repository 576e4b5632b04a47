use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("divergent series: {0}")]
    Divergent(String),
    #[error("bottom parameter {0} is a nonpositive integer not dominated by a terminating top parameter")]
    InadmissibleBottom(String),
    #[error("series did not converge within {terms} terms (last spread {spread:e})")]
    NoConvergence { terms: usize, spread: f64 },
    #[error("characteristic polynomial degenerates: (c-b-m)_m = 0")]
    DegenerateQ,
    #[error("root finding failed: residual {residual:e} after {iterations} iterations")]
    RootFindingFailure { residual: f64, iterations: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("expanded parameter vector has coincident entries {0} and {1}")]
    DuplicateBeta(String, String),
    #[error("sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("no registered cross-check between {0}")]
    UnregisteredPair(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
