use thiserror::Error;

use crate::formal::Space;

/// Syntax error with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognitionError {
    /// Not enough q-coefficients (or a degenerate system) to pin down the coefficients.
    #[error("underdetermined: need {needed} q-coefficients, have {available}")]
    Underdetermined { needed: usize, available: usize },
    /// The series is not in the span of the weight-K monomials.
    #[error("no solution: series is not quasimodular of weight {weight} (first mismatch at q^{first_mismatch})")]
    NoSolution { weight: u32, first_mismatch: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("mixed weights {first} and {second} in one element")]
    MixedWeight { first: u32, second: u32 },
    #[error("mixed spaces in one element")]
    MixedSpace,
    #[error("expected an element of {expected}, found {found}")]
    WrongSpace { expected: Space, found: Space },
    #[error("expected weight {expected}, found weight {found}")]
    WrongWeight { expected: u32, found: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Recognition(#[from] RecognitionError),
    #[error("series is not odd: coefficient of X^{r} Y^{s} is nonzero")]
    ParityViolation { r: u32, s: u32 },
    #[error("substitution sends the denominator form {0} to zero")]
    DegenerateForm(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
