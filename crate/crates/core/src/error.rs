use std::fmt;

use thiserror::Error;

use crate::groebner::PartialBasis;

/// A syntax error in a polynomial, matrix, or rational literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    /// Byte offset into the input where the problem was detected.
    pub position: usize,
}

impl ParseError {
    pub fn new(message: impl Into<String>, position: usize) -> Self {
        ParseError {
            message: message.into(),
            position,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at byte {})", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible operands: {0}")]
    Incompatible(String),

    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("no leading term: zero polynomial")]
    NoLeadingTerm,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("contradictory ansatz: {0}")]
    ContradictoryAnsatz(String),

    #[error("resource limit: {}", .0.reason)]
    ResourceLimit(Box<PartialBasis>),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid input file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
