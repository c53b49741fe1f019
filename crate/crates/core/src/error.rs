use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar literal {literal:?}")]
pub struct ParseScalarError {
    pub literal: String,
}

impl ParseScalarError {
    pub fn new(literal: &str) -> Self {
        Self {
            literal: literal.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    Singular,
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DouglasError {
    #[error("range of A is not contained in range of B")]
    RangeNotIncluded,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplementError {
    #[error("operator is not complementable: {0}")]
    NotComplementable(&'static str),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("truncation size {size} is below the minimum {min} for this band width")]
    SizeTooSmall { size: usize, min: usize },
    #[error("invalid coefficient function: {0}")]
    BadCoefficient(String),
    #[error("invalid index set: {0}")]
    BadIndexSet(String),
    #[error("grid must be non-empty and strictly increasing")]
    BadGrid,
}

/// Malformed JSON input; `field` names the offending location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{field}: {message}")]
pub struct FormatError {
    pub field: String,
    pub message: String,
}

impl FormatError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}
