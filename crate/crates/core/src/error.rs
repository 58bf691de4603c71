//! Crate-wide error type.
//!
//! Variants are grouped by how the CLI reports them: parse errors (exit 2),
//! precondition violations (exit 3), and internal consistency failures
//! (exit 4; these always indicate a bug, e.g. the two independent dual-graph
//! routes disagreeing).

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Syntax error in a series/polynomial expression, with 1-based position.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// A documented precondition of an operation does not hold.
    #[error("{0}")]
    Precondition(String),

    /// A matrix that must be invertible is singular; carries the rank found.
    #[error("singular matrix (rank {rank})")]
    SingularMatrix { rank: usize },

    /// Two routes that must agree disagreed, or an internal invariant broke.
    /// Always a bug.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn inconsistency(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }

    /// Exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Precondition(_) | Error::SingularMatrix { .. } => 3,
            Error::Inconsistency(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
