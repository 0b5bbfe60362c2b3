use thiserror::Error;

use crate::grid::{Cell, Line};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("no alpha in [{lo}, {hi}] is coprime to {n}")]
    NoValidAlpha { n: usize, lo: usize, hi: usize },

    #[error("no array found within the search budget of {budget} nodes")]
    NoArrayFound { budget: u64 },

    #[error("no merge parameters found: {0}")]
    NoParameters(String),

    #[error("{line} is not simple: partial sums {first} and {second} agree modulo {modulus}")]
    NotSimple {
        line: Line,
        first: usize,
        second: usize,
        modulus: u64,
    },

    #[error("edge {{{}, {}}} is covered by cycles {first} and {second}", .edge.0, .edge.1)]
    NotADecomposition {
        edge: (u64, u64),
        first: usize,
        second: usize,
    },

    #[error("cell {0:?} is claimed by both arrays")]
    Overlap(Cell),

    #[error("integer overflow")]
    Overflow,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
