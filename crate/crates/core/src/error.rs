use thiserror::Error;

use crate::lattice::ZViolation;

/// Errors produced by the library.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("element {0} not found")]
    NotFound(usize),

    #[error("cyclic flat axioms violated: {0}")]
    AxiomViolation(ZViolation),

    #[error("unsupported rank {0}; only ranks 2 and 3 are handled")]
    UnsupportedRank(usize),

    #[error("unsupported ground set size {n} (maximum {max})")]
    UnsupportedSize { n: usize, max: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
