use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range {lo}..={hi}")]
    Range { index: u64, lo: u64, hi: u64 },

    #[error("separator {sep:?} already occurs in the input")]
    InvalidSeparator { sep: char },

    #[error("invalid run-length string: {0}")]
    InvalidRle(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("duplicate key {0}")]
    DuplicateKey(u64),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("resource bound exceeded: {work} > {bound}")]
    Resource { work: u128, bound: u128 },

    #[error("reduction failed: {0}")]
    Reduction(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn range(index: u64, lo: u64, hi: u64) -> Self {
        Error::Range { index, lo, hi }
    }
}
