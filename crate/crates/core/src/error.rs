use thiserror::Error;

use crate::sets::SubsetIndex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("subset {subset:?} is not a coordinate of the system")]
    UnknownCoordinate { subset: SubsetIndex },

    /// Integer coefficient arithmetic left the `i64` range.
    #[error("integer coefficient overflow")]
    Overflow,

    /// Fourier-Motzkin produced more rows than the configured budget allows.
    #[error("budget exhausted after {derived} derived rows (limit {limit})")]
    BudgetExhausted { derived: u64, limit: u64 },

    #[error("incompatible marginal model: {0}")]
    Incompatible(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
