//! Error type shared by every module.

use thiserror::Error;

/// Failure modes of the library, one variant per error class.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("catalog data error: {0}")]
    CatalogData(String),
    #[error("classification error: {0}")]
    Classification(String),
    #[error("dispatch error: {0}")]
    Dispatch(String),
    #[error("incompleteness error: {0}")]
    Incomplete(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("verification error: {0}")]
    Verification(String),
    #[error("unsupported closed form: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
