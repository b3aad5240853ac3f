use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
///
/// The variants follow the failure classes the CLI maps onto exit codes:
/// bad arguments (`Usage`), undefined math (`Domain`), inputs that are not
/// valid quantum or probabilistic objects (`Validation`), and work that
/// would exceed a configured budget (`Resource`).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("resource error: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn validation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
