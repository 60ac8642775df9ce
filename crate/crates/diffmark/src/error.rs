use thiserror::Error;

/// Errors produced by the toolkit.
///
/// `Config` maps to CLI exit code 2, `Internal` to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid user-supplied configuration or parameters.
    #[error("config error: {0}")]
    Config(String),

    /// Input value outside its declared domain (token id, hash value, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A context position needed for hashing is masked or out of range.
    /// Callers decide whether to skip the position or fail.
    #[error("context unavailable at position {position}: {reason}")]
    ContextUnavailable { position: usize, reason: String },

    /// Numerical invariant violated (negative mass, non-finite exponent, ...).
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
