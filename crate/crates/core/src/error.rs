use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input data with inconsistent shapes or invalid values.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// An operation was called outside its domain.
    #[error("{0}")]
    Precondition(String),

    /// The input exceeds a configured enumeration limit.
    #[error("resource limit: {what} has {actual} hyperplanes, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error("resolution data required: {0}")]
    MissingResolution(String),
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
