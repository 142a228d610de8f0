use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the supported domain of an operation.
    #[error("out of range: {0}")]
    Range(String),

    /// Input was well-formed but violates a documented precondition.
    #[error("invalid input: {0}")]
    Validation(String),

    /// The requested work would exceed a configured cap.
    #[error("resource cap `{cap}` exceeded: {detail}")]
    Resource { cap: &'static str, detail: String },

    /// A proven statement failed to hold. Never expected in practice.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn resource(cap: &'static str, detail: impl Into<String>) -> Self {
        Error::Resource {
            cap,
            detail: detail.into(),
        }
    }
}
