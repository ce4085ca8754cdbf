use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A graph-spec string or constructor argument was rejected.
    #[error("invalid graph spec: {0}")]
    Spec(String),

    /// A vertex literal or byte encoding is malformed or not in canonical form.
    #[error("malformed vertex: {0}")]
    Encoding(String),

    /// A search or table would exceed its configured size cap.
    #[error("capacity exceeded: {what} needs more than {cap} entries")]
    Capacity { what: &'static str, cap: u64 },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
