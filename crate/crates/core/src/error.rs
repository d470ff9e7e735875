use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation (e.g. truncating past a node's length).
    #[error("domain error: {0}")]
    Domain(String),
    /// A requested depth exceeds what a tree or configuration provides.
    #[error("depth error: {0}")]
    Depth(String),
    /// Input violates a structural requirement (not meet-closed, not a tree, not an antichain, ...).
    #[error("structure error: {0}")]
    Structure(String),
    /// A combinatorial explosion guard was hit.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// An extension context failed validation.
    #[error("invalid context: {}", .0.join("; "))]
    Context(Vec<String>),
    /// Malformed text input (bitstrings, graph6, JSON, specs).
    #[error("parse error: {0}")]
    Parse(String),
    /// A coloring oracle could not color its input.
    #[error("coloring error: {0}")]
    Coloring(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
