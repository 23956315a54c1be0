use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parity word {0:?}: {1}")]
    InvalidParityWord(String, &'static str),
    #[error("node {node} out of range for a system with {count} nodes")]
    NodeOutOfRange { node: usize, count: usize },
    #[error("{0} is not a root of the system")]
    NotARoot(String),
    #[error("systems are not in the same orbit: {0}")]
    DifferentOrbit(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
