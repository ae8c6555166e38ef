use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed arguments: bad vertex index, violated precondition, parse failure.
    #[error("input error: {0}")]
    Input(String),
    /// Well-formed input on which the requested construction does not exist.
    #[error("domain error: {0}")]
    Domain(String),
    /// A bipartite-only routine received a graph with an odd cycle.
    #[error("graph is not bipartite; odd cycle {cycle:?}")]
    NotBipartite { cycle: Vec<usize> },
    /// A configurable search cap was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// An invariant that should hold by construction was violated.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
