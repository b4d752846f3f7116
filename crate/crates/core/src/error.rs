use thiserror::Error;

/// Errors surfaced by the estimation library.
#[derive(Debug, Error)]
pub enum Error {
    /// Exact dyadic representation would exceed the configured capacity.
    #[error("dyadic capacity exceeded: {0}")]
    Capacity(String),

    /// Caller violated an operation precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Parameters outside the mathematical domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed textual phase or bitstring input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A numeric search failed to bracket or converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
