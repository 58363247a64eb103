//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two states (or a state and a model) live on different bases.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The desk-scale dimension cap would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A numerical consistency check failed (residual, convergence, ...).
    #[error("numerical consistency: {0}")]
    Numerics(String),
    /// Phase-continuity tracking failed along a path.
    #[error("branch tracking: {0}")]
    Branch(String),
    /// A formula id is not registered.
    #[error("unknown formula id: {0}")]
    UnknownFormula(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
