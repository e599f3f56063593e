use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Shapes or subsystem indices that do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A parameter outside the documented domain of an operation.
    #[error("parameter out of domain: {0}")]
    Domain(String),
    /// An input that fails a structural invariant (normalization, Hermiticity, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The requested Hilbert space exceeds the configured dimension cap.
    #[error("dimension {dim} exceeds the size cap {cap} (set CLONEKIT_MAX_DIM to override)")]
    SizeCap { dim: usize, cap: usize },
    /// An iterative solver stopped before meeting its tolerances.
    #[error("no convergence after {iterations} iterations (primal {primal:.3e}, dual {dual:.3e})")]
    NotConverged { iterations: usize, primal: f64, dual: f64 },
    /// Lookup of an unknown identifier.
    #[error("unknown identifier: {0}")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;

