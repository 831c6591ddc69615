use thiserror::Error;

/// Errors raised by the combinatorial and oracle layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A black-box set that breaks the Cauchon condition.
    #[error("not a Cauchon diagram: box ({row},{col}) has a white box both to its left and above it")]
    InvalidDiagram { row: usize, col: usize },

    /// A permutation outside the restricted set for the requested shape.
    #[error("permutation {0:?} is not in the restricted set for this shape")]
    NotRestricted(Vec<usize>),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    /// A configured enumeration or computation bound was exceeded.
    #[error("{what} of size {size} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    /// A division by zero met while running an elimination or restoration step.
    /// Callers that sample parameters treat this as a request to resample.
    #[error("zero pivot at ({row},{col}); resample the parameters")]
    ZeroPivot { row: usize, col: usize },

    /// A computed invariant that must always hold was violated.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
