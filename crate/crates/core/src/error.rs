//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration value (bad dims, empty ranges, zero budgets).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A vector or matrix did not have the expected length.
    #[error("shape mismatch in {what}: expected {expected}, got {got}")]
    Shape {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A computation produced or received a non-finite value.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Goal coincides with the agent position; no direction exists.
    #[error("degenerate goal: goal coincides with agent position")]
    DegenerateGoal,

    /// No usable transitions remained after filtering.
    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    /// Stored data violates a structural invariant (alignment, contiguity).
    #[error("corrupt data: {0}")]
    CorruptData(String),

    /// Two components were built for different environments.
    #[error("environment mismatch: {0}")]
    EnvMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(what: &'static str, expected: usize, got: usize) -> Self {
        Error::Shape {
            what,
            expected,
            got,
        }
    }
}
