use thiserror::Error;

/// Errors raised while building or querying seats and their logics.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: bad tables, unknown states, non-closed topologies, and so on.
    #[error("structural error: {0}")]
    Structural(String),

    /// The requested operation is not available for this semiring backend.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// Evaluation-time failure: unknown proposition or unresolvable literal.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A size or enumeration budget was exceeded. `partial` counts the work done.
    #[error("budget exceeded: {message} (partial count {partial})")]
    Budget { message: String, partial: usize },

    #[error("generation error: {0}")]
    Generation(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn evaluation(msg: impl Into<String>) -> Self {
        Error::Evaluation(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
