use thiserror::Error;

use crate::kernel::Sort;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ill-sorted term: argument {position} of `{op}` must be {expected}, found {found}")]
    IllSorted {
        op: String,
        position: usize,
        expected: Sort,
        found: Sort,
    },

    #[error("`{op}` expects {expected} argument(s), found {found}")]
    Arity {
        op: String,
        expected: usize,
        found: usize,
    },

    #[error("symbol `{0}` is already declared with a different sort")]
    Redeclared(String),

    #[error("symbol `{0}` uses the reserved prefix `%`")]
    ReservedSymbol(String),

    #[error("undeclared symbol `{0}`")]
    Undeclared(String),

    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    /// An error raised while elaborating the s-expression at `line:col`.
    #[error("{line}:{col}: {source}")]
    At {
        line: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unassigned symbol `{0}` during evaluation")]
    Unassigned(String),

    /// A broken internal invariant. These indicate a bug, never a property of the input.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
