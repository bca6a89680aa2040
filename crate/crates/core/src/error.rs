use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied argument is outside the operation's domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The problem is larger than the dense linear-algebra paths accept.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Malformed input text. Line and column are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A multiplication table that is not a group.
    #[error("not a group: {0}")]
    NotAGroup(String),

    /// The cochain fails the cocycle condition at the given triple.
    #[error("not a cocycle: condition fails at (g, h, k) = ({g}, {h}, {k})")]
    NotCocycle { g: usize, h: usize, k: usize },

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
