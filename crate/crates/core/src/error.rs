use thiserror::Error;

/// Errors raised by the quon library.
#[derive(Debug, Error)]
pub enum QuonError {
    /// A caller broke an operation's precondition (arity, shape, domain).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// The request is well-formed but outside what is implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A factorial enumeration would exceed the configured cap.
    #[error("enumeration of size {n} exceeds the configured cap of {cap} (set QUON_ENUM_CAP to override)")]
    CapExceeded { n: usize, cap: usize },

    /// Malformed textual input.
    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    /// The composite exchange identity failed. Never expected to fire.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    /// No real solution exists for the requested inversion.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// A named species or path element could not be found.
    #[error("unresolved: {0}")]
    Unresolved(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl QuonError {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        QuonError::ContractViolation(msg.into())
    }

    pub(crate) fn parse(line: Option<usize>, msg: impl Into<String>) -> Self {
        QuonError::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for errors caused by unparseable input, as opposed to invalid requests.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, QuonError::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, QuonError>;
