use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid party name {0:?}")]
    InvalidParty(String),
    #[error("duplicate party {0:?}")]
    DuplicateParty(String),
    #[error("unknown party {0:?}")]
    UnknownParty(String),
    #[error("need between 2 and {max} parties, got {n}")]
    PartyCount { n: usize, max: usize },
    #[error("invalid subset mask {0:#b}")]
    InvalidSubset(u32),
    #[error("forms live in different contexts ({left} vs {right})")]
    ContextMismatch { left: String, right: String },
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("system too large: {rows} rows x {cols} columns exceeds budget")]
    TooLarge { rows: usize, cols: usize },

    #[error("pivot limit of {0} exceeded")]
    PivotLimit(u64),
    #[error("LP engine produced an invalid certificate: {0}")]
    Certificate(String),

    #[error("inequality is provable; nothing to refute")]
    NothingToRefute,
    #[error("inequality is not provable; no proof to shorten")]
    NotProvable,
    #[error("bound multipliers are zero; cannot extract a refutation")]
    ZeroBoundMultipliers,
    #[error("hint system is inconsistent with the given bound multipliers")]
    InconsistentMultipliers,
}

impl Error {
    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            position,
            message: message.into(),
        }
    }

    /// Whether the error comes from bad user input (as opposed to a solver
    /// limit or an internal failure).
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::PivotLimit(_) | Error::Certificate(_) | Error::TooLarge { .. }
        )
    }
}
