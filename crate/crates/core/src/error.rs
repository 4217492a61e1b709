use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An interval computation could not separate a quantity from zero at the
    /// requested precision (for example the argument of `ln` straddles 0).
    #[error("insufficient precision: {0}")]
    Precision(String),

    /// The shift is not certifiably contractive, so the log-alternation
    /// criterion does not apply.
    #[error("not contractive: {0}; normalize the weights so that sup α ≤ 1")]
    NotContractive(String),

    /// A malformed sequence, transform or measure document.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid config value for `{key}`: {message}")]
    Config { key: String, message: String },

    /// The requested evaluation is not defined for this kind of object.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A search ran out of its configured bounds without a decision.
    #[error("undecided: {0}")]
    Undecided(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
