//! Error type and exit-code mapping.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("evaluation hit a pole")]
    Pole,
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("needs quadratic extension: {0}")]
    NeedsExtension(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("invalid document: {0}")]
    Document(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NeedsExtension(_) => 3,
            Error::BudgetExceeded(_) => 4,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownVariable { .. } => "unknown-variable",
            Error::Pole => "pole",
            Error::Contract(_) => "contract",
            Error::NeedsExtension(_) => "needs-extension",
            Error::BudgetExceeded(_) => "budget",
            Error::Numeric(_) => "numeric",
            Error::Document(_) => "document",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
