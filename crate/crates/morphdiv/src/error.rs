use std::io;

use thiserror::Error;

/// Crate-wide error type. Variants that originate in input files carry
/// enough position information to point a user at the offending line.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("conllu parse error at line {line}: {message}")]
    Conllu { line: usize, message: String },

    #[error("alignment parse error at line {line}: {message}")]
    Alignment { line: usize, message: String },

    #[error("corpus files disagree on sentence count: {0}")]
    CorpusLengthMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown source pattern: {0}")]
    UnknownPattern(String),

    #[error("empty distribution")]
    EmptyDistribution,

    #[error("mixed pattern types: {0}")]
    MixedPatternTypes(String),

    #[error("statistics error: {0}")]
    Stats(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn stats(msg: impl Into<String>) -> Self {
        Error::Stats(msg.into())
    }
}
