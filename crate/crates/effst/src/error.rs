use thiserror::Error;

/// Crate-wide error type. The CLI maps these onto its exit-code contract:
/// validation problems exit 2, numeric failures 3, insufficient data 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown name: {0}")]
    NotFound(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("bad reduction at norm {0}")]
    BadReduction(u64),
    #[error("invalid data: {0}")]
    DataInvalid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("below threshold: {0}")]
    BelowThreshold(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
