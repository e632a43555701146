use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The data lies outside the assumption class a learner relies on.
    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    /// No hypothesis in the class is consistent with the selected features.
    #[error("FAIL: {0}")]
    Fail(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
