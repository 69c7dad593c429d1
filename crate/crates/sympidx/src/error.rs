use alloc::string::String;

/// Failure modes shared by every engine in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numerical failure: {message} (condition estimate {condition:e})")]
    Numerical { message: String, condition: f64 },
    #[error("unclassifiable block: {0}")]
    Unclassifiable(String),
    #[error("unsplittable block: {0}")]
    Unsplittable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn numerical(message: impl Into<String>) -> Self {
        Error::Numerical { message: message.into(), condition: f64::NAN }
    }
}
