use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("{what} out of range: {message}")]
    OutOfRange { what: &'static str, message: String },

    #[error("stream was not realizable: {0}")]
    NotRealizable(String),

    #[error("desk-scale guard exceeded: {0}")]
    Guard(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn range(what: &'static str, message: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            message: message.into(),
        }
    }
}
