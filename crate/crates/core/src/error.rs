use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("value {value} lies beyond the range of the function ({detail})")]
    Range { value: f64, detail: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("Young function is not admissible: {0}")]
    Admissibility(String),

    #[error("unsupported function for this operation: {0}")]
    Unsupported(String),

    #[error("requested accuracy not reached: {detail} (achieved {achieved:e})")]
    Precision { detail: String, achieved: f64 },

    #[error("space is not normable: {0}")]
    NotNormable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
