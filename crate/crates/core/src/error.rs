use thiserror::Error;

/// Errors produced by the model, the policies and the experiment driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// A model failed the concavity certificate (third-order or second-order condition).
    #[error("regularity check failed: {0}")]
    Irregular(String),

    /// The next_price / observe alternation was violated.
    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("no observations recorded")]
    EmptyObservation,

    #[error("type index {index} out of range for {len} types")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) => 2,
            Error::Irregular(_) => 3,
            Error::Protocol(_) | Error::EmptyObservation | Error::IndexOutOfRange { .. } => 4,
            Error::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
