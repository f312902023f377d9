use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration value is out of its valid range; names the field.
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    /// A learner could not be trained from the given samples.
    #[error("training failed: {0}")]
    Training(String),

    /// A pipeline stage could not proceed.
    #[error("pipeline error: {0}")]
    Pipeline(String),

    /// A data file failed to parse; carries file and 1-based line number.
    #[error("parse error in {file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    /// Evaluation inputs do not overlap (e.g. disjoint frame sets).
    #[error("evaluation mismatch: {0}")]
    EvalMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: msg.into(),
        }
    }
}
