use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A parameter pair produced an interaction function that is not monotone.
    #[error("constraint violation for tau={tau}, beta={beta}: {message}")]
    ConstraintViolation { tau: f64, beta: f64, message: String },

    /// Difference coordinates left the ordered region `0 < d_1 < ... < d_{N-1} < 1`.
    #[error("ordering violation between d_{lower} = {lower_value} and d_{upper} = {upper_value}")]
    OrderingViolation {
        lower: usize,
        upper: usize,
        lower_value: f64,
        upper_value: f64,
    },

    #[error("solver error: {0}")]
    Solver(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Field-level configuration failure.
    #[error("invalid config field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_)
            | Error::ConstraintViolation { .. }
            | Error::Validation { .. }
            | Error::Json(_) => 2,
            Error::OrderingViolation { .. } | Error::Solver(_) | Error::Internal(_) => 3,
            Error::ResourceLimit(_) => 4,
            Error::Io { .. } => 2,
        }
    }
}
