//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the computation pipeline.
///
/// The three broad classes map onto distinct process exit codes: input
/// problems exit 1, numerical certificate failures exit 2, and violations of
/// the geometric assumptions of the method exit 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("numerical certificate failure in {stage}: {message}")]
    Certificate { stage: String, message: String },

    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn certificate(stage: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Certificate {
            stage: stage.into(),
            message: msg.into(),
        }
    }

    pub fn assumption(msg: impl Into<String>) -> Self {
        Error::Assumption(msg.into())
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Input(_) | Error::Io(_) => 1,
            Error::Certificate { .. } => 2,
            Error::Assumption(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
