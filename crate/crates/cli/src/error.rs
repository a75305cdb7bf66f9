use std::path::PathBuf;

use thiserror::Error;
use zzsim::planner::PlanError;
use zzsim::verifier::VerifyError;
use zzsim::ModelError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    /// 1 for I/O failures, 2 for invalid input, 3 for exceeded size caps.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } | CliError::Invalid(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::CapExceeded { .. } | PlanError::Verify(VerifyError::CapExceeded { .. }) => {
                CliError::Cap(e.to_string())
            }
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}
