use std::process::ExitCode;

use qubit_frir::Error as SolverError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Numeric(#[from] SolverError),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Numeric(e) if is_argument_error(e) => 2,
            CliError::Verification(_) => 3,
            CliError::Numeric(_) => 4,
        })
    }
}

/// Solver errors caused by what the user supplied rather than by the numerics.
fn is_argument_error(e: &SolverError) -> bool {
    matches!(
        e,
        SolverError::InvalidEnsemble(_)
            | SolverError::QOutOfRange(_)
            | SolverError::EpsilonOutOfRange { .. }
            | SolverError::InvalidArgument(_)
    )
}

pub type CliResult<T> = std::result::Result<T, CliError>;
