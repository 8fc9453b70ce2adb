//! Command-line front end: builds wave patterns from a config, runs
//! simulations and executes the verification suites.

pub mod commands;
pub mod config;
pub mod patterns;
pub mod suites;

use std::io;

use thiserror::Error;

use outflow_core::diagnostics::DiagnosticsError;
use outflow_core::io::TableError;
use outflow_core::solver::SolverError;
use outflow_core::waves::WaveError;
use outflow_core::ValidationError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("admissibility violated: {0}")]
    Admissibility(String),
    #[error("runtime abort: {0}")]
    Runtime(String),
    #[error("verification failed: {failed} of {total} checks")]
    Verification { failed: usize, total: usize },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 0 success, 1 configuration/validation, 2 runtime abort, 3 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Admissibility(_) => 1,
            Self::Runtime(_) | Self::Io(_) => 2,
            Self::Verification { .. } => 3,
        }
    }
}

impl From<ValidationError> for CliError {
    fn from(e: ValidationError) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<WaveError> for CliError {
    fn from(e: WaveError) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        if e.is_runtime() {
            Self::Runtime(e.to_string())
        } else {
            Self::Config(e.to_string())
        }
    }
}

impl From<DiagnosticsError> for CliError {
    fn from(e: DiagnosticsError) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<TableError> for CliError {
    fn from(e: TableError) -> Self {
        match e {
            TableError::Io(e) => Self::Io(e),
            TableError::Wave(e) => e.into(),
            other => Self::Runtime(other.to_string()),
        }
    }
}
