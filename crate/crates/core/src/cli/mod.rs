//! Command-line front end: configs in, CSV datasets out.

mod commands;
pub mod config;
pub mod csv;

use std::process::ExitCode;

pub use commands::{cmd_concurrence, cmd_figures, cmd_oracle_check, cmd_rate, cmd_sweep, OracleCheckReport, Options};
pub use config::{InitialState, Resolved, RunConfig};
pub use csv::CsvDataset;

/// Failure of a CLI command, classified by exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid configuration (exit 2).
    #[error("config error: {0}")]
    Config(String),
    /// Output could not be written (exit 2).
    #[error("i/o error: {0}")]
    Io(String),
    /// A computed result violates a physical or numerical invariant (exit 3).
    #[error("invariant violation: {0}")]
    Invariant(String),
    /// Oracle quadrature did not converge (exit 4).
    #[error("{0}")]
    NotConverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::NotConverged(_) => 4,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::NotConverged(_) => CliError::NotConverged(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}
