use std::io;
use std::path::PathBuf;

use cavneg_core::dynamics::DynamicsError;
use cavneg_core::nmqj::NmqjError;
use cavneg_core::rates::RatesError;
use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Exit code 2.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Exit code 3.
    #[error("numerical failure: {0}")]
    Numeric(String),
    /// Exit code 4.
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<RatesError> for CliError {
    fn from(e: RatesError) -> Self {
        match e {
            RatesError::QuadratureNotConverged { .. } | RatesError::ThermalDivergence => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Config(_) => CliError::Config(e.to_string()),
            DynamicsError::Rates(inner) => inner.into(),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<NmqjError> for CliError {
    fn from(e: NmqjError) -> Self {
        match e {
            NmqjError::Thermal(..) | NmqjError::Hopping | NmqjError::EmptyEnsemble => {
                CliError::Config(e.to_string())
            }
            NmqjError::Dynamics(inner) => inner.into(),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}
