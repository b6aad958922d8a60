use std::process::ExitCode;

use scatter_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("certificate check failed: {0}")]
    Mismatch(String),
}

impl CliError {
    /// 0 success, 2 config, 3 exhaustion, 4 precision, 5 budget or degree cap,
    /// 6 singular system, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) | CliError::Mismatch(_) => 1,
            CliError::Core(e) => match e.root() {
                CoreError::Exhausted { .. } => 3,
                CoreError::PrecisionFailure { .. } => 4,
                CoreError::BudgetCap { .. }
                | CoreError::DegreeCap { .. }
                | CoreError::FloorTooSmall { .. }
                | CoreError::NotCertified { .. } => 5,
                CoreError::Singular { .. } => 6,
                CoreError::InvalidKernel(_) | CoreError::UnsupportedParameter(_) | CoreError::InvalidArgument(_) => 2,
                _ => 1,
            },
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> ExitCode {
        ExitCode::from(e.exit_code())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
