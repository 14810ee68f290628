use gatefid_core::Error as CoreError;
use thiserror::Error;

/// Runner failures, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed config: {0}")]
    Config(String),
    #[error("infeasible size: {0}")]
    Infeasible(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::SelfCheck(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    /// For errors raised while interpreting the config: size limits stay
    /// size errors, everything else is a config error.
    pub fn from_core_config(e: CoreError) -> CliError {
        match e {
            CoreError::TooManyQubits { .. } => CliError::Infeasible(e.to_string()),
            CoreError::SelfCheck(_) => CliError::SelfCheck(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }

    /// For errors raised while running an experiment on a valid config.
    pub fn from_core_run(e: CoreError) -> CliError {
        match e {
            CoreError::TooManyQubits { .. } => CliError::Infeasible(e.to_string()),
            CoreError::ParameterOutOfRange { .. } | CoreError::UnknownProtocol(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::SelfCheck(e.to_string()),
        }
    }
}
