use std::fmt;

use vibronic_echo::Error;

/// Failure of one command, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration, parameters or output location (exit code 2).
    Config(String),
    /// The computation itself failed (exit code 3).
    Numerical(Error),
}

impl CliError {
    pub const CONFIG_EXIT: i32 = 2;
    pub const NUMERICAL_EXIT: i32 = 3;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => Self::CONFIG_EXIT,
            CliError::Numerical(_) => Self::NUMERICAL_EXIT,
        }
    }

    /// Errors raised while checking user input are configuration errors.
    pub fn from_validation(error: Error) -> Self {
        match error {
            Error::InvalidParameter(message) => CliError::Config(message),
            other => CliError::Numerical(other),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(message) => write!(f, "configuration error: {message}"),
            CliError::Numerical(error) => write!(f, "numerical failure: {error}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError::Numerical(error)
    }
}

impl From<std::io::Error> for CliError {
    fn from(error: std::io::Error) -> Self {
        CliError::Config(format!("cannot write output: {error}"))
    }
}
