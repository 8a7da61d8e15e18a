//! CLI error type mapping onto the documented exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Exit 2: configuration or parameter validation failure.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Exit 3: the profile saturates before the requested span.
    #[error("saturation: {0}")]
    Saturation(String),

    /// Exit 4: an input data file could not be parsed.
    #[error("malformed input {path} (line {line}): {reason}")]
    MalformedInput {
        path: String,
        line: usize,
        reason: String,
    },

    /// Exit 5: a density value violated positivity.
    #[error("invalid density: {0}")]
    InvalidDensity(String),

    /// Exit 1: I/O or internal failure.
    #[error("{0}")]
    Io(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Saturation(_) => 3,
            CliError::MalformedInput { .. } => 4,
            CliError::InvalidDensity(_) => 5,
        }
    }
}

impl From<gaslayer::Error> for CliError {
    fn from(err: gaslayer::Error) -> Self {
        use gaslayer::Error;
        match err {
            Error::BeyondSaturation { .. } | Error::StepSizeUnderflow { .. } => {
                CliError::Saturation(err.to_string())
            }
            Error::NonPositiveDensity { .. } => CliError::InvalidDensity(err.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}
