use cpshield::casimir_polder::CpError;
use cpshield::experiment::ExperimentError;
use thiserror::Error;

/// Top-level CLI failure. Configuration problems exit with code 1,
/// numerical failures (non-convergent quadrature) with code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::InvalidGeometry(msg) => CliError::Config(msg),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<CpError> for CliError {
    fn from(e: CpError) -> Self {
        match e {
            CpError::InvalidSpec(msg) => CliError::Config(msg),
            other => CliError::Numerical(other.to_string()),
        }
    }
}
