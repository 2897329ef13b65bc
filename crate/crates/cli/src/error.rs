use henon_core::HenonError;
use henon_series::SeriesError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] HenonError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numeric(_) => "numeric",
            CliError::Series(_) => "series",
            CliError::Io(_) | CliError::Json(_) => "io",
        }
    }

    /// Configuration and output problems exit with 2, failed computations with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Json(_) => 2,
            CliError::Numeric(_) | CliError::Series(_) => 1,
        }
    }
}
