use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    /// `row` counts data rows from 1, the header excluded.
    #[error("parse error at row {row}, column {column:?}: {message}")]
    Parse { row: usize, column: String, message: String },
    #[error("input has no data rows")]
    EmptyInput,
    #[error("configuration: {0}")]
    Config(String),
    #[error("unknown asset label {0:?}")]
    UnknownAsset(String),
    #[error("{context}: {source}")]
    Core { context: String, source: nlcausal_core::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn core(context: impl Into<String>, source: nlcausal_core::Error) -> Self {
        CliError::Core { context: context.into(), source }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
