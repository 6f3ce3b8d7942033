use std::path::PathBuf;

use outgen::{CorpusError, MetricError};

/// Failure of a subcommand, split by the exit status it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
        }
    }

    pub fn missing_input(what: &str, path: &std::path::Path) -> Self {
        CliError::Io(format!("{what} file not found: {}", path.display()))
    }

    pub fn write(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("cannot write {}: {e}", path.display()))
    }

    pub fn unset(field: &str) -> Self {
        CliError::Validation(format!(
            "no {field} given (set it in the config file or pass --{})",
            field.replace('_', "-")
        ))
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub fn require_file(what: &str, path: &Option<PathBuf>, field: &str) -> Result<PathBuf, CliError> {
    let path = path.clone().ok_or_else(|| CliError::unset(field))?;
    if !path.is_file() {
        return Err(CliError::missing_input(what, &path));
    }
    Ok(path)
}
