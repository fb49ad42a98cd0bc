use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rcmlab_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 3 for numerical failures, 2 for everything the caller could fix.
    pub fn exit_code(&self) -> i32 {
        use rcmlab_core::Error as E;
        match self {
            CliError::Core(E::NoConvergence { .. } | E::ZeroVariance | E::InsufficientData { .. } | E::GenerationFailed) => 3,
            _ => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> CliError {
        CliError::Io { path: path.into(), source }
    }
}
