use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] hdc_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{source_name}:{line}: {message}")]
    Malformed { source_name: String, line: u64, message: String },
    #[error("{0}: empty dataset")]
    EmptyDataset(String),
    #[error("model file: {0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    pub(crate) fn malformed(source_name: &str, line: u64, message: impl Into<String>) -> Self {
        HarnessError::Malformed {
            source_name: source_name.to_owned(),
            line,
            message: message.into(),
        }
    }

    /// 1 for usage errors, 2 for everything caused by the data or files.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
