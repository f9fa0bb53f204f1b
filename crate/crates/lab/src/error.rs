use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
/// Run completed but a reported check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum LabError {
    /// Every invalid field, one message each.
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    pub fn config(msg: impl Into<String>) -> Self {
        LabError::Config(vec![msg.into()])
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => EXIT_CONFIG,
            LabError::Numerical(_) => EXIT_NUMERICAL,
            LabError::Io { .. } => EXIT_CHECK_FAILED,
        }
    }
}

impl From<ginls_core::Error> for LabError {
    fn from(e: ginls_core::Error) -> Self {
        LabError::Numerical(e.to_string())
    }
}

pub type LabResult<T> = Result<T, LabError>;
