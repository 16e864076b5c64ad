use rplkit_core::CoreError;

/// Tool-level error with a stable process exit code mapping:
/// 1 = I/O or parse failure, 2 = domain error, 3 = infeasibility.
#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Core(CoreError),
    #[error("{0}")]
    Infeasible(String),
}

impl From<CoreError> for ToolError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Infeasible => ToolError::Infeasible(e.to_string()),
            other => ToolError::Core(other),
        }
    }
}

impl ToolError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolError::Io(_) | ToolError::Parse(_) | ToolError::Csv(_) | ToolError::Json(_) => 1,
            ToolError::Domain(_) | ToolError::Core(_) => 2,
            ToolError::Infeasible(_) => 3,
        }
    }
}
