use thiserror::Error;

/// Errors raised anywhere in the clustering pipeline.
#[derive(Debug, Error)]
pub enum SpcError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("cluster {0} is empty")]
    EmptyCluster(usize),

    #[error("centers {0} and {1} coincide; merge them before computing weights")]
    CoincidentCenters(usize, usize),

    #[error("solution path needs at least two distinct cluster counts, found {0}")]
    TooFewSolutions(usize),

    #[error("generator exceeded its rejection budget: {0}")]
    GenerationBudget(String),

    #[error("unsupported document schema version {0}")]
    SchemaVersion(String),

    #[error("solution path did not terminate after {0} penalty levels")]
    NoTermination(usize),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl SpcError {
    /// Process exit code used by the command-line front end.
    ///
    /// 1 for invalid options, 2 for bad input data or files, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            SpcError::InvalidParameter(_) => 1,
            SpcError::DegenerateData(_)
            | SpcError::CoincidentCenters(..)
            | SpcError::NoTermination(_)
            | SpcError::GenerationBudget(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = SpcError> = std::result::Result<T, E>;
