use thiserror::Error;

pub type Result<T> = std::result::Result<T, BenchError>;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{point:?} lies outside the domain of {function}")]
    Domain { function: String, point: Vec<f64> },
    #[error("grid of {elements} elements (~{bytes} bytes) exceeds the limit of {limit} elements")]
    MemoryGuard {
        elements: u128,
        bytes: u128,
        limit: u128,
    },
    #[error(transparent)]
    Interp(#[from] mcube::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl BenchError {
    /// Process exit code: 2 for domain/config errors, 3 for memory-guard refusals.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) | BenchError::Domain { .. } => 2,
            BenchError::MemoryGuard { .. } => 3,
            BenchError::Interp(mcube::Error::Format(_)) | BenchError::Io(_) => 1,
            BenchError::Interp(_) => 2,
        }
    }
}
