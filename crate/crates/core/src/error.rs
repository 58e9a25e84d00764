use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("objects are not similarly sized: diameter ratio {ratio:.4} exceeds {limit}")]
    NotSimilarlySized { ratio: f64, limit: f64 },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("function family for part {part} has {size} members, above its bound {bound}")]
    FamilyBound { part: usize, size: usize, bound: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
