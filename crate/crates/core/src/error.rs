use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error)]
pub enum Error {
    #[error("axis {axis} has {got} cells, at least {min} required")]
    Dimension { axis: usize, got: usize, min: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("point ({:.6}, {:.6}, {:.6}) lies outside the sampled region", point[0], point[1], point[2])]
    OutOfBounds { point: [f64; 3] },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("singular evaluation: {0}")]
    Singularity(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("{cells} cells exceeds the limit of {limit}")]
    SizeGuard { cells: usize, limit: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
