use thiserror::Error;

pub type Result<T, E = GeoError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GeoError {
    /// Connectivity problems: not a closed oriented 2-manifold.
    #[error("structural mesh error: {0}")]
    Structural(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("point is off the surface: {0}")]
    OffSurface(String),
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("sample {index} lies within {tolerance:e} of the axis")]
    NearAxis { index: usize, tolerance: f64 },
    #[error("direction is not generic: {ties} tied faces out of {faces}; perturb the direction")]
    NonGeneric { ties: usize, faces: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
