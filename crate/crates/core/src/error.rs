use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("point at or behind camera plane (z = {z})")]
    BehindCamera { z: f64 },
    #[error("invalid camera: {0}")]
    InvalidCamera(String),
    #[error("times must be non-decreasing (times[{index}] decreases)")]
    TimeOrdering { index: usize },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("grid invariant violated: {0}")]
    GridInvariant(String),
    #[error("missing cell file for camera {cam}, time {time}")]
    MissingCell { cam: usize, time: usize },
    #[error("manifest inconsistent with data on disk: {0}")]
    ManifestMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
