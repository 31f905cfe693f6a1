//! Desk-scale 4D reconstruction: canonical isotropic 3D Gaussians moved by a
//! hex-plane deformation field, rendered through a differentiable rasterizer
//! with hand-derived gradients, optimized in two phases with densification and
//! loss annealing.

mod adam;
mod checkpoint;
mod deform;
mod densify;
mod gaussians;
mod loss;
mod optimize;
mod rasterize;

pub use adam::Adam;
pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint};
pub use deform::{DeformGrads, DeformationField};
pub use densify::{densify_prune, DensifyOutcome};
pub use gaussians::GaussianCloud;
pub use loss::{photometric_loss, LossWeights};
pub use optimize::{fit_static, optimize, render_model, ReconConfig, TrainView, TrainingStats};
pub use rasterize::{rasterize, RasterGrads, Rasterizer};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReconError {
    #[error("empty dataset")]
    EmptyDataset,
    #[error("phase 1 needs views at t = 0")]
    NoCanonicalViews,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Core(#[from] viewloom_core::CoreError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ReconError>;
