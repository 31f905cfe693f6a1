//! Image metrics (PSNR, SSIM), space-time slice extraction, and the
//! grid-consistency scores used by the sampling ablations.

mod consistency;
mod image_metrics;
mod slice;

pub use consistency::{consistency_report, ConsistencyConfig, ConsistencyReport};
pub use image_metrics::{psnr, ssim, PSNR_SENTINEL};
pub use slice::spacetime_slice;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("image smaller than the SSIM window")]
    TooSmall,
    #[error("row {0} out of bounds for height {1}")]
    RowOutOfBounds(u32, u32),
    #[error("grid incomplete")]
    IncompleteGrid,
    #[error(transparent)]
    Recon(#[from] viewloom_recon4d::ReconError),
}

pub type Result<T> = std::result::Result<T, MetricsError>;
