//! Grid sampling: completes a K x L camera-by-time grid from an input video
//! through alternating multi-view and temporal sliding-window passes with
//! pixel-median fusion, plus anchored bullet-time generation, the stationary
//! bootstrap, and dense view sampling.

mod bullet;
mod config;
mod dense;
mod median;
mod passes;
mod window;

pub use bullet::{bullet_time, nearest_anchor_indices, stationary_bootstrap};
pub use config::{parse_schedule, PassKind, PassSpec, SamplerConfig, SamplerMode};
pub use dense::dense_views;
pub use median::pixel_median;
pub use passes::{
    alternate_sample, alternate_sample_with_inputs, multiview_pass, temporal_pass, PinnedCell,
};
pub use window::window_indices;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("invalid sampler config: {0}")]
    Config(String),
    #[error("grid/input mismatch: {0}")]
    InputMismatch(String),
    #[error("grid incomplete")]
    IncompleteGrid,
    #[error("fewer than {needed} anchors available ({got})")]
    TooFewAnchors { needed: usize, got: usize },
    #[error("input cameras are not stationary")]
    NotStationary,
    #[error("no input frame at the requested target time")]
    NoMatchingInputTime,
    #[error(transparent)]
    Core(#[from] viewloom_core::CoreError),
    #[error(transparent)]
    Diffusion(#[from] viewloom_diffusion::DiffusionError),
}

pub type Result<T> = std::result::Result<T, SamplerError>;
