//! Diffusion-side machinery against a pluggable denoiser contract: noise
//! schedule, deterministic DDIM with partial-noise initialization, two-scale
//! classifier-free guidance, and oracle denoisers backed by the toy world.

mod ddim;
mod guidance;
mod noise;
mod oracle;
mod sample;
mod schedule;
pub mod seeding;
mod types;

pub use ddim::{ddim_step, ddim_update};
pub use guidance::{cfg_epsilon, GuidanceConfig};
pub use noise::{blur_image, gaussian_image};
pub use oracle::{ConstantX0Denoiser, CorruptionSpec, OracleDenoiser};
pub use sample::{sample, Init};
pub use schedule::{make_schedule, NoiseSchedule};
pub use types::{ConditioningSet, Denoiser, LatentBatch};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiffusionError {
    #[error("ddim_steps {steps} incompatible with T_train {t_train}")]
    BadSchedule { steps: usize, t_train: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("noise level {0} outside [1, {1}]")]
    BadNoiseLevel(usize, usize),
    #[error("ddim_step called at the final substep")]
    AtFinalSubstep,
    #[error("conditioning cannot present times without images")]
    BadConditioning,
    #[error("empty target batch")]
    EmptyBatch,
}

pub type Result<T> = std::result::Result<T, DiffusionError>;
