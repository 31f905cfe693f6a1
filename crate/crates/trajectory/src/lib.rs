//! Camera selection and novel-view path generation: farthest point sampling
//! over input camera centers, stationary-input detection, and parametric
//! orbit/spiral paths.

mod fps;
mod paths;
mod plan;

pub use fps::{farthest_point_sample, is_stationary};
pub use paths::{make_path, PathKind, PathParams};
pub use plan::{PlanKind, TrajectoryPlan};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("need K >= 1, got {0}")]
    ZeroK(usize),
    #[error("K = {k} exceeds the {distinct} distinct camera centers")]
    TooFewDistinct { k: usize, distinct: usize },
    #[error("empty camera list")]
    Empty,
    #[error("invalid path parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Core(#[from] viewloom_core::CoreError),
}
