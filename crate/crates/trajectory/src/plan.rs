use serde::{Deserialize, Serialize};
use viewloom_core::Camera;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanKind {
    ReuseInput,
    ForwardSpiral,
    InOutSpiral,
    Orbit,
}

/// Result of camera planning: which input cameras anchor the grid rows (FPS
/// order) and which novel cameras receive dense samples.
#[derive(Debug, Clone)]
pub struct TrajectoryPlan {
    pub kind: PlanKind,
    pub anchor_indices: Vec<usize>,
    pub novel_cameras: Vec<Camera>,
}

impl TrajectoryPlan {
    pub fn validate(&self, input_len: usize) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.anchor_indices.len() <= input_len
            && self.anchor_indices.iter().all(|&i| i < input_len && seen.insert(i))
    }
}
