use crate::{DiffusionError, Result};

pub const DEFAULT_T_TRAIN: usize = 1000;
pub const DEFAULT_DDIM_STEPS: usize = 25;
const BETA_START: f64 = 1e-4;
const BETA_END: f64 = 2e-2;

/// Cumulative signal coefficients of a linear-beta forward process plus the
/// evenly spaced DDIM substep chain.
///
/// Noise levels are counted in remaining substeps: level `k` in `1..=ddim_steps`
/// sits at training timestep `k * stride - 1`; level 0 is the clean state
/// (alpha_bar treated as 1).
#[derive(Debug, Clone)]
pub struct NoiseSchedule {
    t_train: usize,
    ddim_steps: usize,
    alpha_bar: Vec<f64>,
    /// Strictly decreasing indices into [0, t_train), highest noise first.
    substep_indices: Vec<usize>,
}

pub fn make_schedule(t_train: usize, ddim_steps: usize) -> Result<NoiseSchedule> {
    if ddim_steps == 0 || ddim_steps > t_train || t_train % ddim_steps != 0 {
        return Err(DiffusionError::BadSchedule { steps: ddim_steps, t_train });
    }
    let mut alpha_bar = Vec::with_capacity(t_train);
    let mut acc = 1.0;
    for i in 0..t_train {
        let beta = BETA_START + (BETA_END - BETA_START) * i as f64 / (t_train - 1) as f64;
        acc *= 1.0 - beta;
        alpha_bar.push(acc);
    }
    let stride = t_train / ddim_steps;
    let substep_indices = (1..=ddim_steps).rev().map(|k| k * stride - 1).collect();
    Ok(NoiseSchedule { t_train, ddim_steps, alpha_bar, substep_indices })
}

impl NoiseSchedule {
    pub fn default_schedule() -> NoiseSchedule {
        make_schedule(DEFAULT_T_TRAIN, DEFAULT_DDIM_STEPS).expect("default schedule is valid")
    }

    pub fn t_train(&self) -> usize {
        self.t_train
    }

    pub fn ddim_steps(&self) -> usize {
        self.ddim_steps
    }

    pub fn alpha_bar(&self) -> &[f64] {
        &self.alpha_bar
    }

    pub fn substep_indices(&self) -> &[usize] {
        &self.substep_indices
    }

    /// Signal coefficient at a noise level; level 0 is clean.
    pub fn alpha_bar_at_level(&self, level: usize) -> f64 {
        assert!(level <= self.ddim_steps, "level {level} out of range");
        if level == 0 {
            1.0
        } else {
            self.alpha_bar[self.substep_indices[self.ddim_steps - level]]
        }
    }
}
