use crate::{Result, SamplerError};
use viewloom_diffusion::{GuidanceConfig, NoiseSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassKind {
    MultiView,
    Temporal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassSpec {
    pub kind: PassKind,
    /// SDEdit initialization level out of the schedule's step count; the
    /// maximum level means sampling from pure noise.
    pub init_level: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerMode {
    /// Sliding-window grid completion; requires M = N + 1.
    Grid,
    /// Anchored batch generation (bullet time, dense views).
    BulletTime,
}

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub mode: SamplerMode,
    /// K: anchor cameras forming the grid rows.
    pub k_anchors: usize,
    /// K': dense novel views generated per timestep.
    pub k_prime: usize,
    /// N: denoiser target count (window size).
    pub window: usize,
    /// M: denoiser conditioning count.
    pub cond_count: usize,
    pub schedule: Vec<PassSpec>,
    pub noise_schedule: NoiseSchedule,
    pub guidance: GuidanceConfig,
    pub seed: u64,
}

impl SamplerConfig {
    /// Grid-completion defaults: K = 13 anchors, K' = 128 dense views,
    /// window N = 8 with M = 9 conditioning frames, schedule
    /// multi-view from noise, temporal at 16/25, multi-view at 8/25.
    pub fn grid_default() -> Self {
        SamplerConfig {
            mode: SamplerMode::Grid,
            k_anchors: 13,
            k_prime: 128,
            window: 8,
            cond_count: 9,
            schedule: vec![
                PassSpec { kind: PassKind::MultiView, init_level: 25 },
                PassSpec { kind: PassKind::Temporal, init_level: 16 },
                PassSpec { kind: PassKind::MultiView, init_level: 8 },
            ],
            noise_schedule: NoiseSchedule::default_schedule(),
            guidance: GuidanceConfig::default(),
            seed: 0,
        }
    }

    /// Bullet-time defaults: batches of N = 13 targets conditioned on M = 3
    /// views.
    pub fn bullet_default() -> Self {
        SamplerConfig {
            mode: SamplerMode::BulletTime,
            window: 13,
            cond_count: 3,
            ..SamplerConfig::grid_default()
        }
    }

    /// The bullet-mode counterpart of this config (same seed, guidance and
    /// noise schedule).
    pub fn to_bullet(&self) -> Self {
        SamplerConfig {
            mode: SamplerMode::BulletTime,
            window: 13,
            cond_count: 3,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window == 0 || self.cond_count == 0 {
            return Err(SamplerError::Config("window and cond_count must be >= 1".into()));
        }
        if self.mode == SamplerMode::Grid && self.cond_count != self.window + 1 {
            return Err(SamplerError::Config(format!(
                "grid mode requires M = N + 1 (got M={}, N={})",
                self.cond_count, self.window
            )));
        }
        if self.schedule.is_empty() {
            return Err(SamplerError::Config("schedule must be non-empty".into()));
        }
        let max = self.noise_schedule.ddim_steps();
        if self.schedule[0].init_level != max {
            return Err(SamplerError::Config(format!(
                "first pass must start from pure noise (level {max})"
            )));
        }
        for p in &self.schedule {
            if p.init_level == 0 || p.init_level > max {
                return Err(SamplerError::Config(format!(
                    "init level {} outside [1, {max}]",
                    p.init_level
                )));
            }
        }
        self.guidance.validate()?;
        Ok(())
    }
}

/// Parse a pass schedule of the form "mv:25,t:16,mv:8".
pub fn parse_schedule(s: &str) -> Result<Vec<PassSpec>> {
    s.split(',')
        .map(|part| {
            let (kind, level) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| SamplerError::Config(format!("bad pass spec '{part}'")))?;
            let kind = match kind.trim() {
                "mv" | "multiview" => PassKind::MultiView,
                "t" | "temporal" => PassKind::Temporal,
                other => return Err(SamplerError::Config(format!("unknown pass kind '{other}'"))),
            };
            let init_level = level
                .trim()
                .parse::<usize>()
                .map_err(|e| SamplerError::Config(format!("bad level in '{part}': {e}")))?;
            Ok(PassSpec { kind, init_level })
        })
        .collect()
}
