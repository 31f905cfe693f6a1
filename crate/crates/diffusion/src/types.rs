use crate::{DiffusionError, Result};
use viewloom_core::{Camera, Image, View};

/// The denoiser contract: predicts the noise component of every target in the
/// batch. Implementations must be deterministic given identical inputs and
/// reentrant (invocations may run concurrently).
pub trait Denoiser: Sync {
    fn predict(&self, batch: &LatentBatch, cond: &ConditioningSet) -> Vec<Image>;
}

/// Noisy target state: one latent image per target plus the target cameras and
/// times, at a given noise level (remaining substeps; see `NoiseSchedule`).
#[derive(Debug, Clone)]
pub struct LatentBatch {
    pub targets: Vec<Image>,
    pub cameras: Vec<Camera>,
    pub times: Vec<f64>,
    pub level: usize,
}

impl LatentBatch {
    pub fn new(
        targets: Vec<Image>,
        cameras: Vec<Camera>,
        times: Vec<f64>,
        level: usize,
    ) -> Result<Self> {
        if targets.is_empty() {
            return Err(DiffusionError::EmptyBatch);
        }
        if targets.len() != cameras.len() || targets.len() != times.len() {
            return Err(DiffusionError::ShapeMismatch(format!(
                "{} targets, {} cameras, {} times",
                targets.len(),
                cameras.len(),
                times.len()
            )));
        }
        for img in &targets[1..] {
            if !img.same_shape(&targets[0]) {
                return Err(DiffusionError::ShapeMismatch("target image sizes differ".into()));
            }
        }
        Ok(LatentBatch { targets, cameras, times, level })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Conditioning views plus the dropout flags used for classifier-free
/// guidance. Mirrors the training dropout structure: time conditioning may be
/// dropped alone, or together with the images; times never appear without
/// images.
#[derive(Debug, Clone)]
pub struct ConditioningSet {
    pub views: Vec<View>,
    pub images_present: bool,
    pub times_present: bool,
}

impl ConditioningSet {
    pub fn new(views: Vec<View>, images_present: bool, times_present: bool) -> Result<Self> {
        if times_present && !images_present {
            return Err(DiffusionError::BadConditioning);
        }
        Ok(ConditioningSet { views, images_present, times_present })
    }

    pub fn full(views: Vec<View>) -> Self {
        ConditioningSet { views, images_present: true, times_present: true }
    }

    pub fn variant_image_only(&self) -> Self {
        ConditioningSet {
            views: self.views.clone(),
            images_present: self.images_present,
            times_present: false,
        }
    }

    pub fn variant_uncond(&self) -> Self {
        ConditioningSet { views: self.views.clone(), images_present: false, times_present: false }
    }

    /// Time of the first conditioning view; what a time-dropped prediction
    /// falls back to.
    pub fn first_time(&self) -> Option<f64> {
        self.views.first().map(|v| v.time)
    }
}
