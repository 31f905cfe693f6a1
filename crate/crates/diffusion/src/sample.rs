use crate::ddim::ddim_step;
use crate::guidance::{cfg_epsilon, GuidanceConfig};
use crate::noise::gaussian_image;
use crate::schedule::NoiseSchedule;
use crate::types::{ConditioningSet, Denoiser, LatentBatch};
use crate::{DiffusionError, Result};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use viewloom_core::{Camera, Image};

/// Latent initialization for one sampling call.
#[derive(Debug, Clone)]
pub enum Init {
    /// z = n at the highest noise level; all substeps run.
    PureNoise,
    /// SDEdit-style: z = sqrt(a_k) x + sqrt(1 - a_k) n at noise level `k`,
    /// then only the remaining `k` substeps run. Level `ddim_steps` is pure
    /// noise by definition (the signal term is dropped), making it identical
    /// to `PureNoise` under the same seed.
    FromImages { images: Vec<Image>, level: usize },
}

/// Deterministic guided DDIM sampling: the denoiser is invoked three times per
/// substep with the conditioning-dropout variants and combined by
/// `cfg_epsilon`. Pure function of (denoiser, cond, targets, init, seed).
pub fn sample(
    denoiser: &dyn Denoiser,
    cond: &ConditioningSet,
    target_cameras: &[Camera],
    target_times: &[f64],
    init: Init,
    schedule: &NoiseSchedule,
    guidance: &GuidanceConfig,
    seed: u64,
) -> Result<Vec<Image>> {
    guidance.validate()?;
    if target_cameras.is_empty() || target_cameras.len() != target_times.len() {
        return Err(DiffusionError::ShapeMismatch(format!(
            "{} target cameras, {} target times",
            target_cameras.len(),
            target_times.len()
        )));
    }
    let (w, h) = (target_cameras[0].width, target_cameras[0].height);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (targets, level) = match init {
        Init::PureNoise => {
            let z: Vec<Image> =
                target_cameras.iter().map(|_| gaussian_image(w, h, &mut rng)).collect();
            (z, schedule.ddim_steps())
        }
        Init::FromImages { images, level } => {
            if level == 0 || level > schedule.ddim_steps() {
                return Err(DiffusionError::BadNoiseLevel(level, schedule.ddim_steps()));
            }
            if images.len() != target_cameras.len() {
                return Err(DiffusionError::ShapeMismatch(format!(
                    "{} init images for {} targets",
                    images.len(),
                    target_cameras.len()
                )));
            }
            let alpha = schedule.alpha_bar_at_level(level);
            let drop_signal = level == schedule.ddim_steps();
            let z: Vec<Image> = images
                .iter()
                .map(|img| {
                    if img.width() != w || img.height() != h {
                        return Err(DiffusionError::ShapeMismatch("init image size".into()));
                    }
                    let mut z = gaussian_image(w, h, &mut rng);
                    if !drop_signal {
                        for (o, &x) in z.data_mut().iter_mut().zip(img.data()) {
                            *o = alpha.sqrt() * x + (1.0 - alpha).sqrt() * *o;
                        }
                    }
                    Ok(z)
                })
                .collect::<Result<Vec<_>>>()?;
            (z, level)
        }
    };

    let mut batch =
        LatentBatch::new(targets, target_cameras.to_vec(), target_times.to_vec(), level)?;
    let cond_full = cond.clone();
    let cond_image = cond.variant_image_only();
    let cond_uncond = cond.variant_uncond();
    while batch.level > 0 {
        let eps_uncond = denoiser.predict(&batch, &cond_uncond);
        let eps_image = denoiser.predict(&batch, &cond_image);
        let eps_full = denoiser.predict(&batch, &cond_full);
        let eps = cfg_epsilon(&eps_uncond, &eps_image, &eps_full, guidance)?;
        batch = ddim_step(&batch, &eps, schedule)?;
    }
    Ok(batch.targets)
}
