use crate::schedule::NoiseSchedule;
use crate::types::LatentBatch;
use crate::{DiffusionError, Result};
use viewloom_core::Image;

const X0_CLIP: (f64, f64) = (-0.1, 1.1);

/// One deterministic (eta = 0) DDIM update of a single latent:
/// x0_hat = (z - sqrt(1 - a) eps) / sqrt(a), clipped, then
/// z' = sqrt(a') x0_hat + sqrt(1 - a') eps.
pub fn ddim_update(z: &Image, eps: &Image, alpha_cur: f64, alpha_next: f64) -> Image {
    let sa = alpha_cur.sqrt();
    let sb = (1.0 - alpha_cur).sqrt();
    let sa_next = alpha_next.sqrt();
    let sb_next = (1.0 - alpha_next).sqrt();
    let mut out = z.clone();
    for (o, &e) in out.data_mut().iter_mut().zip(eps.data()) {
        let x0 = ((*o - sb * e) / sa).clamp(X0_CLIP.0, X0_CLIP.1);
        *o = sa_next * x0 + sb_next * e;
    }
    out
}

/// Advance the batch one substep toward lower noise.
pub fn ddim_step(batch: &LatentBatch, eps: &[Image], schedule: &NoiseSchedule) -> Result<LatentBatch> {
    if batch.level == 0 {
        return Err(DiffusionError::AtFinalSubstep);
    }
    if eps.len() != batch.len() {
        return Err(DiffusionError::ShapeMismatch(format!(
            "{} eps images for {} targets",
            eps.len(),
            batch.len()
        )));
    }
    let alpha_cur = schedule.alpha_bar_at_level(batch.level);
    let alpha_next = schedule.alpha_bar_at_level(batch.level - 1);
    let targets = batch
        .targets
        .iter()
        .zip(eps)
        .map(|(z, e)| {
            if !z.same_shape(e) {
                return Err(DiffusionError::ShapeMismatch("eps shape".into()));
            }
            Ok(ddim_update(z, e, alpha_cur, alpha_next))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LatentBatch {
        targets,
        cameras: batch.cameras.clone(),
        times: batch.times.clone(),
        level: batch.level - 1,
    })
}
