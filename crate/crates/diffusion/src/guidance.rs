use crate::{DiffusionError, Result};
use viewloom_core::Image;

/// Two-scale classifier-free guidance weights: `s_image` extrapolates along
/// the image-conditioning direction, `s_time` along the time-conditioning
/// direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceConfig {
    pub s_image: f64,
    pub s_time: f64,
}

impl Default for GuidanceConfig {
    fn default() -> Self {
        GuidanceConfig { s_image: 3.0, s_time: 4.5 }
    }
}

impl GuidanceConfig {
    /// Both scales 1: guidance telescopes to the fully conditioned prediction.
    /// Oracle-equivalence runs use this, since any extrapolation moves away
    /// from an already exact prediction.
    pub fn unit() -> Self {
        GuidanceConfig { s_image: 1.0, s_time: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s_image < 0.0 || self.s_time < 0.0 {
            return Err(DiffusionError::ShapeMismatch(format!(
                "guidance scales must be >= 0 (got {}, {})",
                self.s_image, self.s_time
            )));
        }
        Ok(())
    }
}

/// Combine the three dropout variants:
/// eps_uncond + s_image * (eps_image - eps_uncond) + s_time * (eps_full - eps_image),
/// elementwise per target.
pub fn cfg_epsilon(
    eps_uncond: &[Image],
    eps_image: &[Image],
    eps_full: &[Image],
    g: &GuidanceConfig,
) -> Result<Vec<Image>> {
    if eps_uncond.len() != eps_image.len() || eps_uncond.len() != eps_full.len() {
        return Err(DiffusionError::ShapeMismatch("variant batch sizes differ".into()));
    }
    let mut out = Vec::with_capacity(eps_uncond.len());
    for ((u, i), f) in eps_uncond.iter().zip(eps_image).zip(eps_full) {
        if !u.same_shape(i) || !u.same_shape(f) {
            return Err(DiffusionError::ShapeMismatch("variant image sizes differ".into()));
        }
        let mut img = u.clone();
        for ((o, &ei), &ef) in img.data_mut().iter_mut().zip(i.data()).zip(f.data()) {
            *o += g.s_image * (ei - *o) + g.s_time * (ef - ei);
        }
        out.push(img);
    }
    Ok(out)
}
