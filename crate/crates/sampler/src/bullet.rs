use crate::config::SamplerConfig;
use crate::{Result, SamplerError};
use viewloom_core::{Camera, Image, Vec3, View};
use viewloom_diffusion::seeding::derive_seed;
use viewloom_diffusion::{sample, ConditioningSet, Denoiser, Init};
use viewloom_trajectory::is_stationary;

const BULLET_TAG: u64 = 0x626c74;
const BOOT_TAG: u64 = 0x626f6f;

/// The M anchors nearest to a batch centroid, ordered by distance (ties by
/// anchor index).
pub fn nearest_anchor_indices(anchor_centers: &[Vec3], batch_centroid: Vec3, m: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..anchor_centers.len()).collect();
    order.sort_by(|&a, &b| {
        anchor_centers[a]
            .distance(batch_centroid)
            .total_cmp(&anchor_centers[b].distance(batch_centroid))
            .then(a.cmp(&b))
    });
    order.truncate(m);
    order
}

fn centroid(cameras: &[Camera]) -> Vec3 {
    let mut acc = Vec3::ZERO;
    for c in cameras {
        acc = acc + c.center();
    }
    acc / cameras.len() as f64
}

/// Anchored generation of all `view_cameras` at one shared target time: the
/// first N cameras become anchors generated in a single call conditioned on
/// the inputs; remaining cameras are generated in batches of N, each
/// conditioned on the M anchors nearest to the batch centroid.
///
/// The target time must coincide with one input's time. Outputs follow the
/// order of `view_cameras`.
pub fn bullet_time(
    inputs: &[View],
    target_time: f64,
    view_cameras: &[Camera],
    denoiser: &dyn Denoiser,
    cfg: &SamplerConfig,
) -> Result<Vec<Image>> {
    let (n, m) = (cfg.window, cfg.cond_count);
    if inputs.is_empty() {
        return Err(SamplerError::InputMismatch("bullet_time without inputs".into()));
    }
    if !inputs.iter().any(|v| (v.time - target_time).abs() < 1e-9) {
        return Err(SamplerError::NoMatchingInputTime);
    }
    if view_cameras.len() < n {
        return Err(SamplerError::InputMismatch(format!(
            "need at least N = {n} view cameras, got {}",
            view_cameras.len()
        )));
    }
    if n < m {
        return Err(SamplerError::TooFewAnchors { needed: m, got: n });
    }

    let anchor_cams = &view_cameras[..n];
    let times = vec![target_time; n];
    let anchors = sample(
        denoiser,
        &ConditioningSet::full(inputs.to_vec()),
        anchor_cams,
        &times,
        Init::PureNoise,
        &cfg.noise_schedule,
        &cfg.guidance,
        derive_seed(&[cfg.seed, BULLET_TAG, 0]),
    )?;
    let anchor_views: Vec<View> = anchors
        .iter()
        .zip(anchor_cams)
        .map(|(img, cam)| View::new(img.clone(), cam.clone(), target_time))
        .collect::<std::result::Result<_, _>>()?;
    let anchor_centers: Vec<Vec3> = anchor_cams.iter().map(|c| c.center()).collect();

    let mut out = anchors;
    for (bi, batch) in view_cameras[n..].chunks(n).enumerate() {
        let picked = nearest_anchor_indices(&anchor_centers, centroid(batch), m);
        let cond: Vec<View> = picked.iter().map(|&i| anchor_views[i].clone()).collect();
        let times = vec![target_time; batch.len()];
        let imgs = sample(
            denoiser,
            &ConditioningSet::full(cond),
            batch,
            &times,
            Init::PureNoise,
            &cfg.noise_schedule,
            &cfg.guidance,
            derive_seed(&[cfg.seed, BULLET_TAG, bi as u64 + 1]),
        )?;
        out.extend(imgs);
    }
    Ok(out)
}

/// For stationary input videos: generate novel views at the first timestamp
/// (bullet-time mode, conditioned on the first input frame) and append them to
/// the input set. The appended views act as the per-camera input frames for a
/// subsequent grid completion; their provenance is generated, not captured.
pub fn stationary_bootstrap(
    input_video: &[View],
    path: &[Camera],
    denoiser: &dyn Denoiser,
    cfg: &SamplerConfig,
    scene_diagonal: f64,
) -> Result<Vec<View>> {
    if input_video.is_empty() {
        return Err(SamplerError::InputMismatch("empty input video".into()));
    }
    let cameras: Vec<Camera> = input_video.iter().map(|v| v.camera.clone()).collect();
    if !is_stationary(&cameras, scene_diagonal) {
        return Err(SamplerError::NotStationary);
    }
    let t0 = input_video[0].time;
    let base = if cfg.mode == crate::config::SamplerMode::BulletTime {
        cfg.clone()
    } else {
        cfg.to_bullet()
    };
    let bullet_cfg = SamplerConfig { seed: derive_seed(&[cfg.seed, BOOT_TAG]), ..base };
    let images = bullet_time(
        &input_video[..1],
        t0,
        path,
        denoiser,
        &bullet_cfg,
    )?;
    let mut out = input_video.to_vec();
    for (img, cam) in images.into_iter().zip(path) {
        out.push(View::new(img, cam.clone(), t0)?);
    }
    Ok(out)
}
