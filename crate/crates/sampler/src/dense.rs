use crate::bullet::nearest_anchor_indices;
use crate::config::SamplerConfig;
use crate::{Result, SamplerError};
use viewloom_core::{Camera, Vec3, View, ViewGrid};
use viewloom_diffusion::seeding::derive_seed;
use viewloom_diffusion::{sample, ConditioningSet, Denoiser, Init};

const DENSE_TAG: u64 = 0x646e73;

/// For each timestep of a completed grid, generate the novel cameras in
/// batches of N, each batch conditioned on the M grid views (at that column)
/// nearest to the batch centroid. Returns one list of K' views per timestep.
pub fn dense_views(
    grid: &ViewGrid,
    novel_cameras: &[Camera],
    denoiser: &dyn Denoiser,
    cfg: &SamplerConfig,
) -> Result<Vec<Vec<View>>> {
    if !grid.is_complete() {
        return Err(SamplerError::IncompleteGrid);
    }
    if novel_cameras.is_empty() {
        return Ok(vec![Vec::new(); grid.cols()]);
    }
    let (n, m) = (cfg.window, cfg.cond_count);
    if grid.rows() < m {
        return Err(SamplerError::TooFewAnchors { needed: m, got: grid.rows() });
    }
    let anchor_centers: Vec<Vec3> = grid.cameras().iter().map(|c| c.center()).collect();

    let mut per_timestep = Vec::with_capacity(grid.cols());
    for t in 0..grid.cols() {
        let time = grid.times()[t];
        let column_views: Vec<View> = (0..grid.rows())
            .map(|r| {
                View::new(
                    grid.cell(r, t).expect("grid is complete").clone(),
                    grid.camera(r).clone(),
                    time,
                )
            })
            .collect::<std::result::Result<_, _>>()?;

        let mut views_t = Vec::with_capacity(novel_cameras.len());
        for (bi, batch) in novel_cameras.chunks(n).enumerate() {
            let centroid = {
                let mut acc = Vec3::ZERO;
                for c in batch {
                    acc = acc + c.center();
                }
                acc / batch.len() as f64
            };
            let picked = nearest_anchor_indices(&anchor_centers, centroid, m);
            let cond: Vec<View> = picked.iter().map(|&i| column_views[i].clone()).collect();
            let times = vec![time; batch.len()];
            let imgs = sample(
                denoiser,
                &ConditioningSet::full(cond),
                batch,
                &times,
                Init::PureNoise,
                &cfg.noise_schedule,
                &cfg.guidance,
                derive_seed(&[cfg.seed, DENSE_TAG, t as u64, bi as u64]),
            )?;
            for (img, cam) in imgs.into_iter().zip(batch) {
                views_t.push(View::new(img, cam.clone(), time)?);
            }
        }
        per_timestep.push(views_t);
    }
    Ok(per_timestep)
}
