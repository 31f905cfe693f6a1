use crate::image_metrics::psnr;
use crate::{MetricsError, Result};
use serde::Serialize;
use viewloom_core::{Aabb, Image, Vec3, View, ViewGrid};
use viewloom_recon4d::fit_static;
use viewloom_toyworld::{render, SceneSpec};

/// Consistency scores of a completed grid.
///
/// `temporal_inconsistency`: mean over camera rows and adjacent frame pairs of
/// the residual frame difference; with ground truth available, the true-motion
/// difference is subtracted first so only artifacts register.
///
/// `view_inconsistency`: per column, a static proxy is fitted to the K cells
/// and re-rendered; the score is the mean absolute deviation of the per-cell
/// proxy residuals around the column median, which cancels the proxy's own
/// capacity limit and responds to rows that disagree with the column
/// consensus.
#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub psnr_mean: Option<f64>,
    pub psnr_min: Option<f64>,
    pub temporal_inconsistency: f64,
    pub view_inconsistency: f64,
}

impl ConsistencyReport {
    pub fn combined_inconsistency(&self) -> f64 {
        self.temporal_inconsistency + self.view_inconsistency
    }
}

#[derive(Debug, Clone)]
pub struct ConsistencyConfig {
    /// Iterations of the per-column static proxy fit.
    pub proxy_iters: usize,
    pub proxy_gaussians: usize,
    /// Cells are box-downsampled until their width fits; the proxy only has
    /// to discriminate rows, not match full-resolution detail.
    pub proxy_max_width: u32,
    pub seed: u64,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        ConsistencyConfig { proxy_iters: 160, proxy_gaussians: 256, proxy_max_width: 32, seed: 0 }
    }
}

fn halve_camera(cam: &viewloom_core::Camera) -> viewloom_core::Camera {
    viewloom_core::Camera::new(
        cam.world_from_camera,
        cam.fx / 2.0,
        cam.fy / 2.0,
        cam.cx / 2.0,
        cam.cy / 2.0,
        cam.width / 2,
        cam.height / 2,
    )
    .expect("halved camera stays valid")
}

fn scene_bounds_or_heuristic(grid: &ViewGrid, scene: Option<&SceneSpec>) -> Aabb {
    if let Some(s) = scene {
        return s.bounds;
    }
    // Without ground truth, assume the content sits between the cameras:
    // shrink the camera-center box around its centroid.
    let mut min = grid.camera(0).center();
    let mut max = min;
    for cam in grid.cameras() {
        min = min.min_elementwise(cam.center());
        max = max.max_elementwise(cam.center());
    }
    let center = (min + max) * 0.5;
    let half = (max - min) * 0.35 + Vec3::new(0.5, 0.5, 0.5);
    Aabb::new(center - half, center + half)
}

/// Deterministic consistency scores for a completed grid; ground-truth PSNR is
/// included when the scene is available.
pub fn consistency_report(
    grid: &ViewGrid,
    scene: Option<&SceneSpec>,
    cfg: &ConsistencyConfig,
) -> Result<ConsistencyReport> {
    if !grid.is_complete() {
        return Err(MetricsError::IncompleteGrid);
    }
    let (rows, cols) = (grid.rows(), grid.cols());

    let gt = scene.map(|s| {
        (0..rows)
            .map(|r| (0..cols).map(|c| render(s, grid.camera(r), grid.times()[c])).collect())
            .collect::<Vec<Vec<Image>>>()
    });

    let (psnr_mean, psnr_min) = match &gt {
        None => (None, None),
        Some(gt) => {
            let mut acc = 0.0;
            let mut min = f64::INFINITY;
            for r in 0..rows {
                for c in 0..cols {
                    let p = psnr(grid.cell(r, c).expect("complete"), &gt[r][c])?;
                    acc += p;
                    min = min.min(p);
                }
            }
            (Some(acc / (rows * cols) as f64), Some(min))
        }
    };

    // Temporal: adjacent-frame residual per row, ground-truth motion
    // compensated when available.
    let temporal_inconsistency = if cols < 2 {
        0.0
    } else {
        let mut acc = 0.0;
        for r in 0..rows {
            for c in 0..cols - 1 {
                let a = grid.cell(r, c).expect("complete");
                let b = grid.cell(r, c + 1).expect("complete");
                let residual = match &gt {
                    None => b.mean_abs_diff(a),
                    Some(gt) => {
                        let mut acc_px = 0.0;
                        let (ga, gb) = (&gt[r][c], &gt[r][c + 1]);
                        for i in 0..a.data().len() {
                            let d = (b.data()[i] - a.data()[i]) - (gb.data()[i] - ga.data()[i]);
                            acc_px += d.abs();
                        }
                        acc_px / a.data().len() as f64
                    }
                };
                acc += residual;
            }
        }
        acc / (rows * (cols - 1)) as f64
    };

    // View: per-column proxy fit, deviation of per-cell residuals around the
    // column median. Columns are independent; the fit works at reduced
    // resolution.
    let bounds = scene_bounds_or_heuristic(grid, scene).expand(0.1);
    let mut proxy_cams: Vec<viewloom_core::Camera> = grid.cameras().to_vec();
    let mut levels = 0u32;
    while proxy_cams[0].width > cfg.proxy_max_width && proxy_cams[0].width % 2 == 0 {
        proxy_cams = proxy_cams.iter().map(halve_camera).collect();
        levels += 1;
    }
    use rayon::prelude::*;
    let column_scores = (0..cols)
        .into_par_iter()
        .map(|c| -> Result<f64> {
            let cells: Vec<Image> = (0..rows)
                .map(|r| {
                    let mut img = grid.cell(r, c).expect("complete").clone();
                    for _ in 0..levels {
                        img = img.downsample2x();
                    }
                    img
                })
                .collect();
            let views: Vec<View> = cells
                .iter()
                .zip(&proxy_cams)
                .map(|(img, cam)| View::new(img.clone(), cam.clone(), 0.0))
                .collect::<std::result::Result<_, _>>()
                .map_err(viewloom_recon4d::ReconError::from)?;
            let proxy = fit_static(
                &views,
                &bounds,
                cfg.proxy_iters,
                cfg.proxy_gaussians,
                cfg.seed ^ (c as u64).wrapping_mul(0x9e37),
            )?;
            let mut residuals: Vec<f64> = Vec::with_capacity(rows);
            for (cell, cam) in cells.iter().zip(&proxy_cams) {
                let re = viewloom_recon4d::rasterize(
                    &proxy.positions,
                    &proxy.log_scales,
                    &proxy.opacity_logits,
                    &proxy.colors,
                    cam,
                );
                residuals.push(re.mean_abs_diff(cell));
            }
            let mut sorted = residuals.clone();
            sorted.sort_by(f64::total_cmp);
            let median = sorted[(sorted.len() - 1) / 2];
            Ok(residuals.iter().map(|r| (r - median).abs()).sum::<f64>() / rows as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let view_inconsistency = column_scores.iter().sum::<f64>() / cols as f64;

    Ok(ConsistencyReport { psnr_mean, psnr_min, temporal_inconsistency, view_inconsistency })
}
