use crate::adam::Adam;
use crate::deform::DeformationField;
use crate::densify::densify_prune;
use crate::gaussians::GaussianCloud;
use crate::loss::{photometric_loss, LossWeights};
use crate::rasterize::{rasterize, Rasterizer};
use crate::{ReconError, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use viewloom_core::{Aabb, Camera, Image, Vec3, View};

const CANONICAL_TIME_TOL: f64 = 1e-9;

/// A training view plus its provenance: captured input frames keep loss
/// multiplier 1.0, generated frames anneal from 1.0 to 0.5 across phase 2.
#[derive(Debug, Clone)]
pub struct TrainView {
    pub view: View,
    pub generated: bool,
}

#[derive(Debug, Clone)]
pub struct ReconConfig {
    pub weights: LossWeights,
    /// Mean view-space position gradient magnitude that triggers
    /// densification.
    pub densify_grad_threshold: f64,
    pub densify_interval: usize,
    /// Densification stops after this fraction of total iterations.
    pub densify_stop_fraction: f64,
    pub prune_opacity: f64,
    pub split_scale_factor: f64,
    /// World-scale fraction of the bounds extent above which a hot Gaussian
    /// splits instead of cloning.
    pub split_scale_fraction: f64,
    pub batch_size: usize,
    /// Canonical-only warmup iterations (t = 0 views, cloud parameters only).
    pub phase1_iters: usize,
    /// Joint iterations over all views.
    pub phase2_iters: usize,
    pub anneal_from: f64,
    pub anneal_to: f64,
    pub n_init: usize,
    pub init_scale_factor: f64,
    pub max_gaussians: usize,
    /// Position learning rate as a fraction of the bounds extent.
    pub lr_position: f64,
    pub lr_color: f64,
    pub lr_opacity: f64,
    pub lr_scale: f64,
    pub lr_field: f64,
    pub field_resolution: usize,
    pub field_features: usize,
    pub bounds: Aabb,
}

impl ReconConfig {
    pub fn for_bounds(bounds: Aabb) -> Self {
        ReconConfig {
            weights: LossWeights::default(),
            densify_grad_threshold: 0.0004,
            densify_interval: 100,
            densify_stop_fraction: 0.8,
            prune_opacity: 0.005,
            split_scale_factor: 1.6,
            split_scale_fraction: 0.01,
            batch_size: 4,
            phase1_iters: 500,
            phase2_iters: 2500,
            anneal_from: 1.0,
            anneal_to: 0.5,
            n_init: 1000,
            init_scale_factor: 0.35,
            max_gaussians: 30_000,
            lr_position: 1.6e-4,
            lr_color: 2.5e-3,
            lr_opacity: 5e-2,
            lr_scale: 5e-3,
            lr_field: 1e-3,
            field_resolution: 32,
            field_features: 8,
            bounds,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 || self.n_init == 0 {
            return Err(ReconError::Config("batch_size and n_init must be >= 1".into()));
        }
        if self.weights.l1 < 0.0 || self.weights.dssim < 0.0 || self.densify_grad_threshold <= 0.0
        {
            return Err(ReconError::Config("weights must be >= 0, thresholds > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct TrainingStats {
    /// (iteration, mean batch loss)
    pub losses: Vec<(usize, f64)>,
    /// (iteration, gaussian count) after each densify/prune.
    pub gaussian_counts: Vec<(usize, usize)>,
}

fn loss_multiplier(tv: &TrainView, cfg: &ReconConfig, phase2_iter: Option<usize>) -> f64 {
    if !tv.generated {
        return 1.0;
    }
    match phase2_iter {
        None => 1.0,
        Some(i2) => {
            let span = (cfg.phase2_iters - 1).max(1) as f64;
            cfg.anneal_from + (cfg.anneal_to - cfg.anneal_from) * (i2 as f64 / span)
        }
    }
}

/// Two-phase reconstruction: first only the canonical Gaussians against the
/// t=0 views, then Gaussians and deformation field jointly against all views,
/// batches of `batch_size`, densify/prune on a fixed interval, generated-view
/// loss multiplier annealed linearly across phase 2. Deterministic given the
/// seed (single-threaded).
pub fn optimize(
    dataset: &[TrainView],
    cfg: &ReconConfig,
    seed: u64,
) -> Result<(GaussianCloud, DeformationField, TrainingStats)> {
    cfg.validate()?;
    if dataset.is_empty() {
        return Err(ReconError::EmptyDataset);
    }
    let canonical: Vec<usize> = dataset
        .iter()
        .enumerate()
        .filter(|(_, tv)| tv.view.time.abs() <= CANONICAL_TIME_TOL)
        .map(|(i, _)| i)
        .collect();
    if cfg.phase1_iters > 0 && canonical.is_empty() {
        return Err(ReconError::NoCanonicalViews);
    }
    let all: Vec<usize> = (0..dataset.len()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cloud = GaussianCloud::init_random_scaled(
        &cfg.bounds,
        cfg.n_init,
        seed ^ 0x636c6f75,
        cfg.init_scale_factor,
    );
    let mut field = DeformationField::new(
        cfg.field_resolution,
        cfg.field_features,
        cfg.bounds,
        seed ^ 0x6669656c,
    );

    let extent = cfg.bounds.extent().norm();
    let mut adam_pos = Adam::new(cfg.lr_position * extent, 3 * cloud.len());
    let mut adam_scale = Adam::new(cfg.lr_scale, cloud.len());
    let mut adam_opacity = Adam::new(cfg.lr_opacity, cloud.len());
    let mut adam_color = Adam::new(cfg.lr_color, 3 * cloud.len());
    let mut adam_planes = Adam::new(cfg.lr_field, field.planes.iter().map(Vec::len).sum());
    let mut adam_head = Adam::new(cfg.lr_field, field.head.len());

    let total = cfg.phase1_iters + cfg.phase2_iters;
    let densify_until = (total as f64 * cfg.densify_stop_fraction) as usize;
    let mut grad_accum = vec![0.0f64; cloud.len()];
    let mut vis_count = vec![0usize; cloud.len()];
    let mut stats = TrainingStats::default();

    for iter in 0..total {
        let phase2_iter = iter.checked_sub(cfg.phase1_iters);
        let pool = if phase2_iter.is_some() { &all } else { &canonical };
        let n = cloud.len();

        let mut g_pos = vec![Vec3::ZERO; n];
        let mut g_scale = vec![0.0f64; n];
        let mut g_opacity = vec![0.0f64; n];
        let mut g_color = vec![0.0f64; 3 * n];
        let mut g_field = field.zero_grads();
        let mut batch_loss = 0.0;

        for _ in 0..cfg.batch_size {
            let tv = &dataset[pool[rng.gen_range(0..pool.len())]];
            let positions = match phase2_iter {
                Some(_) => field.deform(&cloud.positions, tv.view.time),
                None => cloud.positions.clone(),
            };
            let raster = Rasterizer::new(
                &positions,
                &cloud.log_scales,
                &cloud.opacity_logits,
                &cloud.colors,
                &tv.view.camera,
            );
            let render = raster.render();
            let mult = loss_multiplier(tv, cfg, phase2_iter);
            let (loss, dimg) = photometric_loss(&render, &tv.view.image, &cfg.weights, mult)?;
            batch_loss += loss;
            let g = raster.backward(&dimg);
            for i in 0..n {
                // Deformed position = mu + offset(mu, t): identity path here,
                // coordinate path added by the field backward below.
                g_pos[i] = g_pos[i] + g.positions[i];
                g_scale[i] += g.log_scales[i];
                g_opacity[i] += g.opacity_logits[i];
                for c in 0..3 {
                    g_color[3 * i + c] += g.colors[i][c];
                }
                if g.visible[i] {
                    vis_count[i] += 1;
                    grad_accum[i] += g.view_grad_norms[i];
                }
            }
            if phase2_iter.is_some() {
                field.backward(&cloud.positions, tv.view.time, &g.positions, &mut g_field);
            }
        }

        let inv_b = 1.0 / cfg.batch_size as f64;
        let mut flat_pos = Vec::with_capacity(3 * n);
        let mut flat_pos_grad = Vec::with_capacity(3 * n);
        for i in 0..n {
            let extra = if g_field.positions.is_empty() { Vec3::ZERO } else { g_field.positions[i] };
            let g = (g_pos[i] + extra) * inv_b;
            flat_pos.extend_from_slice(&cloud.positions[i].to_array());
            flat_pos_grad.extend_from_slice(&g.to_array());
        }
        adam_pos.step(&mut flat_pos, &flat_pos_grad);
        for (i, p) in cloud.positions.iter_mut().enumerate() {
            *p = Vec3::new(flat_pos[3 * i], flat_pos[3 * i + 1], flat_pos[3 * i + 2]);
        }
        for v in g_scale.iter_mut().chain(&mut g_opacity).chain(&mut g_color) {
            *v *= inv_b;
        }
        adam_scale.step(&mut cloud.log_scales, &g_scale);
        adam_opacity.step(&mut cloud.opacity_logits, &g_opacity);
        {
            let mut flat: Vec<f64> = cloud.colors.iter().flatten().copied().collect();
            adam_color.step(&mut flat, &g_color);
            for (i, c) in cloud.colors.iter_mut().enumerate() {
                c.copy_from_slice(&flat[3 * i..3 * i + 3]);
            }
        }
        if phase2_iter.is_some() {
            let mut flat: Vec<f64> = field.planes.iter().flatten().copied().collect();
            let flat_grad: Vec<f64> =
                g_field.planes.iter().flatten().map(|&g| g * inv_b).collect();
            adam_planes.step(&mut flat, &flat_grad);
            let mut off = 0;
            for p in &mut field.planes {
                let len = p.len();
                p.copy_from_slice(&flat[off..off + len]);
                off += len;
            }
            let head_grad: Vec<f64> = g_field.head.iter().map(|&g| g * inv_b).collect();
            adam_head.step(&mut field.head, &head_grad);
        }
        stats.losses.push((iter, batch_loss * inv_b));

        let densify_due = (iter + 1) % cfg.densify_interval == 0 && iter + 1 < densify_until;
        if densify_due {
            let mean: Vec<f64> = grad_accum
                .iter()
                .zip(&vis_count)
                .map(|(&g, &c)| if c > 0 { g / c as f64 } else { 0.0 })
                .collect();
            let outcome = densify_prune(&cloud, &mean, cfg, &mut rng);
            adam_pos.remap(&outcome.source, 3);
            adam_scale.remap(&outcome.source, 1);
            adam_opacity.remap(&outcome.source, 1);
            adam_color.remap(&outcome.source, 3);
            cloud = outcome.cloud;
            grad_accum = vec![0.0; cloud.len()];
            vis_count = vec![0; cloud.len()];
            stats.gaussian_counts.push((iter + 1, cloud.len()));
        }
    }
    Ok((cloud, field, stats))
}

/// Render the optimized model at any (camera, time).
pub fn render_model(
    cloud: &GaussianCloud,
    field: &DeformationField,
    camera: &Camera,
    t: f64,
) -> Image {
    let positions = field.deform(&cloud.positions, t);
    rasterize(&positions, &cloud.log_scales, &cloud.opacity_logits, &cloud.colors, camera)
}

/// Static fit of one instant: all views are treated as canonical (t = 0) and
/// only the cloud is optimized. Used as the per-column proxy for the
/// view-consistency score and as a reusable single-time reconstructor.
pub fn fit_static(
    views: &[View],
    bounds: &Aabb,
    iters: usize,
    n_init: usize,
    seed: u64,
) -> Result<GaussianCloud> {
    let dataset: Vec<TrainView> = views
        .iter()
        .map(|v| {
            let mut view = v.clone();
            view.time = 0.0;
            TrainView { view, generated: false }
        })
        .collect();
    let cfg = ReconConfig {
        phase1_iters: iters,
        phase2_iters: 0,
        n_init,
        init_scale_factor: 0.3,
        ..ReconConfig::for_bounds(*bounds)
    };
    let (cloud, _, _) = optimize(&dataset, &cfg, seed)?;
    Ok(cloud)
}
