use crate::gaussians::GaussianCloud;
use crate::optimize::ReconConfig;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use viewloom_core::Vec3;

/// New cloud plus, per new Gaussian, the old index its optimizer state carries
/// over from (None = freshly spawned, zero state).
#[derive(Debug, Clone)]
pub struct DensifyOutcome {
    pub cloud: GaussianCloud,
    pub source: Vec<Option<usize>>,
}

/// Clone/split Gaussians whose accumulated mean view-space position gradient
/// exceeds the threshold, then prune low-opacity ones. Small Gaussians clone
/// (one extra, slightly offset); large ones split into two children with
/// scale divided by the split factor.
pub fn densify_prune(
    cloud: &GaussianCloud,
    mean_view_grads: &[f64],
    cfg: &ReconConfig,
    rng: &mut ChaCha8Rng,
) -> DensifyOutcome {
    assert_eq!(mean_view_grads.len(), cloud.len(), "gradient accumulator size");
    let split_threshold_world = cfg.split_scale_fraction * cfg.bounds.extent().norm();
    let opacities = cloud.opacities();
    let allow_growth = cloud.len() < cfg.max_gaussians;

    let mut out = GaussianCloud {
        positions: Vec::new(),
        log_scales: Vec::new(),
        opacity_logits: Vec::new(),
        colors: Vec::new(),
    };
    let mut source = Vec::new();
    let push = |c: &mut GaussianCloud,
                    src: &mut Vec<Option<usize>>,
                    pos: Vec3,
                    ls: f64,
                    op: f64,
                    col: [f64; 3],
                    from: Option<usize>| {
        c.positions.push(pos);
        c.log_scales.push(ls);
        c.opacity_logits.push(op);
        c.colors.push(col);
        src.push(from);
    };

    for i in 0..cloud.len() {
        if opacities[i] < cfg.prune_opacity {
            continue;
        }
        let scale = cloud.log_scales[i].exp();
        let hot = allow_growth && mean_view_grads[i] > cfg.densify_grad_threshold;
        if hot && scale > split_threshold_world {
            // Split: two children at +/- half a scale along a random
            // direction, scale reduced.
            let dir = random_unit(rng) * (0.5 * scale);
            let child_ls = cloud.log_scales[i] - cfg.split_scale_factor.ln();
            push(
                &mut out,
                &mut source,
                cloud.positions[i] + dir,
                child_ls,
                cloud.opacity_logits[i],
                cloud.colors[i],
                Some(i),
            );
            push(
                &mut out,
                &mut source,
                cloud.positions[i] - dir,
                child_ls,
                cloud.opacity_logits[i],
                cloud.colors[i],
                None,
            );
        } else if hot {
            // Clone: keep the original, spawn a slightly offset copy.
            push(
                &mut out,
                &mut source,
                cloud.positions[i],
                cloud.log_scales[i],
                cloud.opacity_logits[i],
                cloud.colors[i],
                Some(i),
            );
            let dir = random_unit(rng) * (0.05 * scale);
            push(
                &mut out,
                &mut source,
                cloud.positions[i] + dir,
                cloud.log_scales[i],
                cloud.opacity_logits[i],
                cloud.colors[i],
                None,
            );
        } else {
            push(
                &mut out,
                &mut source,
                cloud.positions[i],
                cloud.log_scales[i],
                cloud.opacity_logits[i],
                cloud.colors[i],
                Some(i),
            );
        }
    }
    DensifyOutcome { cloud: out, source }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
        );
        let n = v.norm();
        if n > 1e-6 && n <= 1.0 {
            return v / n;
        }
    }
}
