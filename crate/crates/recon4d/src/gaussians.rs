use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use viewloom_core::{Aabb, Vec3};

/// Canonical isotropic Gaussians: world position, log of the isotropic scale,
/// opacity logit, RGB color. Activations (exp, sigmoid) are applied at render
/// time so the optimizer works on unconstrained parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCloud {
    pub positions: Vec<Vec3>,
    pub log_scales: Vec<f64>,
    pub opacity_logits: Vec<f64>,
    pub colors: Vec<[f64; 3]>,
}

impl GaussianCloud {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Uniform random initialization in the scene bounds; the fallback when no
    /// point cloud is available.
    pub fn init_random(bounds: &Aabb, n: usize, seed: u64) -> Self {
        Self::init_random_scaled(bounds, n, seed, 0.5)
    }

    /// `scale_factor` tunes the initial footprint relative to the mean
    /// nearest-neighbor spacing; smaller starts render faster (less overlap)
    /// at the price of early coverage.
    pub fn init_random_scaled(bounds: &Aabb, n: usize, seed: u64, scale_factor: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ext = bounds.extent();
        // Initial footprint shrinks with density.
        let scale = scale_factor * ext.norm() / (n as f64).cbrt().max(1.0);
        let mut cloud = GaussianCloud {
            positions: Vec::with_capacity(n),
            log_scales: vec![scale.ln(); n],
            opacity_logits: vec![(0.1f64 / 0.9).ln(); n],
            colors: Vec::with_capacity(n),
        };
        for _ in 0..n {
            cloud.positions.push(Vec3::new(
                bounds.min.x + rng.gen::<f64>() * ext.x,
                bounds.min.y + rng.gen::<f64>() * ext.y,
                bounds.min.z + rng.gen::<f64>() * ext.z,
            ));
            let g = 0.3 + 0.4 * rng.gen::<f64>();
            cloud.colors.push([g, g, g]);
        }
        cloud
    }

    pub fn scales(&self) -> Vec<f64> {
        self.log_scales.iter().map(|s| s.exp()).collect()
    }

    pub fn opacities(&self) -> Vec<f64> {
        self.opacity_logits.iter().map(|o| 1.0 / (1.0 + (-o).exp())).collect()
    }

    pub fn all_finite(&self) -> bool {
        self.positions.iter().all(|p| p.x.is_finite() && p.y.is_finite() && p.z.is_finite())
            && self.log_scales.iter().all(|v| v.is_finite())
            && self.opacity_logits.iter().all(|v| v.is_finite())
            && self.colors.iter().flatten().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_init_stays_in_bounds() {
        let bounds = Aabb::new(Vec3::new(-1.0, -2.0, 0.0), Vec3::new(1.0, 0.0, 3.0));
        let cloud = GaussianCloud::init_random(&bounds, 500, 3);
        assert_eq!(cloud.len(), 500);
        assert!(cloud.positions.iter().all(|&p| bounds.contains(p)));
        assert!(cloud.all_finite());
        assert_eq!(cloud, GaussianCloud::init_random(&bounds, 500, 3));
        for o in cloud.opacities() {
            assert!((o - 0.1).abs() < 1e-12);
        }
    }
}
