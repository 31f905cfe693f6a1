use crate::scene::{Background, Motion, Primitive, SceneSpec, Shape};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;
use viewloom_core::Vec3;

#[derive(Debug, Error)]
pub enum ToyWorldError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// Value ranges for the scene generator. Defaults keep primitives within the
/// field of view of an orbit camera at radius ~4 and the environment close to
/// mid-gray.
#[derive(Debug, Clone)]
pub struct GenerateConfig {
    pub base_region: f64,
    pub size_range: (f64, f64),
    pub linear_speed: f64,
    pub orbit_radius: (f64, f64),
    pub static_fraction: f64,
    pub background_contrast: f64,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        GenerateConfig {
            base_region: 0.9,
            size_range: (0.3, 0.55),
            linear_speed: 0.9,
            orbit_radius: (0.25, 0.5),
            static_fraction: 0.3,
            background_contrast: 0.05,
        }
    }
}

pub fn generate_scene(seed: u64, n_primitives: usize) -> Result<SceneSpec, ToyWorldError> {
    generate_scene_with(seed, n_primitives, &GenerateConfig::default())
}

pub fn generate_scene_with(
    seed: u64,
    n_primitives: usize,
    cfg: &GenerateConfig,
) -> Result<SceneSpec, ToyWorldError> {
    if n_primitives == 0 {
        return Err(ToyWorldError::Parameter("n_primitives must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut primitives = Vec::with_capacity(n_primitives);
    for i in 0..n_primitives {
        let shape = if rng.gen_bool(0.5) { Shape::Sphere } else { Shape::Box };
        let r = cfg.base_region;
        let base_position = Vec3::new(
            rng.gen_range(-r..r),
            rng.gen_range(-0.6 * r..0.6 * r),
            rng.gen_range(-r..r),
        );
        let size = rng.gen_range(cfg.size_range.0..cfg.size_range.1);
        let albedo = [
            rng.gen_range(0.1..0.9),
            rng.gen_range(0.1..0.9),
            rng.gen_range(0.1..0.9),
        ];
        // Phases get a per-index offset so movers are pairwise distinct.
        let phase = rng.gen_range(0.0..0.3) + i as f64 * 0.37;
        // The first primitive always moves.
        let motion = if i > 0 && rng.gen_bool(cfg.static_fraction) {
            Motion::Static
        } else {
            match rng.gen_range(0u32..3) {
                0 => Motion::Linear {
                    amplitude: Vec3::new(
                        rng.gen_range(-cfg.linear_speed..cfg.linear_speed),
                        rng.gen_range(-0.3 * cfg.linear_speed..0.3 * cfg.linear_speed),
                        rng.gen_range(-cfg.linear_speed..cfg.linear_speed),
                    ),
                },
                1 => Motion::Orbit {
                    radius: rng.gen_range(cfg.orbit_radius.0..cfg.orbit_radius.1),
                    phase,
                },
                _ => Motion::Bounce {
                    amplitude: Vec3::new(
                        rng.gen_range(-0.5 * cfg.linear_speed..0.5 * cfg.linear_speed),
                        rng.gen_range(-0.4 * cfg.linear_speed..0.4 * cfg.linear_speed),
                        rng.gen_range(-0.5 * cfg.linear_speed..0.5 * cfg.linear_speed),
                    ),
                    phase,
                },
            }
        };
        primitives.push(Primitive { shape, base_position, size, albedo, motion });
    }

    let c = cfg.background_contrast;
    let background = Background {
        top: [
            0.5 + rng.gen_range(0.0..c),
            0.5 + rng.gen_range(0.0..c),
            0.5 + rng.gen_range(0.0..c),
        ],
        bottom: [
            0.5 - rng.gen_range(0.0..c),
            0.5 - rng.gen_range(0.0..c),
            0.5 - rng.gen_range(0.0..c),
        ],
    };

    let mut bounds = primitives[0].swept_bounds();
    for p in &primitives[1..] {
        bounds = bounds.union(&p.swept_bounds());
    }
    let bounds = bounds.expand(0.1);

    Ok(SceneSpec { seed, primitives, background, bounds })
}
