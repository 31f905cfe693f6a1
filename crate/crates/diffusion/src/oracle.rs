use crate::noise::blur_image;
use crate::schedule::NoiseSchedule;
use crate::seeding::ContentHasher;
use crate::types::{ConditioningSet, Denoiser, LatentBatch};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use viewloom_core::{Camera, Image};
use viewloom_toyworld::{render, SceneSpec};

/// Deviations injected into the oracle for realism experiments. The exact
/// oracle is all-zero amplitudes and predicts the ground-truth render
/// regardless of the latent state.
///
/// `bias_amplitude`: camera-indexed smooth color bias added to every
/// prediction for that camera. `time_jitter`: per-window time offset, |dt| <=
/// jitter, derived from the target set so it is stable across substeps and
/// dropout variants of one sampling call. `evidence_sigma`: when > 0 the
/// prediction becomes a precision-weighted blend of the render (the model
/// prior, uncertainty `evidence_sigma`) and the low-frequency content of the
/// current latent, which is what lets SDEdit initialization carry information
/// between sampling passes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionSpec {
    pub bias_amplitude: f64,
    pub time_jitter: f64,
    pub evidence_sigma: f64,
    pub evidence_blur_sigma: f64,
    pub seed: u64,
}

impl CorruptionSpec {
    pub fn none() -> Self {
        CorruptionSpec {
            bias_amplitude: 0.0,
            time_jitter: 0.0,
            evidence_sigma: 0.0,
            evidence_blur_sigma: 2.0,
            seed: 0,
        }
    }

    pub fn realism(bias_amplitude: f64, time_jitter: f64, seed: u64) -> Self {
        CorruptionSpec {
            bias_amplitude,
            time_jitter,
            evidence_sigma: 0.5,
            evidence_blur_sigma: 2.0,
            seed,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.bias_amplitude == 0.0 && self.time_jitter == 0.0 && self.evidence_sigma == 0.0
    }
}

impl Default for CorruptionSpec {
    fn default() -> Self {
        CorruptionSpec::none()
    }
}

/// Denoiser whose clean-image prediction comes from the analytic toy world:
/// with full conditioning it predicts the render at the target (camera, time);
/// with time dropped, the render at the first conditioning view's time; with
/// everything dropped, the scene's mean color.
///
/// Renders and bias fields are memoized: the same (camera, time) pair recurs
/// at every DDIM substep of a sampling call, and the cached value is exactly
/// what would be recomputed.
pub struct OracleDenoiser {
    scene: SceneSpec,
    schedule: NoiseSchedule,
    corruption: CorruptionSpec,
    render_cache: std::sync::Mutex<std::collections::HashMap<u64, Image>>,
    bias_cache: std::sync::Mutex<std::collections::HashMap<u64, Image>>,
}

const CACHE_CAP: usize = 4096;

impl OracleDenoiser {
    pub fn new(scene: SceneSpec, schedule: NoiseSchedule, corruption: CorruptionSpec) -> Self {
        OracleDenoiser {
            scene,
            schedule,
            corruption,
            render_cache: std::sync::Mutex::new(std::collections::HashMap::new()),
            bias_cache: std::sync::Mutex::new(std::collections::HashMap::new()),
        }
    }

    fn cached_render(&self, cam: &Camera, t: f64) -> Image {
        let mut h = ContentHasher::new(0x72656e64);
        push_camera(&mut h, cam);
        h.push_f64(t);
        let key = h.finish();
        if let Some(img) = self.render_cache.lock().unwrap().get(&key) {
            return img.clone();
        }
        let img = render(&self.scene, cam, t);
        let mut cache = self.render_cache.lock().unwrap();
        if cache.len() >= CACHE_CAP {
            cache.clear();
        }
        cache.insert(key, img.clone());
        img
    }

    pub fn exact(scene: SceneSpec, schedule: NoiseSchedule) -> Self {
        OracleDenoiser::new(scene, schedule, CorruptionSpec::none())
    }

    pub fn scene(&self) -> &SceneSpec {
        &self.scene
    }

    fn window_jitter(&self, batch: &LatentBatch) -> f64 {
        if self.corruption.time_jitter == 0.0 {
            return 0.0;
        }
        let mut h = ContentHasher::new(self.corruption.seed ^ 0x7769_6e64);
        h.push_u64(batch.len() as u64);
        for (cam, &t) in batch.cameras.iter().zip(&batch.times) {
            push_camera(&mut h, cam);
            h.push_f64(t);
        }
        h.unit_signed() * self.corruption.time_jitter
    }

    fn camera_bias(&self, cam: &Camera) -> Option<Image> {
        if self.corruption.bias_amplitude == 0.0 {
            return None;
        }
        let mut h = ContentHasher::new(self.corruption.seed ^ 0x6269_6173);
        push_camera(&mut h, cam);
        let key = h.finish();
        if let Some(img) = self.bias_cache.lock().unwrap().get(&key) {
            return Some(img.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        let (fu, fv): (f64, f64) = (rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5));
        let phases = [
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
        ];
        let a = self.corruption.bias_amplitude;
        let mut img = Image::new(cam.width, cam.height);
        for y in 0..cam.height {
            for x in 0..cam.width {
                let arg = TAU * (fu * x as f64 / cam.width as f64 + fv * y as f64 / cam.height as f64);
                img.set_pixel(
                    x,
                    y,
                    [
                        a * (arg + phases[0]).sin(),
                        a * (arg + phases[1]).sin(),
                        a * (arg + phases[2]).sin(),
                    ],
                );
            }
        }
        let mut cache = self.bias_cache.lock().unwrap();
        if cache.len() >= CACHE_CAP {
            cache.clear();
        }
        cache.insert(key, img.clone());
        Some(img)
    }
}

fn push_camera(h: &mut ContentHasher, cam: &Camera) {
    for row in &cam.world_from_camera.rotation.rows {
        h.push_f64s(row);
    }
    let t = cam.world_from_camera.translation;
    h.push_f64s(&[t.x, t.y, t.z, cam.fx, cam.fy, cam.cx, cam.cy]);
    h.push_u64(cam.width as u64);
    h.push_u64(cam.height as u64);
}

impl Denoiser for OracleDenoiser {
    fn predict(&self, batch: &LatentBatch, cond: &ConditioningSet) -> Vec<Image> {
        let alpha = self.schedule.alpha_bar_at_level(batch.level);
        let (sa, sb) = (alpha.sqrt(), (1.0 - alpha).sqrt());
        let jitter = self.window_jitter(batch);
        let t_first = cond.first_time().unwrap_or(0.0);

        let mut out = Vec::with_capacity(batch.len());
        for ((z, cam), &t_target) in batch.targets.iter().zip(&batch.cameras).zip(&batch.times) {
            let mut x0 = if cond.images_present {
                let t = if cond.times_present { t_target } else { t_first };
                self.cached_render(cam, (t + jitter).clamp(0.0, 1.0))
            } else {
                Image::filled(cam.width, cam.height, self.scene.mean_color())
            };
            if let Some(bias) = self.camera_bias(cam) {
                for (o, &b) in x0.data_mut().iter_mut().zip(bias.data()) {
                    *o += b;
                }
            }
            if self.corruption.evidence_sigma > 0.0 {
                // Posterior blend of prior (render) and latent evidence; the
                // blur keeps the carried content and discards pixel noise.
                let weight = {
                    let lz = alpha / (1.0 - alpha);
                    let lp = 1.0 / (self.corruption.evidence_sigma * self.corruption.evidence_sigma);
                    lz / (lz + lp)
                };
                let mut residual = z.clone();
                for (r, &p) in residual.data_mut().iter_mut().zip(x0.data()) {
                    *r = *r / sa - p;
                }
                let residual = blur_image(&residual, self.corruption.evidence_blur_sigma);
                for (o, &r) in x0.data_mut().iter_mut().zip(residual.data()) {
                    *o += weight * r;
                }
            }
            let mut eps = z.clone();
            for (e, &p) in eps.data_mut().iter_mut().zip(x0.data()) {
                *e = (*e - sa * p) / sb;
            }
            out.push(eps);
        }
        out
    }
}

/// Test denoiser returning the noise consistent with a fixed clean batch, for
/// every dropout variant; guidance telescopes and DDIM recovers the batch
/// exactly.
pub struct ConstantX0Denoiser {
    x0: Vec<Image>,
    schedule: NoiseSchedule,
}

impl ConstantX0Denoiser {
    pub fn new(x0: Vec<Image>, schedule: NoiseSchedule) -> Self {
        ConstantX0Denoiser { x0, schedule }
    }
}

impl Denoiser for ConstantX0Denoiser {
    fn predict(&self, batch: &LatentBatch, _cond: &ConditioningSet) -> Vec<Image> {
        assert_eq!(batch.len(), self.x0.len(), "target count mismatch");
        let alpha = self.schedule.alpha_bar_at_level(batch.level);
        let (sa, sb) = (alpha.sqrt(), (1.0 - alpha).sqrt());
        batch
            .targets
            .iter()
            .zip(&self.x0)
            .map(|(z, x)| {
                let mut e = z.clone();
                for (o, &xv) in e.data_mut().iter_mut().zip(x.data()) {
                    *o = (*o - sa * xv) / sb;
                }
                e
            })
            .collect()
    }
}
