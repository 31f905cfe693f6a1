use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use viewloom_core::{Aabb, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Sphere,
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Motion {
    Static,
    /// position(t) = base + amplitude * t
    Linear { amplitude: Vec3 },
    /// Circle of the given radius in the xz plane, starting at base.
    Orbit { radius: f64, phase: f64 },
    /// Sinusoidal oscillation: base + amplitude * sin(2 pi (t + phase)).
    Bounce { amplitude: Vec3, phase: f64 },
}

impl Motion {
    pub fn is_static(&self) -> bool {
        matches!(self, Motion::Static)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Primitive {
    pub shape: Shape,
    pub base_position: Vec3,
    /// Sphere radius, or box half-extent.
    pub size: f64,
    pub albedo: [f64; 3],
    pub motion: Motion,
}

impl Primitive {
    pub fn position_at(&self, t: f64) -> Vec3 {
        match self.motion {
            Motion::Static => self.base_position,
            Motion::Linear { amplitude } => self.base_position + amplitude * t,
            Motion::Orbit { radius, phase } => {
                let a0 = phase;
                let a = TAU * t + phase;
                self.base_position
                    + Vec3::new(radius * (a.cos() - a0.cos()), 0.0, radius * (a.sin() - a0.sin()))
            }
            Motion::Bounce { amplitude, phase } => {
                self.base_position + amplitude * (TAU * (t + phase)).sin()
            }
        }
    }

    /// Box containing the primitive surface over all t in [0, 1].
    pub fn swept_bounds(&self) -> Aabb {
        let mut min = self.position_at(0.0);
        let mut max = min;
        match self.motion {
            Motion::Static => {}
            Motion::Linear { .. } => {
                let p1 = self.position_at(1.0);
                min = min.min_elementwise(p1);
                max = max.max_elementwise(p1);
            }
            Motion::Orbit { radius, .. } => {
                let c = self.base_position;
                let r = radius.abs() * 2.0; // center offset keeps |p - base| <= 2r
                min = min.min_elementwise(c - Vec3::new(r, 0.0, r));
                max = max.max_elementwise(c + Vec3::new(r, 0.0, r));
            }
            Motion::Bounce { amplitude, .. } => {
                let a = Vec3::new(amplitude.x.abs(), amplitude.y.abs(), amplitude.z.abs());
                min = min.min_elementwise(self.base_position - a);
                max = max.max_elementwise(self.base_position + a);
            }
        }
        let s = Vec3::new(self.size, self.size, self.size);
        Aabb::new(min - s, max + s)
    }
}

/// Environment gradient over ray direction: `top` straight up, `bottom`
/// straight down, view-consistent by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Background {
    pub top: [f64; 3],
    pub bottom: [f64; 3],
}

impl Background {
    pub fn color(&self, dir: Vec3) -> [f64; 3] {
        let t = 0.5 * (dir.y + 1.0);
        [
            self.bottom[0] + (self.top[0] - self.bottom[0]) * t,
            self.bottom[1] + (self.top[1] - self.bottom[1]) * t,
            self.bottom[2] + (self.top[2] - self.bottom[2]) * t,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub seed: u64,
    pub primitives: Vec<Primitive>,
    pub background: Background,
    pub bounds: Aabb,
}

impl SceneSpec {
    /// Mid-gray of the environment; the oracle denoiser's unconditional guess.
    pub fn mean_color(&self) -> [f64; 3] {
        [
            0.5 * (self.background.top[0] + self.background.bottom[0]),
            0.5 * (self.background.top[1] + self.background.bottom[1]),
            0.5 * (self.background.top[2] + self.background.bottom[2]),
        ]
    }

    pub fn has_motion(&self) -> bool {
        self.primitives.iter().any(|p| !p.motion.is_static())
    }

    /// Centers stay inside bounds at `samples` evenly spaced times.
    pub fn motion_bounded(&self, samples: usize) -> bool {
        self.primitives.iter().all(|p| {
            (0..samples).all(|i| {
                let t = i as f64 / (samples.max(2) - 1) as f64;
                self.bounds.contains(p.position_at(t))
            })
        })
    }
}
