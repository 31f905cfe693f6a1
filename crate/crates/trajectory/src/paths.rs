use crate::TrajectoryError;
use std::f64::consts::TAU;
use viewloom_core::{Camera, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    /// Horizontal circle around the center, look-at orientation.
    Orbit,
    /// Orbit with a sinusoidal radial offset, moving into and out of the scene.
    InOutSpiral,
    /// Helix advancing along a base direction with look-ahead orientation.
    ForwardSpiral,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PathParams {
    pub center: Vec3,
    pub radius: f64,
    pub turns: f64,
    pub count: usize,
    /// Height above the center; world up is -y.
    pub elevation: f64,
    pub fx: f64,
    pub fy: f64,
    pub width: u32,
    pub height: u32,
}

impl PathParams {
    pub fn new(center: Vec3, radius: f64, count: usize) -> Self {
        PathParams {
            center,
            radius,
            turns: 1.0,
            count,
            elevation: 0.0,
            fx: 64.0,
            fy: 64.0,
            width: 64,
            height: 64,
        }
    }
}

const WORLD_UP: Vec3 = Vec3 { x: 0.0, y: -1.0, z: 0.0 };

fn validate(params: &PathParams) -> Result<(), TrajectoryError> {
    if params.count == 0 {
        return Err(TrajectoryError::InvalidParams("count must be >= 1".into()));
    }
    if params.radius <= 0.0 {
        return Err(TrajectoryError::InvalidParams("radius must be > 0".into()));
    }
    Ok(())
}

fn look_at_camera(eye: Vec3, target: Vec3, p: &PathParams) -> Result<Camera, TrajectoryError> {
    Ok(Camera::look_at(
        eye,
        target,
        WORLD_UP,
        p.fx,
        p.fy,
        p.width as f64 / 2.0,
        p.height as f64 / 2.0,
        p.width,
        p.height,
    )?)
}

/// Deterministic parametric camera paths. Azimuths are evenly spaced over
/// `turns` full revolutions; all cameras satisfy the camera invariants.
pub fn make_path(kind: PathKind, params: &PathParams) -> Result<Vec<Camera>, TrajectoryError> {
    validate(params)?;
    let n = params.count;
    let mut cams = Vec::with_capacity(n);
    match kind {
        PathKind::Orbit => {
            for i in 0..n {
                let a = TAU * params.turns * i as f64 / n as f64;
                let eye = params.center
                    + Vec3::new(params.radius * a.cos(), -params.elevation, params.radius * a.sin());
                cams.push(look_at_camera(eye, params.center, params)?);
            }
        }
        PathKind::InOutSpiral => {
            for i in 0..n {
                let s = i as f64 / n as f64;
                let a = TAU * params.turns * s;
                // Radius swings between 0.4 r and 1.6 r.
                let r = params.radius * (1.0 + 0.6 * (TAU * s).sin());
                let eye = params.center
                    + Vec3::new(r * a.cos(), -params.elevation, r * a.sin());
                cams.push(look_at_camera(eye, params.center, params)?);
            }
        }
        PathKind::ForwardSpiral => {
            // Helix around a straight base path along +z through the center;
            // orientation looks ahead along the base path.
            let advance = 2.0 * params.radius;
            for i in 0..n {
                let s = i as f64 / n as f64;
                let a = TAU * params.turns * s;
                let base = params.center + Vec3::new(0.0, -params.elevation, advance * (s - 0.5));
                let eye = base
                    + Vec3::new(0.4 * params.radius * a.cos(), 0.4 * params.radius * a.sin(), 0.0);
                let target = base + Vec3::new(0.0, 0.0, 2.0 * params.radius);
                cams.push(look_at_camera(eye, target, params)?);
            }
        }
    }
    Ok(cams)
}
