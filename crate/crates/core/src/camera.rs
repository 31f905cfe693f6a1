use crate::error::CoreError;
use crate::math::{Mat3, RigidTransform, Vec3};
use crate::Result;

const MIN_DEPTH: f64 = 1e-8;
const ORTHONORMALITY_TOL: f64 = 1e-6;

/// Pinhole camera. Convention: `world_from_camera` maps camera coordinates to
/// world coordinates (camera-to-world); camera frame is right-handed with +x
/// right, +y down in the image, +z forward.
#[derive(Debug, Clone, PartialEq)]
pub struct Camera {
    pub world_from_camera: RigidTransform,
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: u32,
    pub height: u32,
}

impl Camera {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        world_from_camera: RigidTransform,
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        width: u32,
        height: u32,
    ) -> Result<Self> {
        let cam = Camera { world_from_camera, fx, fy, cx, cy, width, height };
        cam.validate()?;
        Ok(cam)
    }

    pub fn validate(&self) -> Result<()> {
        let err = self.world_from_camera.rotation.orthonormality_error();
        if err > ORTHONORMALITY_TOL {
            return Err(CoreError::InvalidCamera(format!(
                "rotation not orthonormal (deviation {err:.2e})"
            )));
        }
        if !(self.fx > 0.0 && self.fy > 0.0) {
            return Err(CoreError::InvalidCamera(format!(
                "focal lengths must be positive (fx={}, fy={})",
                self.fx, self.fy
            )));
        }
        if !(0.0 <= self.cx && self.cx < self.width as f64)
            || !(0.0 <= self.cy && self.cy < self.height as f64)
        {
            return Err(CoreError::InvalidCamera(format!(
                "principal point ({}, {}) outside {}x{} image",
                self.cx, self.cy, self.width, self.height
            )));
        }
        Ok(())
    }

    /// A camera positioned at `eye` looking at `target`, image upright with
    /// respect to `up`.
    #[allow(clippy::too_many_arguments)]
    pub fn look_at(
        eye: Vec3,
        target: Vec3,
        up: Vec3,
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        width: u32,
        height: u32,
    ) -> Result<Self> {
        let forward = target - eye;
        if forward.norm() < 1e-12 {
            return Err(CoreError::InvalidCamera("look_at eye == target".into()));
        }
        let z_axis = forward.normalized();
        let mut x_axis = z_axis.cross(up);
        if x_axis.norm() < 1e-9 {
            // Viewing along `up`; pick an arbitrary perpendicular.
            let alt = if z_axis.x.abs() < 0.9 {
                Vec3::new(1.0, 0.0, 0.0)
            } else {
                Vec3::new(0.0, 0.0, 1.0)
            };
            x_axis = z_axis.cross(alt);
        }
        let x_axis = x_axis.normalized();
        let y_axis = z_axis.cross(x_axis);
        let rotation = Mat3::from_columns(x_axis, y_axis, z_axis);
        Camera::new(RigidTransform::new(rotation, eye), fx, fy, cx, cy, width, height)
    }

    pub fn center(&self) -> Vec3 {
        self.world_from_camera.translation
    }

    /// Camera +z axis in world coordinates.
    pub fn forward(&self) -> Vec3 {
        self.world_from_camera.rotation.column(2)
    }

    /// Project a world point to pixel coordinates; returns (u, v, depth).
    pub fn project(&self, point: Vec3) -> Result<(f64, f64, f64)> {
        let p = self.world_from_camera.inverse_transform_point(point);
        if p.z <= MIN_DEPTH {
            return Err(CoreError::BehindCamera { z: p.z });
        }
        let u = self.fx * p.x / p.z + self.cx;
        let v = self.fy * p.y / p.z + self.cy;
        Ok((u, v, p.z))
    }

    /// World point at pixel (u, v) and the given depth.
    pub fn unproject(&self, u: f64, v: f64, depth: f64) -> Vec3 {
        let p = Vec3::new(
            (u - self.cx) / self.fx * depth,
            (v - self.cy) / self.fy * depth,
            depth,
        );
        self.world_from_camera.transform_point(p)
    }

    /// World-space ray through pixel (u, v): (origin, unit direction).
    pub fn ray(&self, u: f64, v: f64) -> (Vec3, Vec3) {
        let dir_cam = Vec3::new((u - self.cx) / self.fx, (v - self.cy) / self.fy, 1.0);
        let dir = self.world_from_camera.transform_direction(dir_cam).normalized();
        (self.center(), dir)
    }

    pub fn same_pose(&self, other: &Camera, center_tol: f64, angle_tol: f64) -> bool {
        self.center().distance(other.center()) <= center_tol
            && self.world_from_camera.rotation_angle_to(&other.world_from_camera) <= angle_tol
    }

    /// Elementwise comparison of pose, intrinsics and size.
    pub fn approx_eq(&self, other: &Camera, tol: f64) -> bool {
        let ra = &self.world_from_camera.rotation.rows;
        let rb = &other.world_from_camera.rotation.rows;
        for (a, b) in ra.iter().flatten().zip(rb.iter().flatten()) {
            if (a - b).abs() > tol {
                return false;
            }
        }
        self.center().distance(other.center()) <= tol * 3.0_f64.sqrt()
            && (self.fx - other.fx).abs() <= tol
            && (self.fy - other.fy).abs() <= tol
            && (self.cx - other.cx).abs() <= tol
            && (self.cy - other.cy).abs() <= tol
            && self.width == other.width
            && self.height == other.height
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_camera() -> Camera {
        Camera::new(RigidTransform::IDENTITY, 100.0, 100.0, 64.0, 64.0, 128, 128).unwrap()
    }

    #[test]
    fn principal_point_on_axis() {
        let cam = test_camera();
        let (u, v, d) = cam.project(Vec3::new(0.0, 0.0, 2.5)).unwrap();
        assert_eq!((u, v), (64.0, 64.0));
        assert_eq!(d, 2.5);
    }

    #[test]
    fn hand_evaluated_projection() {
        // u = 100 * 0.5 / 1 + 64 = 114, v = 64, depth 1.
        let cam = test_camera();
        let (u, v, d) = cam.project(Vec3::new(0.5, 0.0, 1.0)).unwrap();
        assert_eq!((u, v, d), (114.0, 64.0, 1.0));
    }

    #[test]
    fn zero_depth_is_behind_camera() {
        let cam = test_camera();
        let err = cam.project(Vec3::new(0.3, 0.2, 0.0)).unwrap_err();
        assert!(matches!(err, CoreError::BehindCamera { .. }));
    }

    #[test]
    fn project_unproject_consistency() {
        let cam = Camera::look_at(
            Vec3::new(2.0, 1.5, -3.0),
            Vec3::ZERO,
            Vec3::new(0.0, 1.0, 0.0),
            80.0,
            90.0,
            31.5,
            33.0,
            64,
            64,
        )
        .unwrap();
        for &p in &[
            Vec3::new(0.1, -0.2, 0.4),
            Vec3::new(-0.5, 0.3, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ] {
            let (u, v, d) = cam.project(p).unwrap();
            let q = cam.unproject(u, v, d);
            assert!(p.distance(q) < 1e-9, "recovered {q:?} from {p:?}");
        }
    }

    #[test]
    fn look_at_keeps_target_on_axis() {
        let target = Vec3::new(0.3, -0.1, 0.2);
        let cam = Camera::look_at(
            Vec3::new(3.0, 2.0, 1.0),
            target,
            Vec3::new(0.0, 1.0, 0.0),
            100.0,
            100.0,
            32.0,
            32.0,
            64,
            64,
        )
        .unwrap();
        let (u, v, _) = cam.project(target).unwrap();
        assert!((u - 32.0).abs() < 1e-9 && (v - 32.0).abs() < 1e-9);
        // Image is upright: a point above the target lands at smaller v.
        let (_, v_above, _) = cam.project(target + Vec3::new(0.0, 0.2, 0.0)).unwrap();
        assert!(v_above < v);
    }

    #[test]
    fn rejects_bad_intrinsics() {
        assert!(Camera::new(RigidTransform::IDENTITY, -1.0, 1.0, 0.0, 0.0, 8, 8).is_err());
        assert!(Camera::new(RigidTransform::IDENTITY, 10.0, 10.0, 9.0, 1.0, 8, 8).is_err());
    }
}
