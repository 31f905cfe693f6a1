use crate::scene::{SceneSpec, Shape};
use viewloom_core::{Camera, CoreError, Image, Vec3, View};

/// To-light direction of the single directional light.
const LIGHT: Vec3 = Vec3 { x: 0.424264, y: 0.848528, z: 0.318198 }; // normalize(0.4, 0.8, 0.3)
const AMBIENT: f64 = 0.35;
const DIFFUSE: f64 = 0.65;

struct Hit {
    t: f64,
    normal: Vec3,
    albedo: [f64; 3],
}

fn intersect_sphere(origin: Vec3, dir: Vec3, center: Vec3, radius: f64) -> Option<f64> {
    let oc = origin - center;
    let b = oc.dot(dir);
    let c = oc.dot(oc) - radius * radius;
    let disc = b * b - c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = -b - sq;
    if t0 > 1e-9 {
        return Some(t0);
    }
    let t1 = -b + sq;
    (t1 > 1e-9).then_some(t1)
}

fn intersect_box(origin: Vec3, dir: Vec3, center: Vec3, half: f64) -> Option<f64> {
    let mut t_near = f64::NEG_INFINITY;
    let mut t_far = f64::INFINITY;
    let o = origin - center;
    for (oi, di) in [(o.x, dir.x), (o.y, dir.y), (o.z, dir.z)] {
        if di.abs() < 1e-14 {
            if oi.abs() > half {
                return None;
            }
            continue;
        }
        let inv = 1.0 / di;
        let (mut t0, mut t1) = ((-half - oi) * inv, (half - oi) * inv);
        if t0 > t1 {
            std::mem::swap(&mut t0, &mut t1);
        }
        t_near = t_near.max(t0);
        t_far = t_far.min(t1);
        if t_near > t_far {
            return None;
        }
    }
    if t_near > 1e-9 {
        Some(t_near)
    } else if t_far > 1e-9 {
        Some(t_far)
    } else {
        None
    }
}

fn box_normal(p: Vec3, center: Vec3, half: f64) -> Vec3 {
    let d = (p - center) / half;
    let (ax, ay, az) = (d.x.abs(), d.y.abs(), d.z.abs());
    if ax >= ay && ax >= az {
        Vec3::new(d.x.signum(), 0.0, 0.0)
    } else if ay >= az {
        Vec3::new(0.0, d.y.signum(), 0.0)
    } else {
        Vec3::new(0.0, 0.0, d.z.signum())
    }
}

fn trace(scene: &SceneSpec, origin: Vec3, dir: Vec3, time: f64) -> Option<Hit> {
    let mut best: Option<Hit> = None;
    for prim in &scene.primitives {
        let center = prim.position_at(time);
        let t = match prim.shape {
            Shape::Sphere => intersect_sphere(origin, dir, center, prim.size),
            Shape::Box => intersect_box(origin, dir, center, prim.size),
        };
        if let Some(t) = t {
            if best.as_ref().is_none_or(|h| t < h.t) {
                let p = origin + dir * t;
                let normal = match prim.shape {
                    Shape::Sphere => (p - center) / prim.size,
                    Shape::Box => box_normal(p, center, prim.size),
                };
                best = Some(Hit { t, normal, albedo: prim.albedo });
            }
        }
    }
    best
}

fn shade(hit: &Hit) -> [f64; 3] {
    let lambert = hit.normal.dot(LIGHT).max(0.0);
    let k = AMBIENT + DIFFUSE * lambert;
    [
        (hit.albedo[0] * k).clamp(0.0, 1.0),
        (hit.albedo[1] * k).clamp(0.0, 1.0),
        (hit.albedo[2] * k).clamp(0.0, 1.0),
    ]
}

/// Analytic render of the scene at one (camera, time): one ray per pixel
/// through the pixel center, nearest hit, flat + Lambert shading over the
/// environment gradient. Pure and deterministic.
pub fn render(scene: &SceneSpec, camera: &Camera, time: f64) -> Image {
    assert!((0.0..=1.0).contains(&time), "time {time} outside [0, 1]");
    let mut img = Image::new(camera.width, camera.height);
    for y in 0..camera.height {
        for x in 0..camera.width {
            let (origin, dir) = camera.ray(x as f64 + 0.5, y as f64 + 0.5);
            let rgb = match trace(scene, origin, dir, time) {
                Some(hit) => shade(&hit),
                None => scene.background.color(dir),
            };
            img.set_pixel(x, y, rgb);
        }
    }
    img
}

/// Render an input video: frame i is the scene at (trajectory[i], times[i]).
pub fn render_input_video(
    scene: &SceneSpec,
    trajectory: &[Camera],
    times: &[f64],
) -> Result<Vec<View>, CoreError> {
    if trajectory.len() != times.len() {
        return Err(CoreError::ShapeMismatch(format!(
            "{} cameras but {} times",
            trajectory.len(),
            times.len()
        )));
    }
    trajectory
        .iter()
        .zip(times)
        .map(|(cam, &t)| View::new(render(scene, cam, t), cam.clone(), t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate_scene;
    use crate::scene::{Background, Motion, Primitive, SceneSpec, Shape};
    use viewloom_core::Aabb;

    fn look_at_origin(eye: Vec3, size: u32) -> Camera {
        let c = size as f64 / 2.0;
        Camera::look_at(
            eye,
            Vec3::ZERO,
            Vec3::new(0.0, 1.0, 0.0),
            size as f64,
            size as f64,
            c,
            c,
            size,
            size,
        )
        .unwrap()
    }

    fn single_sphere(motion: Motion) -> SceneSpec {
        SceneSpec {
            seed: 0,
            primitives: vec![Primitive {
                shape: Shape::Sphere,
                base_position: Vec3::ZERO,
                size: 0.4,
                albedo: [0.8, 0.2, 0.2],
                motion,
            }],
            background: Background { top: [0.55, 0.55, 0.6], bottom: [0.45, 0.45, 0.4] },
            bounds: Aabb::new(Vec3::new(-2.0, -2.0, -2.0), Vec3::new(2.0, 2.0, 2.0)),
        }
    }

    #[test]
    fn camera_looking_away_sees_background() {
        let scene = single_sphere(Motion::Static);
        // Eye beyond the sphere, looking further away from it.
        let cam = Camera::look_at(
            Vec3::new(0.0, 0.0, 4.0),
            Vec3::new(0.0, 0.0, 8.0),
            Vec3::new(0.0, 1.0, 0.0),
            64.0,
            64.0,
            32.0,
            32.0,
            64,
            64,
        )
        .unwrap();
        let img = render(&scene, &cam, 0.0);
        let mut empty = scene.clone();
        empty.primitives.clear();
        assert_eq!(img, render(&empty, &cam, 0.0));
    }

    #[test]
    fn render_is_bitwise_deterministic() {
        let scene = generate_scene(11, 3).unwrap();
        let cam = look_at_origin(Vec3::new(3.0, 1.0, 2.0), 32);
        assert_eq!(render(&scene, &cam, 0.3), render(&scene, &cam, 0.3));
    }

    #[test]
    fn linear_motion_displaces_mask_centroid() {
        let scene = single_sphere(Motion::Linear { amplitude: Vec3::new(0.8, 0.0, 0.0) });
        // Camera on +z looking along -z: world +x maps to +u.
        let cam = look_at_origin(Vec3::new(0.0, 0.0, 4.0), 64);
        let centroid_u = |img: &Image| {
            let bg = single_sphere(Motion::Static);
            let mut empty = bg.clone();
            empty.primitives.clear();
            let bg_img = render(&empty, &cam, 0.0);
            let (mut acc, mut n) = (0.0, 0usize);
            for y in 0..64 {
                for x in 0..64 {
                    if img.pixel(x, y) != bg_img.pixel(x, y) {
                        acc += x as f64;
                        n += 1;
                    }
                }
            }
            assert!(n > 0, "sphere not visible");
            acc / n as f64
        };
        let u0 = centroid_u(&render(&scene, &cam, 0.0));
        let u1 = centroid_u(&render(&scene, &cam, 1.0));
        assert!(u1 > u0 + 2.0, "centroid moved {u0} -> {u1}");
    }

    #[test]
    fn input_video_single_frame_equals_direct_render() {
        let scene = generate_scene(3, 2).unwrap();
        let cam = look_at_origin(Vec3::new(0.0, 1.0, -4.0), 32);
        let video = render_input_video(&scene, &[cam.clone()], &[0.0]).unwrap();
        assert_eq!(video.len(), 1);
        assert_eq!(video[0].image, render(&scene, &cam, 0.0));
    }

    #[test]
    fn stationary_video_shares_camera() {
        let scene = generate_scene(4, 2).unwrap();
        let cam = look_at_origin(Vec3::new(0.0, 0.5, -4.0), 32);
        let times: Vec<f64> = (0..8).map(|i| i as f64 / 7.0).collect();
        let video = render_input_video(&scene, &vec![cam.clone(); 8], &times).unwrap();
        assert!(video.iter().all(|v| v.camera == cam));
    }

    #[test]
    fn static_scene_is_time_invariant_across_trajectory() {
        let mut scene = generate_scene(5, 3).unwrap();
        for p in &mut scene.primitives {
            p.motion = Motion::Static;
        }
        let cams: Vec<Camera> = (0..6)
            .map(|i| {
                let a = i as f64 / 6.0 * std::f64::consts::TAU;
                look_at_origin(Vec3::new(4.0 * a.cos(), 1.0, 4.0 * a.sin()), 32)
            })
            .collect();
        let times: Vec<f64> = (0..6).map(|i| i as f64 / 5.0).collect();
        let video = render_input_video(&scene, &cams, &times).unwrap();
        // Re-rendering the last frame's camera at t=0 matches it exactly.
        assert_eq!(video[5].image, render(&scene, &cams[5], 0.0));
    }

    #[test]
    fn mean_color_is_environment_midpoint() {
        let scene = single_sphere(Motion::Static);
        assert_eq!(scene.mean_color(), [0.5, 0.5, 0.5]);
    }
}
