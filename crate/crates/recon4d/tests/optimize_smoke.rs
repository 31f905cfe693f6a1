//! Small end-to-end optimization runs against the analytic toy world.

use viewloom_core::{Camera, Vec3, View};
use viewloom_recon4d::{optimize, render_model, ReconConfig, TrainView};
use viewloom_toyworld::{generate_scene, render, Motion};

const SIZE: u32 = 48;

fn orbit_camera(azimuth: f64, elevation: f64) -> Camera {
    let c = SIZE as f64 / 2.0;
    Camera::look_at(
        Vec3::new(4.0 * azimuth.cos(), elevation, 4.0 * azimuth.sin()),
        Vec3::ZERO,
        Vec3::new(0.0, -1.0, 0.0),
        SIZE as f64,
        SIZE as f64,
        c,
        c,
        SIZE,
        SIZE,
    )
    .unwrap()
}

fn dataset(scene: &viewloom_toyworld::SceneSpec, n_cams: usize, times: &[f64]) -> Vec<TrainView> {
    let mut out = Vec::new();
    for i in 0..n_cams {
        let cam = orbit_camera(i as f64 / n_cams as f64 * std::f64::consts::TAU, -1.0);
        for &t in times {
            out.push(TrainView {
                view: View::new(render(scene, &cam, t), cam.clone(), t).unwrap(),
                generated: true,
            });
        }
    }
    out
}

fn small_cfg(bounds: viewloom_core::Aabb) -> ReconConfig {
    ReconConfig {
        phase1_iters: 150,
        phase2_iters: 350,
        n_init: 400,
        densify_interval: 100,
        ..ReconConfig::for_bounds(bounds)
    }
}

#[test]
fn static_scene_fit_is_time_invariant_and_loss_decreases() {
    let mut scene = generate_scene(61, 2).unwrap();
    for p in &mut scene.primitives {
        p.motion = Motion::Static;
    }
    let times = [0.0, 0.5, 1.0];
    let data = dataset(&scene, 6, &times);
    let cfg = small_cfg(scene.bounds.expand(0.2));
    let (cloud, field, stats) = optimize(&data, &cfg, 5).unwrap();

    // Loss at the end well below the start (averaged to smooth batching).
    let first: f64 = stats.losses[..20].iter().map(|(_, l)| l).sum::<f64>() / 20.0;
    let last: f64 =
        stats.losses[stats.losses.len() - 20..].iter().map(|(_, l)| l).sum::<f64>() / 20.0;
    assert!(last < 0.5 * first, "loss {first} -> {last}");

    // A static fit renders (nearly) identically at t = 0 and t = 1.
    let cam = orbit_camera(0.8, -1.0);
    let r0 = render_model(&cloud, &field, &cam, 0.0);
    let r1 = render_model(&cloud, &field, &cam, 1.0);
    let d = r0.mean_abs_diff(&r1);
    assert!(d <= 1e-2, "static model drifts by {d}");
}

#[test]
fn zero_phase2_leaves_field_at_initialization() {
    let scene = generate_scene(62, 2).unwrap();
    let data = dataset(&scene, 4, &[0.0]);
    let cfg = ReconConfig {
        phase1_iters: 30,
        phase2_iters: 0,
        n_init: 100,
        ..ReconConfig::for_bounds(scene.bounds.expand(0.2))
    };
    let (cloud, field, _) = optimize(&data, &cfg, 1).unwrap();
    assert!(field.head_is_zero());
    let offsets = field.offsets(&cloud.positions, 0.7);
    assert!(offsets.iter().all(|o| o.norm() == 0.0));
}

#[test]
fn optimization_is_bitwise_deterministic() {
    let scene = generate_scene(63, 2).unwrap();
    let data = dataset(&scene, 3, &[0.0, 1.0]);
    let cfg = ReconConfig {
        phase1_iters: 25,
        phase2_iters: 25,
        n_init: 120,
        densify_interval: 20,
        ..ReconConfig::for_bounds(scene.bounds.expand(0.2))
    };
    let (c1, f1, _) = optimize(&data, &cfg, 42).unwrap();
    let (c2, f2, _) = optimize(&data, &cfg, 42).unwrap();
    assert_eq!(c1, c2);
    assert_eq!(f1, f2);
}
