use proptest::prelude::*;
use viewloom_core::io::{load_grid, load_video, save_grid, save_video};
use viewloom_core::{Camera, CoreError, FillState, Image, RigidTransform, Vec3, View, ViewGrid};

fn cam_at(x: f64, size: u32) -> Camera {
    let mut t = RigidTransform::IDENTITY;
    t.translation = Vec3::new(x, 0.0, 0.0);
    let c = size as f64 / 2.0;
    Camera::new(t, 10.0, 10.0, c, c, size, size).unwrap()
}

fn patterned_image(size: u32, seed: u32) -> Image {
    let mut img = Image::new(size, size);
    for y in 0..size {
        for x in 0..size {
            // Values on the 16-bit grid so disk round trips are bit-exact.
            let k = (x * 7 + y * 13 + seed * 31) % 65536;
            let chan = |n: u32| (n % 65536) as f64 / 65535.0;
            img.set_pixel(x, y, [chan(k), chan(65535 - k), chan(k / 2)]);
        }
    }
    img
}

#[test]
fn two_by_two_roundtrip_identical() {
    let mut grid = ViewGrid::new(vec![cam_at(0.0, 8), cam_at(1.0, 8)], vec![0.0, 2.0]).unwrap();
    grid.set_cell(0, 0, patterned_image(8, 0), FillState::Input).unwrap();
    grid.set_cell(0, 1, patterned_image(8, 1), FillState::Generated).unwrap();
    grid.set_cell(1, 0, patterned_image(8, 2), FillState::Generated).unwrap();
    grid.set_cell(1, 1, patterned_image(8, 3), FillState::Generated).unwrap();

    let dir = tempfile::tempdir().unwrap();
    save_grid(&grid, dir.path()).unwrap();
    let loaded = load_grid(dir.path()).unwrap();
    assert!(grid.approx_eq(&loaded, 1e-12));
}

#[test]
fn missing_cell_file_is_an_error() {
    let mut grid = ViewGrid::new(vec![cam_at(0.0, 8)], vec![0.0, 1.0]).unwrap();
    grid.set_cell(0, 0, patterned_image(8, 0), FillState::Input).unwrap();
    grid.set_cell(0, 1, patterned_image(8, 1), FillState::Generated).unwrap();

    let dir = tempfile::tempdir().unwrap();
    save_grid(&grid, dir.path()).unwrap();
    std::fs::remove_file(dir.path().join("cam000").join("t0001.png")).unwrap();
    match load_grid(dir.path()) {
        Err(CoreError::MissingCell { cam: 0, time: 1 }) => {}
        other => panic!("expected MissingCell, got {other:?}"),
    }
}

#[test]
fn directory_enumeration_k13_l8() {
    let cams: Vec<Camera> = (0..13).map(|i| cam_at(i as f64, 8)).collect();
    let times: Vec<f64> = (0..8).map(|i| i as f64).collect();
    let mut grid = ViewGrid::new(cams, times).unwrap();
    for r in 0..13 {
        for c in 0..8 {
            grid.set_cell(r, c, patterned_image(8, (r * 8 + c) as u32), FillState::Generated)
                .unwrap();
        }
    }
    let dir = tempfile::tempdir().unwrap();
    save_grid(&grid, dir.path()).unwrap();

    assert!(dir.path().join("manifest.json").exists());
    let cam_dirs: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| {
            let e = e.unwrap();
            e.file_type().unwrap().is_dir().then(|| e.file_name())
        })
        .collect();
    assert_eq!(cam_dirs.len(), 13);
    for r in 0..13 {
        let files = std::fs::read_dir(dir.path().join(format!("cam{r:03}"))).unwrap().count();
        assert_eq!(files, 8);
    }
}

#[test]
fn video_roundtrip() {
    let frames: Vec<View> = (0..3)
        .map(|i| {
            View::new(patterned_image(8, i), cam_at(i as f64, 8), i as f64 / 2.0).unwrap()
        })
        .collect();
    let dir = tempfile::tempdir().unwrap();
    save_video(&frames, &[10.0, 11.0, 12.0], dir.path()).unwrap();
    let (loaded, raw) = load_video(dir.path()).unwrap();
    assert_eq!(raw, vec![10.0, 11.0, 12.0]);
    assert_eq!(loaded.len(), 3);
    for (a, b) in frames.iter().zip(&loaded) {
        assert_eq!(a.image, b.image);
        assert_eq!(a.time, b.time);
        assert!(a.camera.same_pose(&b.camera, 1e-12, 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // Serialization round trip: exact for (16-bit grid) images, <= 1e-12 for floats.
    #[test]
    fn grid_roundtrip_property(seed in 0u32..1000, dt in 0.01f64..10.0) {
        let mut grid = ViewGrid::new(
            vec![cam_at(0.0, 8), cam_at(0.5, 8), cam_at(2.0, 8)],
            vec![0.0, dt, 2.0 * dt + 0.3],
        ).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                if (r + c + seed as usize) % 4 != 0 {
                    let state = if (r + c) % 3 == 0 { FillState::Input } else { FillState::Generated };
                    grid.set_cell(r, c, patterned_image(8, seed + (r * 3 + c) as u32), state).unwrap();
                }
            }
        }
        let dir = tempfile::tempdir().unwrap();
        save_grid(&grid, dir.path()).unwrap();
        let loaded = load_grid(dir.path()).unwrap();
        prop_assert!(grid.approx_eq(&loaded, 1e-12));
    }

    #[test]
    fn unproject_project_recovers_points(
        px in -0.8f64..0.8, py in -0.8f64..0.8, pz in 0.5f64..5.0,
        ex in -2.0f64..2.0, ey in -2.0f64..2.0,
    ) {
        let cam = Camera::look_at(
            Vec3::new(ex, ey, -4.0), Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0),
            90.0, 90.0, 32.0, 32.0, 64, 64,
        ).unwrap();
        let p = Vec3::new(px, py, pz);
        let (u, v, d) = cam.project(p).unwrap();
        let q = cam.unproject(u, v, d);
        prop_assert!(p.distance(q) < 1e-9);
    }
}
