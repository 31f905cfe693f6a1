use crate::TrajectoryError;
use viewloom_core::Camera;

/// Index of the first camera already selected; the paper leaves the seed point
/// unspecified, so we fix it for determinism.
const FIRST_INDEX: usize = 0;

const DEDUP_TOL: f64 = 1e-12;

/// Greedy farthest point sampling over camera centers. The first selected
/// index is 0; each subsequent pick maximizes the minimum distance to the
/// selected set, ties broken by lowest index. Returns indices in selection
/// order.
pub fn farthest_point_sample(cameras: &[Camera], k: usize) -> Result<Vec<usize>, TrajectoryError> {
    if k == 0 {
        return Err(TrajectoryError::ZeroK(k));
    }
    if cameras.is_empty() {
        return Err(TrajectoryError::Empty);
    }
    let centers: Vec<_> = cameras.iter().map(|c| c.center()).collect();
    let mut distinct = 0usize;
    'outer: for (i, a) in centers.iter().enumerate() {
        for b in centers.iter().take(i) {
            if a.distance(*b) <= DEDUP_TOL {
                continue 'outer;
            }
        }
        distinct += 1;
    }
    if k > distinct {
        return Err(TrajectoryError::TooFewDistinct { k, distinct });
    }

    let mut selected = Vec::with_capacity(k);
    let mut min_dist = vec![f64::INFINITY; centers.len()];
    selected.push(FIRST_INDEX);
    for _ in 1..k {
        let last = centers[*selected.last().unwrap()];
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, &c) in centers.iter().enumerate() {
            min_dist[i] = min_dist[i].min(c.distance(last));
            // Strict comparison: exact ties keep the lowest index.
            if min_dist[i] > best.1 {
                best = (i, min_dist[i]);
            }
        }
        selected.push(best.0);
    }
    Ok(selected)
}

/// True iff the trajectory barely moves: max pairwise center distance below
/// 1e-3 of the scene-bound diagonal and max pairwise rotation below 1 degree.
pub fn is_stationary(cameras: &[Camera], scene_diagonal: f64) -> bool {
    assert!(!cameras.is_empty(), "is_stationary on empty camera list");
    let center_tol = 1e-3 * scene_diagonal;
    let angle_tol = 1f64.to_radians();
    for (i, a) in cameras.iter().enumerate() {
        for b in cameras.iter().take(i) {
            if a.center().distance(b.center()) >= center_tol {
                return false;
            }
            if a.world_from_camera.rotation_angle_to(&b.world_from_camera) >= angle_tol {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use viewloom_core::{RigidTransform, Vec3};

    fn cam_at(p: Vec3) -> Camera {
        let mut t = RigidTransform::IDENTITY;
        t.translation = p;
        Camera::new(t, 10.0, 10.0, 4.0, 4.0, 8, 8).unwrap()
    }

    fn line_cams(n: usize) -> Vec<Camera> {
        (0..n).map(|i| cam_at(Vec3::new(i as f64, 0.0, 0.0))).collect()
    }

    #[test]
    fn exhaustion_returns_all_indices() {
        let cams = line_cams(4);
        let sel = farthest_point_sample(&cams, 4).unwrap();
        assert_eq!(sel.len(), 4);
        let mut sorted = sel.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
        assert_eq!(sel[0], 0);
    }

    #[test]
    fn line_of_eight_k3() {
        // Brute-force by hand: start 0, farthest is 7, then 3 and 4 tie at
        // min-distance 3; tie-break picks 3.
        let sel = farthest_point_sample(&line_cams(8), 3).unwrap();
        assert_eq!(sel, vec![0, 7, 3]);
    }

    #[test]
    fn identical_centers_rejected() {
        let cams = vec![cam_at(Vec3::ZERO), cam_at(Vec3::ZERO)];
        assert!(matches!(
            farthest_point_sample(&cams, 2),
            Err(TrajectoryError::TooFewDistinct { k: 2, distinct: 1 })
        ));
    }

    #[test]
    fn min_pairwise_distance_non_increasing_in_k() {
        let cams: Vec<Camera> = (0..7)
            .map(|i| {
                let a = i as f64 * 1.7;
                cam_at(Vec3::new(a.cos() * (1.0 + 0.1 * i as f64), a.sin(), 0.3 * i as f64))
            })
            .collect();
        let mut prev = f64::INFINITY;
        for k in 2..=7 {
            let sel = farthest_point_sample(&cams, k).unwrap();
            let mut min_d = f64::INFINITY;
            for (i, &a) in sel.iter().enumerate() {
                for &b in sel.iter().take(i) {
                    min_d = min_d.min(cams[a].center().distance(cams[b].center()));
                }
            }
            assert!(min_d <= prev + 1e-12, "k={k}: {min_d} > {prev}");
            prev = min_d;
        }
    }

    #[test]
    fn stationary_cases() {
        let diag = 4.0;
        assert!(is_stationary(&vec![cam_at(Vec3::ZERO); 3], diag));
        assert!(is_stationary(&[cam_at(Vec3::ZERO)], diag));
        assert!(!is_stationary(&line_cams(3), diag));
        // Pure rotation beyond a degree is not stationary.
        let a = 5f64.to_radians();
        let rot = viewloom_core::Mat3 {
            rows: [[a.cos(), 0.0, a.sin()], [0.0, 1.0, 0.0], [-a.sin(), 0.0, a.cos()]],
        };
        let turned =
            Camera::new(RigidTransform::new(rot, Vec3::ZERO), 10.0, 10.0, 4.0, 4.0, 8, 8).unwrap();
        assert!(!is_stationary(&[cam_at(Vec3::ZERO), turned], diag));
    }
}
