use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use viewloom_core::{Aabb, Vec3};

/// Coordinate pairs of the six planes over (x, y, z, t).
const PLANE_AXES: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)];

/// Hex-plane deformation: six 2D feature planes sampled bilinearly at a
/// Gaussian's normalized (position, time) coordinates, combined by elementwise
/// product and decoded by a linear head into a position offset.
///
/// Planes initialize near one and the head at zero, so the canonical
/// configuration represents the zero offset exactly while keeping healthy
/// gradients for the head.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationField {
    pub resolution: usize,
    pub features: usize,
    /// Six planes, each resolution^2 * features, laid out (row b, col a, feature).
    pub planes: [Vec<f64>; 6],
    /// 3 x features decode matrix, row-major.
    pub head: Vec<f64>,
    pub bounds: Aabb,
}

/// Gradients mirroring the field's parameters, plus the chain back to the
/// canonical positions through the sampling coordinates.
#[derive(Debug, Clone)]
pub struct DeformGrads {
    pub planes: [Vec<f64>; 6],
    pub head: Vec<f64>,
    pub positions: Vec<Vec3>,
}

impl DeformationField {
    pub fn new(resolution: usize, features: usize, bounds: Aabb, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = resolution * resolution * features;
        let planes = std::array::from_fn(|_| {
            (0..n).map(|_| 1.0 + 0.01 * (rng.gen::<f64>() - 0.5)).collect()
        });
        DeformationField {
            resolution,
            features,
            planes,
            head: vec![0.0; 3 * features],
            bounds,
        }
    }

    pub fn head_is_zero(&self) -> bool {
        self.head.iter().all(|&v| v == 0.0)
    }

    /// Normalized grid coordinates (x, y, z, t), each clamped to [0, R-1].
    fn coords(&self, p: Vec3, t: f64) -> ([f64; 4], [f64; 4]) {
        let r = (self.resolution - 1) as f64;
        let ext = self.bounds.extent();
        let mut c = [0.0; 4];
        let mut dcdp = [0.0; 4]; // d(coord)/d(world position along its axis)
        let raw = [
            (p.x - self.bounds.min.x) / ext.x,
            (p.y - self.bounds.min.y) / ext.y,
            (p.z - self.bounds.min.z) / ext.z,
            t,
        ];
        let scales = [r / ext.x, r / ext.y, r / ext.z, 0.0];
        for a in 0..4 {
            let v = raw[a] * r;
            if v <= 0.0 {
                c[a] = 0.0;
            } else if v >= r {
                c[a] = r - 1e-9;
            } else {
                c[a] = v;
                dcdp[a] = scales[a];
            }
        }
        (c, dcdp)
    }

    fn index(&self, i: usize, j: usize, f: usize) -> usize {
        (j * self.resolution + i) * self.features + f
    }

    /// Bilinear sample of all features at (ca, cb); returns the feature vector
    /// and the corner geometry for the backward pass.
    fn sample_plane(&self, plane: usize, ca: f64, cb: f64) -> (Vec<f64>, BilinearCell) {
        let i0 = (ca.floor() as usize).min(self.resolution - 2);
        let j0 = (cb.floor() as usize).min(self.resolution - 2);
        let fa = ca - i0 as f64;
        let fb = cb - j0 as f64;
        let mut out = vec![0.0; self.features];
        let data = &self.planes[plane];
        for (f, o) in out.iter_mut().enumerate() {
            let v00 = data[self.index(i0, j0, f)];
            let v10 = data[self.index(i0 + 1, j0, f)];
            let v01 = data[self.index(i0, j0 + 1, f)];
            let v11 = data[self.index(i0 + 1, j0 + 1, f)];
            *o = (1.0 - fa) * (1.0 - fb) * v00
                + fa * (1.0 - fb) * v10
                + (1.0 - fa) * fb * v01
                + fa * fb * v11;
        }
        (out, BilinearCell { i0, j0, fa, fb })
    }

    /// Position offsets at time `t`. Only positions deform; scale, opacity and
    /// color stay canonical.
    pub fn offsets(&self, positions: &[Vec3], t: f64) -> Vec<Vec3> {
        positions.iter().map(|&p| self.offset_single(p, t).0).collect()
    }

    pub fn deform(&self, positions: &[Vec3], t: f64) -> Vec<Vec3> {
        positions.iter().map(|&p| p + self.offset_single(p, t).0).collect()
    }

    fn offset_single(&self, p: Vec3, t: f64) -> (Vec3, DeformCache) {
        let (c, dcdp) = self.coords(p, t);
        let mut feats = Vec::with_capacity(6);
        let mut cells = Vec::with_capacity(6);
        for (pl, &(a, b)) in PLANE_AXES.iter().enumerate() {
            let (s, cell) = self.sample_plane(pl, c[a], c[b]);
            feats.push(s);
            cells.push(cell);
        }
        let phi: Vec<f64> = (0..self.features)
            .map(|f| feats.iter().map(|s| s[f]).product())
            .collect();
        let mut d = Vec3::ZERO;
        for f in 0..self.features {
            d.x += self.head[f] * phi[f];
            d.y += self.head[self.features + f] * phi[f];
            d.z += self.head[2 * self.features + f] * phi[f];
        }
        (d, DeformCache { feats, cells, phi, dcdp })
    }

    pub fn zero_grads(&self) -> DeformGrads {
        DeformGrads {
            planes: std::array::from_fn(|_| vec![0.0; self.planes[0].len()]),
            head: vec![0.0; self.head.len()],
            positions: vec![],
        }
    }

    /// Accumulate parameter gradients and the coordinate-path position
    /// gradients for dL/d(offset) of every Gaussian at time `t`.
    pub fn backward(
        &self,
        positions: &[Vec3],
        t: f64,
        d_offsets: &[Vec3],
        grads: &mut DeformGrads,
    ) {
        if grads.positions.len() != positions.len() {
            grads.positions = vec![Vec3::ZERO; positions.len()];
        }
        let nf = self.features;
        for (gi, (&p, &dout)) in positions.iter().zip(d_offsets).enumerate() {
            let (_, cache) = self.offset_single(p, t);
            // Head gradient and feature-product gradient.
            let mut dphi = vec![0.0; nf];
            for f in 0..nf {
                grads.head[f] += dout.x * cache.phi[f];
                grads.head[nf + f] += dout.y * cache.phi[f];
                grads.head[2 * nf + f] += dout.z * cache.phi[f];
                dphi[f] = dout.x * self.head[f]
                    + dout.y * self.head[nf + f]
                    + dout.z * self.head[2 * nf + f];
            }
            // Per plane: value gradients into the 4 corners and coordinate
            // gradients via the bilinear derivative.
            let mut dcoord = [0.0f64; 4];
            for (pl, &(a, b)) in PLANE_AXES.iter().enumerate() {
                let cell = &cache.cells[pl];
                let (i0, j0, fa, fb) = (cell.i0, cell.j0, cell.fa, cell.fb);
                for f in 0..nf {
                    // d phi_f / d s_{pl,f} = product of the other planes.
                    let others: f64 = (0..6)
                        .filter(|&q| q != pl)
                        .map(|q| cache.feats[q][f])
                        .product();
                    let ds = dphi[f] * others;
                    let w00 = (1.0 - fa) * (1.0 - fb);
                    let w10 = fa * (1.0 - fb);
                    let w01 = (1.0 - fa) * fb;
                    let w11 = fa * fb;
                    let plane = &mut grads.planes[pl];
                    plane[self.index(i0, j0, f)] += ds * w00;
                    plane[self.index(i0 + 1, j0, f)] += ds * w10;
                    plane[self.index(i0, j0 + 1, f)] += ds * w01;
                    plane[self.index(i0 + 1, j0 + 1, f)] += ds * w11;
                    // Spatial derivative of the bilinear sample.
                    let data = &self.planes[pl];
                    let v00 = data[self.index(i0, j0, f)];
                    let v10 = data[self.index(i0 + 1, j0, f)];
                    let v01 = data[self.index(i0, j0 + 1, f)];
                    let v11 = data[self.index(i0 + 1, j0 + 1, f)];
                    let dsa = (1.0 - fb) * (v10 - v00) + fb * (v11 - v01);
                    let dsb = (1.0 - fa) * (v01 - v00) + fa * (v11 - v10);
                    dcoord[a] += ds * dsa;
                    dcoord[b] += ds * dsb;
                }
            }
            grads.positions[gi] = grads.positions[gi]
                + Vec3::new(
                    dcoord[0] * cache.dcdp[0],
                    dcoord[1] * cache.dcdp[1],
                    dcoord[2] * cache.dcdp[2],
                );
        }
    }
}

struct BilinearCell {
    i0: usize,
    j0: usize,
    fa: f64,
    fb: f64,
}

struct DeformCache {
    feats: Vec<Vec<f64>>,
    cells: Vec<BilinearCell>,
    phi: Vec<f64>,
    dcdp: [f64; 4],
}
