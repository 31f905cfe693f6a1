use viewloom_core::{Camera, Image, Vec3};

const TILE: u32 = 16;
const Z_NEAR: f64 = 1e-6;
/// Footprint cutoff in sigmas; far enough out that the truncated tail
/// (exp(-18) ~ 1.5e-8) is irrelevant next to the gradient-check tolerance.
const RADIUS_SIGMAS: f64 = 6.0;
const ALPHA_MAX: f64 = 0.99;
const T_STOP: f64 = 1e-12;
/// Background color composited behind all Gaussians.
pub const BACKGROUND: [f64; 3] = [0.5, 0.5, 0.5];

/// One projected Gaussian.
struct Splat {
    g: usize,
    u: f64,
    v: f64,
    cam: Vec3,
    sigma_px: f64,
    scale: f64,
    opacity: f64,
    color: [f64; 3],
    x_min: u32,
    x_max: u32,
    y_min: u32,
    y_max: u32,
}

/// Gradients of a scalar loss with respect to every raw parameter group, plus
/// the view-space position gradient norms that drive densification.
#[derive(Debug, Clone)]
pub struct RasterGrads {
    pub positions: Vec<Vec3>,
    pub log_scales: Vec<f64>,
    pub opacity_logits: Vec<f64>,
    pub colors: Vec<[f64; 3]>,
    /// Norm of (dL/du, dL/dv) in NDC units per Gaussian.
    pub view_grad_norms: Vec<f64>,
    /// Whether the Gaussian projected inside the image.
    pub visible: Vec<bool>,
}

/// Depth-sorted projection of a set of isotropic Gaussians into one camera,
/// ready for forward rendering and the exact backward pass. Activations are
/// applied internally: scale = exp(log_scale), opacity = sigmoid(logit),
/// screen footprint sigma_px = scale * f / depth.
pub struct Rasterizer<'a> {
    positions: &'a [Vec3],
    camera: &'a Camera,
    splats: Vec<Splat>,
    tiles: Vec<Vec<u32>>,
    tiles_x: u32,
    n: usize,
}

impl<'a> Rasterizer<'a> {
    pub fn new(
        positions: &'a [Vec3],
        log_scales: &'a [f64],
        opacity_logits: &'a [f64],
        colors: &'a [[f64; 3]],
        camera: &'a Camera,
    ) -> Self {
        let n = positions.len();
        assert!(
            log_scales.len() == n && opacity_logits.len() == n && colors.len() == n,
            "parameter arrays must have equal length"
        );
        let (w, h) = (camera.width, camera.height);
        let focal = 0.5 * (camera.fx + camera.fy);
        let mut splats: Vec<Splat> = Vec::with_capacity(n);
        for i in 0..n {
            let cam = camera.world_from_camera.inverse_transform_point(positions[i]);
            if cam.z <= Z_NEAR {
                continue;
            }
            let u = camera.fx * cam.x / cam.z + camera.cx;
            let v = camera.fy * cam.y / cam.z + camera.cy;
            let scale = log_scales[i].exp();
            let sigma_px = (scale * focal / cam.z).max(1e-4);
            let r = RADIUS_SIGMAS * sigma_px;
            if u + r < 0.0 || u - r > w as f64 || v + r < 0.0 || v - r > h as f64 {
                continue;
            }
            let opacity = 1.0 / (1.0 + (-opacity_logits[i]).exp());
            splats.push(Splat {
                g: i,
                u,
                v,
                cam,
                sigma_px,
                scale,
                opacity,
                color: colors[i],
                x_min: (u - r).floor().max(0.0) as u32,
                x_max: (u + r).ceil().min(w as f64 - 1.0) as u32,
                y_min: (v - r).floor().max(0.0) as u32,
                y_max: (v + r).ceil().min(h as f64 - 1.0) as u32,
            });
        }
        // Front to back; stable by input index on equal depth.
        splats.sort_by(|a, b| a.cam.z.total_cmp(&b.cam.z));

        let tiles_x = w.div_ceil(TILE);
        let tiles_y = h.div_ceil(TILE);
        let mut tiles = vec![Vec::new(); (tiles_x * tiles_y) as usize];
        for (si, s) in splats.iter().enumerate() {
            for ty in s.y_min / TILE..=s.y_max / TILE {
                for tx in s.x_min / TILE..=s.x_max / TILE {
                    tiles[(ty * tiles_x + tx) as usize].push(si as u32);
                }
            }
        }
        Rasterizer { positions, camera, splats, tiles, tiles_x, n }
    }

    fn pixel_splats(&self, x: u32, y: u32) -> &[u32] {
        &self.tiles[((y / TILE) * self.tiles_x + x / TILE) as usize]
    }

    /// Front-to-back alpha compositing over the fixed gray background.
    pub fn render(&self) -> Image {
        self.render_internal().0
    }

    /// Render plus per-pixel (accumulated alpha, final transmittance); the
    /// accumulated alpha is defined as 1 - T so conservation is exact.
    pub fn render_with_transmittance(&self) -> (Image, Vec<f64>) {
        let (img, t_end) = self.render_internal();
        (img, t_end)
    }

    fn render_internal(&self) -> (Image, Vec<f64>) {
        let (w, h) = (self.camera.width, self.camera.height);
        let mut img = Image::new(w, h);
        let mut t_end = vec![1.0f64; (w * h) as usize];
        for y in 0..h {
            for x in 0..w {
                let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
                let mut c = [0.0f64; 3];
                let mut t = 1.0f64;
                for &si in self.pixel_splats(x, y) {
                    let s = &self.splats[si as usize];
                    if x < s.x_min || x > s.x_max || y < s.y_min || y > s.y_max {
                        continue;
                    }
                    let alpha = splat_alpha(s, px, py);
                    if alpha <= 0.0 {
                        continue;
                    }
                    for ch in 0..3 {
                        c[ch] += t * alpha * s.color[ch];
                    }
                    t *= 1.0 - alpha;
                    if t < T_STOP {
                        break;
                    }
                }
                for (ch, b) in BACKGROUND.iter().enumerate() {
                    c[ch] += t * b;
                }
                img.set_pixel(x, y, c);
                t_end[(y * w + x) as usize] = t;
            }
        }
        (img, t_end)
    }

    /// Exact gradients of a scalar loss given dL/dpixel. Single-threaded,
    /// deterministic accumulation in pixel order.
    pub fn backward(&self, dimg: &Image) -> RasterGrads {
        let (w, h) = (self.camera.width, self.camera.height);
        assert!(dimg.width() == w && dimg.height() == h, "gradient image size");
        let focal = 0.5 * (self.camera.fx + self.camera.fy);

        let mut du = vec![0.0f64; self.n];
        let mut dv = vec![0.0f64; self.n];
        let mut dsigma = vec![0.0f64; self.n];
        let mut dopacity = vec![0.0f64; self.n];
        let mut grads = RasterGrads {
            positions: vec![Vec3::ZERO; self.n],
            log_scales: vec![0.0; self.n],
            opacity_logits: vec![0.0; self.n],
            colors: vec![[0.0; 3]; self.n],
            view_grad_norms: vec![0.0; self.n],
            visible: vec![false; self.n],
        };
        for s in &self.splats {
            grads.visible[s.g] = true;
        }

        for y in 0..h {
            for x in 0..w {
                let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
                let dpix = dimg.pixel(x, y);
                if dpix == [0.0, 0.0, 0.0] {
                    continue;
                }
                // First traversal: total composited color.
                let mut c_pix = [0.0f64; 3];
                let mut t = 1.0f64;
                for &si in self.pixel_splats(x, y) {
                    let s = &self.splats[si as usize];
                    if x < s.x_min || x > s.x_max || y < s.y_min || y > s.y_max {
                        continue;
                    }
                    let alpha = splat_alpha(s, px, py);
                    if alpha <= 0.0 {
                        continue;
                    }
                    for ch in 0..3 {
                        c_pix[ch] += t * alpha * s.color[ch];
                    }
                    t *= 1.0 - alpha;
                    if t < T_STOP {
                        break;
                    }
                }
                for (ch, b) in BACKGROUND.iter().enumerate() {
                    c_pix[ch] += t * b;
                }

                // Second traversal: per-splat contributions. suffix_i =
                // c_pix - prefix_i is everything composited behind splat i
                // (including the background).
                let mut prefix = [0.0f64; 3];
                let mut t = 1.0f64;
                for &si in self.pixel_splats(x, y) {
                    let s = &self.splats[si as usize];
                    if x < s.x_min || x > s.x_max || y < s.y_min || y > s.y_max {
                        continue;
                    }
                    let (alpha, gkern, clamped) = splat_alpha_parts(s, px, py);
                    if alpha <= 0.0 {
                        continue;
                    }
                    let mut dalpha = 0.0;
                    for ch in 0..3 {
                        grads.colors[s.g][ch] += dpix[ch] * alpha * t;
                        let suffix = c_pix[ch] - prefix[ch] - t * alpha * s.color[ch];
                        // dC/dalpha = T c - suffix / (1 - alpha)
                        dalpha += dpix[ch] * (t * s.color[ch] - suffix / (1.0 - alpha));
                        prefix[ch] += t * alpha * s.color[ch];
                    }
                    if !clamped {
                        // alpha = opacity * G, G = exp(-d^2 / (2 sigma^2))
                        let dg = dalpha * s.opacity;
                        dopacity[s.g] += dalpha * gkern;
                        let dq = -dg * gkern;
                        let (dx, dy) = (px - s.u, py - s.v);
                        let inv_s2 = 1.0 / (s.sigma_px * s.sigma_px);
                        du[s.g] += dq * (-dx * inv_s2);
                        dv[s.g] += dq * (-dy * inv_s2);
                        dsigma[s.g] += dq * (-(dx * dx + dy * dy) / (s.sigma_px.powi(3)));
                    }
                    t *= 1.0 - alpha;
                    if t < T_STOP {
                        break;
                    }
                }
            }
        }

        // Chain to raw parameters.
        let rot = &self.camera.world_from_camera.rotation;
        for s in &self.splats {
            let g = s.g;
            let (x, y, z) = (s.cam.x, s.cam.y, s.cam.z);
            // sigma = scale * focal / z
            let ds_dscale = focal / z;
            let ds_dz = -s.scale * focal / (z * z);
            let dcam = Vec3::new(
                du[g] * self.camera.fx / z,
                dv[g] * self.camera.fy / z,
                du[g] * (-self.camera.fx * x / (z * z))
                    + dv[g] * (-self.camera.fy * y / (z * z))
                    + dsigma[g] * ds_dz,
            );
            // opacity = sigmoid(logit)
            grads.opacity_logits[g] = dopacity[g] * s.opacity * (1.0 - s.opacity);
            // scale = exp(log_scale)
            grads.log_scales[g] = dsigma[g] * ds_dscale * s.scale;
            // cam = R^T (p - t)  =>  dL/dp = R dL/dcam
            grads.positions[g] = rot.mul_vec(dcam);
            grads.view_grad_norms[g] = (du[g] * self.camera.width as f64 / 2.0).hypot(
                dv[g] * self.camera.height as f64 / 2.0,
            );
        }
        grads
    }
}

#[inline]
fn splat_alpha(s: &Splat, px: f64, py: f64) -> f64 {
    splat_alpha_parts(s, px, py).0
}

#[inline]
fn splat_alpha_parts(s: &Splat, px: f64, py: f64) -> (f64, f64, bool) {
    let dx = px - s.u;
    let dy = py - s.v;
    let q = (dx * dx + dy * dy) / (2.0 * s.sigma_px * s.sigma_px);
    if q > RADIUS_SIGMAS * RADIUS_SIGMAS / 2.0 {
        return (0.0, 0.0, false);
    }
    let g = (-q).exp();
    let raw = s.opacity * g;
    if raw >= ALPHA_MAX {
        (ALPHA_MAX, g, true)
    } else {
        (raw, g, false)
    }
}

/// One-call forward rendering.
pub fn rasterize(
    positions: &[Vec3],
    log_scales: &[f64],
    opacity_logits: &[f64],
    colors: &[[f64; 3]],
    camera: &Camera,
) -> Image {
    Rasterizer::new(positions, log_scales, opacity_logits, colors, camera).render()
}
