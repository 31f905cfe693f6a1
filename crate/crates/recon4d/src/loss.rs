use crate::{ReconError, Result};
use viewloom_core::Image;

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    pub l1: f64,
    pub dssim: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights { l1: 0.8, dssim: 0.2 }
    }
}

fn gaussian_kernel() -> Vec<f64> {
    let half = (SSIM_WINDOW / 2) as i64;
    let mut k: Vec<f64> =
        (-half..=half).map(|d| (-(d * d) as f64 / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp()).collect();
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

struct SsimMaps {
    mu_x: Vec<f64>,
    mu_y: Vec<f64>,
    var_x: Vec<f64>,
    var_y: Vec<f64>,
    cov: Vec<f64>,
    vw: usize,
    vh: usize,
}

fn channel(img: &Image, ch: usize) -> Vec<f64> {
    img.data().iter().skip(ch).step_by(3).copied().collect()
}

/// Filtered first and second moments over valid window centers (no padding).
fn ssim_maps(x: &[f64], y: &[f64], w: usize, h: usize, kernel: &[f64]) -> SsimMaps {
    let half = SSIM_WINDOW / 2;
    let vw = w - 2 * half;
    let vh = h - 2 * half;
    // Separable filtering: rows first.
    let filt_rows = |src: &dyn Fn(usize) -> f64| -> Vec<f64> {
        let mut tmp = vec![0.0; vw * h];
        for yy in 0..h {
            for xx in 0..vw {
                let mut acc = 0.0;
                for (ki, kv) in kernel.iter().enumerate() {
                    acc += kv * src(yy * w + xx + ki);
                }
                tmp[yy * vw + xx] = acc;
            }
        }
        let mut out = vec![0.0; vw * vh];
        for yy in 0..vh {
            for xx in 0..vw {
                let mut acc = 0.0;
                for (ki, kv) in kernel.iter().enumerate() {
                    acc += kv * tmp[(yy + ki) * vw + xx];
                }
                out[yy * vw + xx] = acc;
            }
        }
        out
    };
    let mu_x = filt_rows(&|i| x[i]);
    let mu_y = filt_rows(&|i| y[i]);
    let xx = filt_rows(&|i| x[i] * x[i]);
    let yy = filt_rows(&|i| y[i] * y[i]);
    let xy = filt_rows(&|i| x[i] * y[i]);
    let var_x = xx.iter().zip(&mu_x).map(|(s, m)| s - m * m).collect();
    let var_y = yy.iter().zip(&mu_y).map(|(s, m)| s - m * m).collect();
    let cov = xy.iter().zip(mu_x.iter().zip(&mu_y)).map(|(s, (mx, my))| s - mx * my).collect();
    SsimMaps { mu_x, mu_y, var_x, var_y, cov, vw, vh }
}

/// Mean SSIM of one channel plus the gradient of mean SSIM w.r.t. x.
fn ssim_channel(x: &[f64], y: &[f64], w: usize, h: usize, kernel: &[f64]) -> (f64, Vec<f64>) {
    let c1 = SSIM_K1 * SSIM_K1;
    let c2 = SSIM_K2 * SSIM_K2;
    let m = ssim_maps(x, y, w, h, kernel);
    let half = SSIM_WINDOW / 2;
    let n_centers = (m.vw * m.vh) as f64;

    let mut mean_ssim = 0.0;
    let mut d_mu = vec![0.0; m.vw * m.vh];
    let mut d_var = vec![0.0; m.vw * m.vh];
    let mut d_cov = vec![0.0; m.vw * m.vh];
    for i in 0..m.vw * m.vh {
        let a1 = 2.0 * m.mu_x[i] * m.mu_y[i] + c1;
        let a2 = 2.0 * m.cov[i] + c2;
        let b1 = m.mu_x[i] * m.mu_x[i] + m.mu_y[i] * m.mu_y[i] + c1;
        let b2 = m.var_x[i] + m.var_y[i] + c2;
        let d = b1 * b2;
        let s = a1 * a2 / d;
        mean_ssim += s;
        // Partials of S at this center, scaled by the mean weight.
        let scale = 1.0 / n_centers;
        d_mu[i] = scale * (2.0 * m.mu_y[i] * a2 - 2.0 * m.mu_x[i] * s * b2) / d;
        d_var[i] = scale * (-s / b2);
        d_cov[i] = scale * (2.0 * a1 / d);
    }
    mean_ssim /= n_centers;

    // Scatter back: mu_x, var_x and cov all filter x, so the adjoint is a
    // correlation with the same separable kernel.
    let mut grad = vec![0.0; w * h];
    for cy in 0..m.vh {
        for cx in 0..m.vw {
            let i = cy * m.vw + cx;
            if d_mu[i] == 0.0 && d_var[i] == 0.0 && d_cov[i] == 0.0 {
                continue;
            }
            for ky in 0..SSIM_WINDOW {
                for kx in 0..SSIM_WINDOW {
                    let wgt = kernel[ky] * kernel[kx];
                    let q = (cy + ky) * w + cx + kx;
                    grad[q] += wgt
                        * (d_mu[i]
                            + d_var[i] * 2.0 * (x[q] - m.mu_x[i])
                            + d_cov[i] * (y[q] - m.mu_y[i]));
                }
            }
        }
    }
    let _ = half;
    (mean_ssim, grad)
}

/// L1 + DSSIM photometric loss with gradient w.r.t. the render:
/// multiplier * (w_l1 * L1 + w_dssim * (1 - SSIM) / 2).
pub fn photometric_loss(
    render: &Image,
    target: &Image,
    weights: &LossWeights,
    multiplier: f64,
) -> Result<(f64, Image)> {
    if !render.same_shape(target) {
        return Err(ReconError::ShapeMismatch(format!(
            "render {}x{} vs target {}x{}",
            render.width(),
            render.height(),
            target.width(),
            target.height()
        )));
    }
    let (w, h) = (render.width() as usize, render.height() as usize);
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(ReconError::ShapeMismatch(format!(
            "image smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} SSIM window"
        )));
    }
    let n = render.data().len() as f64;
    let mut grad = Image::new(render.width(), render.height());

    // L1 term. signum would map +0.0 to 1.0, hence the explicit zero case.
    let mut l1 = 0.0;
    for ((g, &r), &t) in grad.data_mut().iter_mut().zip(render.data()).zip(target.data()) {
        let d = r - t;
        l1 += d.abs();
        let sign = if d > 0.0 {
            1.0
        } else if d < 0.0 {
            -1.0
        } else {
            0.0
        };
        *g = multiplier * weights.l1 * sign / n;
    }
    l1 /= n;

    // DSSIM term, averaged over channels.
    let kernel = gaussian_kernel();
    let mut mean_ssim = 0.0;
    for ch in 0..3 {
        let x = channel(render, ch);
        let y = channel(target, ch);
        let (s, g) = ssim_channel(&x, &y, w, h, &kernel);
        mean_ssim += s / 3.0;
        // d(DSSIM)/dx = -1/2 dS/dx, averaged over channels.
        let factor = multiplier * weights.dssim * (-0.5) / 3.0;
        for (i, gv) in g.iter().enumerate() {
            grad.data_mut()[i * 3 + ch] += factor * gv;
        }
    }
    let dssim = (1.0 - mean_ssim) / 2.0;
    let loss = multiplier * (weights.l1 * l1 + weights.dssim * dssim);
    Ok((loss, grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn patterned(w: u32, h: u32, seed: u64) -> Image {
        let mut img = Image::new(w, h);
        for (i, v) in img.data_mut().iter_mut().enumerate() {
            let k = (i as u64).wrapping_mul(2654435761).wrapping_add(seed * 97);
            *v = ((k >> 3) % 1000) as f64 / 1000.0;
        }
        img
    }

    #[test]
    fn identical_images_have_zero_loss() {
        let img = patterned(16, 16, 1);
        let (loss, grad) = photometric_loss(&img, &img, &LossWeights::default(), 1.0).unwrap();
        assert!(loss.abs() < 1e-12, "loss {loss}");
        // L1 sign at zero is zero; SSIM gradient at the maximum is zero.
        assert!(grad.data().iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn uniform_offset_contributes_l1_closed_form() {
        let target = patterned(16, 16, 2);
        let mut render = target.clone();
        for v in render.data_mut() {
            *v += 0.1;
        }
        for &mult in &[1.0, 0.5] {
            let (loss, _) =
                photometric_loss(&render, &target, &LossWeights { l1: 0.8, dssim: 0.0 }, mult)
                    .unwrap();
            let expected = mult * 0.8 * 0.1;
            assert!((loss - expected).abs() < 1e-12, "{loss} vs {expected}");
        }
    }

    #[test]
    fn multiplier_scales_loss_and_gradient_linearly() {
        let target = patterned(16, 16, 3);
        let render = patterned(16, 16, 4);
        let (l1, g1) = photometric_loss(&render, &target, &LossWeights::default(), 1.0).unwrap();
        let (l05, g05) = photometric_loss(&render, &target, &LossWeights::default(), 0.5).unwrap();
        assert!((l05 - 0.5 * l1).abs() < 1e-12);
        for (a, b) in g05.data().iter().zip(g1.data()) {
            assert!((a - 0.5 * b).abs() < 1e-12);
        }
    }

    #[test]
    fn dssim_gradient_matches_finite_differences() {
        let target = patterned(13, 12, 5);
        let mut render = patterned(13, 12, 6);
        let weights = LossWeights { l1: 0.0, dssim: 1.0 };
        let (_, grad) = photometric_loss(&render, &target, &weights, 1.0).unwrap();
        let eps = 1e-6;
        for &idx in &[0usize, 40, 41, 42, 200, 467] {
            let orig = render.data()[idx];
            render.data_mut()[idx] = orig + eps;
            let (lp, _) = photometric_loss(&render, &target, &weights, 1.0).unwrap();
            render.data_mut()[idx] = orig - eps;
            let (lm, _) = photometric_loss(&render, &target, &weights, 1.0).unwrap();
            render.data_mut()[idx] = orig;
            let fd = (lp - lm) / (2.0 * eps);
            let an = grad.data()[idx];
            assert!(
                (fd - an).abs() <= 1e-6 * fd.abs().max(an.abs()).max(1e-3),
                "idx {idx}: fd {fd} vs analytic {an}"
            );
        }
    }

    #[test]
    fn small_images_rejected() {
        let img = Image::new(8, 8);
        assert!(photometric_loss(&img, &img, &LossWeights::default(), 1.0).is_err());
    }
}
