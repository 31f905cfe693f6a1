use crate::{MetricsError, Result};
use viewloom_core::Image;

/// Finite stand-in for infinite PSNR (identical images) and cap for near-zero
/// MSE, keeping CSV output finite.
pub const PSNR_SENTINEL: f64 = 99.0;

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const K1: f64 = 0.01;
const K2: f64 = 0.03;

/// Peak signal-to-noise ratio in dB over [0, 1] images.
pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    if !a.same_shape(b) {
        return Err(MetricsError::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let mse = a.mse(b);
    if mse == 0.0 {
        return Ok(PSNR_SENTINEL);
    }
    Ok((10.0 * (1.0 / mse).log10()).min(PSNR_SENTINEL))
}

/// Mean local SSIM on the grayscale (channel-mean) images: 11x11 Gaussian
/// window, sigma 1.5, K1 = 0.01, K2 = 0.03, valid window centers only.
pub fn ssim(a: &Image, b: &Image) -> Result<f64> {
    if !a.same_shape(b) {
        return Err(MetricsError::ShapeMismatch("ssim inputs".into()));
    }
    let (w, h) = (a.width() as usize, a.height() as usize);
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(MetricsError::TooSmall);
    }
    let gray = |img: &Image| -> Vec<f64> {
        img.data().chunks_exact(3).map(|c| (c[0] + c[1] + c[2]) / 3.0).collect()
    };
    let x = gray(a);
    let y = gray(b);

    let half = (SSIM_WINDOW / 2) as i64;
    let kernel: Vec<f64> = {
        let mut k: Vec<f64> = (-half..=half)
            .map(|d| (-(d * d) as f64 / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp())
            .collect();
        let s: f64 = k.iter().sum();
        k.iter_mut().for_each(|v| *v /= s);
        k
    };
    let c1 = K1 * K1;
    let c2 = K2 * K2;

    let mut acc = 0.0;
    let mut count = 0usize;
    for cy in half as usize..h - half as usize {
        for cx in half as usize..w - half as usize {
            let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for ky in 0..SSIM_WINDOW {
                for kx in 0..SSIM_WINDOW {
                    let wgt = kernel[ky] * kernel[kx];
                    let q = (cy + ky - half as usize) * w + cx + kx - half as usize;
                    mx += wgt * x[q];
                    my += wgt * y[q];
                    sxx += wgt * x[q] * x[q];
                    syy += wgt * y[q] * y[q];
                    sxy += wgt * x[q] * y[q];
                }
            }
            let (vx, vy, cov) = (sxx - mx * mx, syy - my * my, sxy - mx * my);
            let s = ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
            acc += s;
            count += 1;
        }
    }
    Ok(acc / count as f64)
}
