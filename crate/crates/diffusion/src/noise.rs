use rand::Rng;
use rand_chacha::ChaCha8Rng;
use viewloom_core::Image;

/// Standard normal sample via Box-Muller; hand-rolled so the byte stream
/// consumed from the RNG is pinned by this crate alone.
pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Image of i.i.d. standard normal values.
pub fn gaussian_image(width: u32, height: u32, rng: &mut ChaCha8Rng) -> Image {
    let mut img = Image::new(width, height);
    for v in img.data_mut() {
        *v = standard_normal(rng);
    }
    img
}

/// Separable Gaussian blur with kernel renormalized at the borders.
pub fn blur_image(img: &Image, sigma: f64) -> Image {
    if sigma <= 0.0 {
        return img.clone();
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let kernel: Vec<f64> =
        (-radius..=radius).map(|d| (-(d * d) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let (w, h) = (img.width() as i64, img.height() as i64);

    let mut tmp = Image::new(img.width(), img.height());
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0; 3];
            let mut norm = 0.0;
            for (ki, &kw) in kernel.iter().enumerate() {
                let sx = x + ki as i64 - radius;
                if sx < 0 || sx >= w {
                    continue;
                }
                let p = img.pixel(sx as u32, y as u32);
                for c in 0..3 {
                    acc[c] += kw * p[c];
                }
                norm += kw;
            }
            tmp.set_pixel(x as u32, y as u32, [acc[0] / norm, acc[1] / norm, acc[2] / norm]);
        }
    }
    let mut out = Image::new(img.width(), img.height());
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0; 3];
            let mut norm = 0.0;
            for (ki, &kw) in kernel.iter().enumerate() {
                let sy = y + ki as i64 - radius;
                if sy < 0 || sy >= h {
                    continue;
                }
                let p = tmp.pixel(x as u32, sy as u32);
                for c in 0..3 {
                    acc[c] += kw * p[c];
                }
                norm += kw;
            }
            out.set_pixel(x as u32, y as u32, [acc[0] / norm, acc[1] / norm, acc[2] / norm]);
        }
    }
    out
}
