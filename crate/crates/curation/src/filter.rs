use thiserror::Error;
use viewloom_core::Image;

/// Corner patch side length in pixels.
pub const CORNER_PATCH: u32 = 10;
/// Maximum mean consecutive-frame RMS distance for a static viewpoint.
pub const STATIC_THRESHOLD: f64 = 0.05;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("need at least 2 frames, got {0}")]
    TooFewFrames(usize),
    #[error("frames {0}x{1} smaller than the {CORNER_PATCH}x{CORNER_PATCH} corner patch")]
    FrameTooSmall(u32, u32),
    #[error("frame sizes differ")]
    ShapeMismatch,
}

fn patch_rms_distance(a: &Image, b: &Image, x0: u32, y0: u32) -> f64 {
    let mut acc = 0.0;
    for y in y0..y0 + CORNER_PATCH {
        for x in x0..x0 + CORNER_PATCH {
            let pa = a.pixel(x, y);
            let pb = b.pixel(x, y);
            for c in 0..3 {
                let d = pa[c] - pb[c];
                acc += d * d;
            }
        }
    }
    (acc / (CORNER_PATCH * CORNER_PATCH * 3) as f64).sqrt()
}

/// True iff all four 10x10 corner patches are nearly constant over time: for
/// each corner, the RMS distance between consecutive frames (per pixel, per
/// channel, averaged over time) stays below 0.05 on [0, 1]-scaled values.
pub fn static_view_filter(frames: &[Image]) -> Result<bool, FilterError> {
    if frames.len() < 2 {
        return Err(FilterError::TooFewFrames(frames.len()));
    }
    let (w, h) = (frames[0].width(), frames[0].height());
    if w < CORNER_PATCH || h < CORNER_PATCH {
        return Err(FilterError::FrameTooSmall(w, h));
    }
    if frames.iter().any(|f| !f.same_shape(&frames[0])) {
        return Err(FilterError::ShapeMismatch);
    }
    let corners =
        [(0, 0), (w - CORNER_PATCH, 0), (0, h - CORNER_PATCH), (w - CORNER_PATCH, h - CORNER_PATCH)];
    let mut max_corner = 0.0f64;
    for (x0, y0) in corners {
        let mut acc = 0.0;
        for pair in frames.windows(2) {
            acc += patch_rms_distance(&pair[0], &pair[1], x0, y0);
        }
        max_corner = max_corner.max(acc / (frames.len() - 1) as f64);
    }
    Ok(max_corner < STATIC_THRESHOLD)
}
