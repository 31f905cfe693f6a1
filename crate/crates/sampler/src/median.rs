use viewloom_core::Image;

/// Pixel-wise (per channel) median. Even counts take the lower-middle order
/// statistic (index (n-1)/2) so the result is deterministic and always an
/// observed value.
pub fn pixel_median(images: &[&Image]) -> Image {
    assert!(!images.is_empty(), "pixel_median of an empty list");
    for img in &images[1..] {
        assert!(img.same_shape(images[0]), "pixel_median shape mismatch");
    }
    if images.len() == 1 {
        return images[0].clone();
    }
    let n = images.len();
    let mut out = images[0].clone();
    let mut vals = vec![0.0f64; n];
    for idx in 0..out.data().len() {
        for (v, img) in vals.iter_mut().zip(images) {
            *v = img.data()[idx];
        }
        vals.sort_by(f64::total_cmp);
        out.data_mut()[idx] = vals[(n - 1) / 2];
    }
    out
}
