use crate::{MetricsError, Result};
use viewloom_core::Image;

/// Stack one fixed pixel row from every frame into a (time x width) image:
/// output row t is frame t's row. Static content shows as vertical streaks,
/// motion as slanted traces.
pub fn spacetime_slice(frames: &[Image], row: u32) -> Result<Image> {
    if frames.is_empty() {
        return Err(MetricsError::ShapeMismatch("no frames".into()));
    }
    let (w, h) = (frames[0].width(), frames[0].height());
    if frames.iter().any(|f| !f.same_shape(&frames[0])) {
        return Err(MetricsError::ShapeMismatch("frame sizes differ".into()));
    }
    if row >= h {
        return Err(MetricsError::RowOutOfBounds(row, h));
    }
    let mut out = Image::new(w, frames.len() as u32);
    for (t, frame) in frames.iter().enumerate() {
        for x in 0..w {
            out.set_pixel(x, t as u32, frame.pixel(x, row));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_frame_yields_its_row() {
        let mut frame = Image::new(6, 4);
        for x in 0..6 {
            frame.set_pixel(x, 2, [x as f64 / 6.0, 0.5, 0.1]);
        }
        let slice = spacetime_slice(&[frame.clone()], 2).unwrap();
        assert_eq!((slice.width(), slice.height()), (6, 1));
        for x in 0..6 {
            assert_eq!(slice.pixel(x, 0), frame.pixel(x, 2));
        }
    }

    #[test]
    fn static_video_gives_vertical_streaks() {
        let frame = {
            let mut f = Image::new(8, 8);
            for x in 0..8 {
                for y in 0..8 {
                    f.set_pixel(x, y, [x as f64 / 8.0, y as f64 / 8.0, 0.3]);
                }
            }
            f
        };
        let slice = spacetime_slice(&vec![frame; 5], 3).unwrap();
        for x in 0..8 {
            let first = slice.pixel(x, 0);
            for t in 1..5 {
                assert_eq!(slice.pixel(x, t), first);
            }
        }
    }

    #[test]
    fn moving_sprite_traces_a_diagonal() {
        // A 1-pixel sprite moving +u one pixel per frame.
        let frames: Vec<Image> = (0..6)
            .map(|t| {
                let mut f = Image::filled(8, 8, [0.0, 0.0, 0.0]);
                f.set_pixel(t as u32, 4, [1.0, 1.0, 1.0]);
                f
            })
            .collect();
        let slice = spacetime_slice(&frames, 4).unwrap();
        for t in 0..6 {
            for x in 0..8 {
                let expected = if x == t { 1.0 } else { 0.0 };
                assert_eq!(slice.pixel(x as u32, t as u32)[0], expected);
            }
        }
    }

    #[test]
    fn out_of_bounds_row() {
        let f = Image::new(4, 4);
        assert!(matches!(spacetime_slice(&[f], 4), Err(MetricsError::RowOutOfBounds(4, 4))));
    }
}
