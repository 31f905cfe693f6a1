use crate::error::CoreError;
use crate::Result;

/// RGB image with values nominally in [0, 1], stored row-major, channel
/// interleaved, in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: u32,
    height: u32,
    data: Vec<f64>,
}

impl Image {
    pub fn new(width: u32, height: u32) -> Self {
        Image { width, height, data: vec![0.0; (width * height * 3) as usize] }
    }

    pub fn filled(width: u32, height: u32, rgb: [f64; 3]) -> Self {
        let mut data = Vec::with_capacity((width * height * 3) as usize);
        for _ in 0..width * height {
            data.extend_from_slice(&rgb);
        }
        Image { width, height, data }
    }

    pub fn from_data(width: u32, height: u32, data: Vec<f64>) -> Result<Self> {
        if data.len() != (width * height * 3) as usize {
            return Err(CoreError::ShapeMismatch(format!(
                "expected {} values for {width}x{height} RGB, got {}",
                width * height * 3,
                data.len()
            )));
        }
        Ok(Image { width, height, data })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn pixel(&self, x: u32, y: u32) -> [f64; 3] {
        let i = ((y * self.width + x) * 3) as usize;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: u32, y: u32, rgb: [f64; 3]) {
        let i = ((y * self.width + x) * 3) as usize;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn mean_abs_diff(&self, other: &Image) -> f64 {
        assert!(self.same_shape(other), "shape mismatch in mean_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / self.data.len() as f64
    }

    pub fn mse(&self, other: &Image) -> f64 {
        assert!(self.same_shape(other), "shape mismatch in mse");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            / self.data.len() as f64
    }

    /// 2x2 box-filter downsample; requires even dimensions.
    pub fn downsample2x(&self) -> Image {
        assert!(
            self.width % 2 == 0 && self.height % 2 == 0,
            "downsample2x needs even dimensions"
        );
        let (w, h) = (self.width / 2, self.height / 2);
        let mut out = Image::new(w, h);
        for y in 0..h {
            for x in 0..w {
                let mut acc = [0.0; 3];
                for dy in 0..2 {
                    for dx in 0..2 {
                        let p = self.pixel(2 * x + dx, 2 * y + dy);
                        for c in 0..3 {
                            acc[c] += p[c];
                        }
                    }
                }
                out.set_pixel(x, y, [acc[0] / 4.0, acc[1] / 4.0, acc[2] / 4.0]);
            }
        }
        out
    }

    /// Quantize to the 16-bit grid used by the on-disk format.
    pub fn to_u16(&self) -> Vec<u16> {
        self.data
            .iter()
            .map(|&v| (v.clamp(0.0, 1.0) * 65535.0).round() as u16)
            .collect()
    }

    pub fn from_u16(width: u32, height: u32, raw: &[u16]) -> Result<Self> {
        let data = raw.iter().map(|&v| v as f64 / 65535.0).collect();
        Image::from_data(width, height, data)
    }
}
