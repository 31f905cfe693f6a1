use crate::camera::Camera;
use crate::error::CoreError;
use crate::image::Image;
use crate::time::normalize_times;
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillState {
    Empty,
    Generated,
    Input,
}

/// K x L grid of images: K stationary virtual cameras (rows), L timestamps
/// (columns), with per-cell fill state. Rows share one image size.
#[derive(Debug, Clone)]
pub struct ViewGrid {
    cameras: Vec<Camera>,
    raw_times: Vec<f64>,
    times: Vec<f64>,
    cells: Vec<Option<Image>>,
    fill: Vec<FillState>,
}

impl ViewGrid {
    pub fn new(cameras: Vec<Camera>, raw_times: Vec<f64>) -> Result<Self> {
        if cameras.is_empty() {
            return Err(CoreError::EmptyInput("ViewGrid cameras"));
        }
        if raw_times.is_empty() {
            return Err(CoreError::EmptyInput("ViewGrid times"));
        }
        for i in 1..raw_times.len() {
            if raw_times[i] <= raw_times[i - 1] {
                return Err(CoreError::GridInvariant(format!(
                    "timestamps must be strictly increasing (index {i})"
                )));
            }
        }
        let (w, h) = (cameras[0].width, cameras[0].height);
        for (i, cam) in cameras.iter().enumerate() {
            cam.validate()?;
            if cam.width != w || cam.height != h {
                return Err(CoreError::GridInvariant(format!(
                    "camera {i} size differs from row 0"
                )));
            }
            for (j, other) in cameras.iter().enumerate().take(i) {
                if cam.same_pose(other, 1e-12, 1e-12) {
                    return Err(CoreError::GridInvariant(format!(
                        "cameras {j} and {i} are identical"
                    )));
                }
            }
        }
        let times = normalize_times(&raw_times)?;
        let n = cameras.len() * raw_times.len();
        Ok(ViewGrid {
            cameras,
            raw_times,
            times,
            cells: vec![None; n],
            fill: vec![FillState::Empty; n],
        })
    }

    /// Construct with explicit normalized times (used by the loader).
    pub(crate) fn with_times(
        cameras: Vec<Camera>,
        raw_times: Vec<f64>,
        times: Vec<f64>,
    ) -> Result<Self> {
        let mut g = ViewGrid::new(cameras, raw_times)?;
        if times.len() != g.times.len() {
            return Err(CoreError::GridInvariant("normalized time count".into()));
        }
        g.times = times;
        Ok(g)
    }

    pub fn rows(&self) -> usize {
        self.cameras.len()
    }

    pub fn cols(&self) -> usize {
        self.raw_times.len()
    }

    pub fn image_size(&self) -> (u32, u32) {
        (self.cameras[0].width, self.cameras[0].height)
    }

    pub fn camera(&self, row: usize) -> &Camera {
        &self.cameras[row]
    }

    pub fn cameras(&self) -> &[Camera] {
        &self.cameras
    }

    pub fn raw_times(&self) -> &[f64] {
        &self.raw_times
    }

    /// Normalized timestamps in [0, 1].
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    fn index(&self, row: usize, col: usize) -> usize {
        assert!(row < self.rows() && col < self.cols(), "cell ({row}, {col}) out of range");
        row * self.cols() + col
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<&Image> {
        self.cells[self.index(row, col)].as_ref()
    }

    pub fn fill_state(&self, row: usize, col: usize) -> FillState {
        self.fill[self.index(row, col)]
    }

    pub fn set_cell(&mut self, row: usize, col: usize, image: Image, state: FillState) -> Result<()> {
        let (w, h) = self.image_size();
        if image.width() != w || image.height() != h {
            return Err(CoreError::ShapeMismatch(format!(
                "cell image {}x{} does not match grid {}x{}",
                image.width(),
                image.height(),
                w,
                h
            )));
        }
        let i = self.index(row, col);
        self.cells[i] = Some(image);
        self.fill[i] = state;
        Ok(())
    }

    pub fn clear_cell(&mut self, row: usize, col: usize) {
        let i = self.index(row, col);
        self.cells[i] = None;
        self.fill[i] = FillState::Empty;
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|c| c.is_some())
    }

    pub fn count_filled(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Grids are equal when cameras/times match to `tol` and cell images and
    /// fill states match exactly.
    pub fn approx_eq(&self, other: &ViewGrid, tol: f64) -> bool {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return false;
        }
        for (a, b) in self.cameras.iter().zip(&other.cameras) {
            if !a.approx_eq(b, tol) {
                return false;
            }
        }
        for (a, b) in self.raw_times.iter().zip(&other.raw_times) {
            if (a - b).abs() > tol {
                return false;
            }
        }
        for (a, b) in self.times.iter().zip(&other.times) {
            if (a - b).abs() > tol {
                return false;
            }
        }
        self.fill == other.fill && self.cells == other.cells
    }
}
