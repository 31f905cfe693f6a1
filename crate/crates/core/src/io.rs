//! On-disk formats.
//!
//! Grid directory: `manifest.json` plus `cam{i:03}/t{j:04}.png` for every
//! non-empty cell, 16-bit PNG. Video directory: `manifest.json` plus
//! `frame_{i:04}.png`, one camera and timestamp per frame.

use crate::camera::Camera;
use crate::error::CoreError;
use crate::grid::{FillState, ViewGrid};
use crate::image::Image;
use crate::math::RigidTransform;
use crate::view::View;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct CameraRecord {
    world_from_camera: [[f64; 4]; 4],
    fx: f64,
    fy: f64,
    cx: f64,
    cy: f64,
    width: u32,
    height: u32,
}

impl CameraRecord {
    fn from_camera(cam: &Camera) -> Self {
        CameraRecord {
            world_from_camera: cam.world_from_camera.to_matrix4(),
            fx: cam.fx,
            fy: cam.fy,
            cx: cam.cx,
            cy: cam.cy,
            width: cam.width,
            height: cam.height,
        }
    }

    fn to_camera(&self) -> Result<Camera> {
        Camera::new(
            RigidTransform::from_matrix4(self.world_from_camera),
            self.fx,
            self.fy,
            self.cx,
            self.cy,
            self.width,
            self.height,
        )
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GridManifest {
    image_width: u32,
    image_height: u32,
    cameras: Vec<CameraRecord>,
    raw_times: Vec<f64>,
    normalized_times: Vec<f64>,
    fill_state: Vec<Vec<FillState>>,
}

fn write_png(path: &Path, img: &Image) -> Result<()> {
    let buf = image::ImageBuffer::<image::Rgb<u16>, Vec<u16>>::from_raw(
        img.width(),
        img.height(),
        img.to_u16(),
    )
    .expect("buffer size matches image dimensions");
    image::DynamicImage::ImageRgb16(buf).save(path)?;
    Ok(())
}

fn read_png(path: &Path) -> Result<Image> {
    let img = image::open(path)?.into_rgb16();
    let (w, h) = (img.width(), img.height());
    Image::from_u16(w, h, img.as_raw())
}

pub fn save_grid(grid: &ViewGrid, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let (w, h) = grid.image_size();
    let manifest = GridManifest {
        image_width: w,
        image_height: h,
        cameras: grid.cameras().iter().map(CameraRecord::from_camera).collect(),
        raw_times: grid.raw_times().to_vec(),
        normalized_times: grid.times().to_vec(),
        fill_state: (0..grid.rows())
            .map(|r| (0..grid.cols()).map(|c| grid.fill_state(r, c)).collect())
            .collect(),
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    for r in 0..grid.rows() {
        let cam_dir = dir.join(format!("cam{r:03}"));
        fs::create_dir_all(&cam_dir)?;
        for c in 0..grid.cols() {
            if let Some(img) = grid.cell(r, c) {
                write_png(&cam_dir.join(format!("t{c:04}.png")), img)?;
            }
        }
    }
    Ok(())
}

pub fn load_grid(dir: &Path) -> Result<ViewGrid> {
    let manifest: GridManifest =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
    let cameras = manifest
        .cameras
        .iter()
        .map(CameraRecord::to_camera)
        .collect::<Result<Vec<_>>>()?;
    let rows = cameras.len();
    let cols = manifest.raw_times.len();
    if manifest.fill_state.len() != rows
        || manifest.fill_state.iter().any(|r| r.len() != cols)
        || manifest.normalized_times.len() != cols
    {
        return Err(CoreError::ManifestMismatch(
            "fill_state/time dimensions disagree with cameras".into(),
        ));
    }
    let mut grid =
        ViewGrid::with_times(cameras, manifest.raw_times, manifest.normalized_times)?;
    for r in 0..rows {
        for c in 0..cols {
            match manifest.fill_state[r][c] {
                FillState::Empty => {}
                state => {
                    let path = dir.join(format!("cam{r:03}")).join(format!("t{c:04}.png"));
                    if !path.exists() {
                        return Err(CoreError::MissingCell { cam: r, time: c });
                    }
                    let img = read_png(&path)?;
                    if img.width() != manifest.image_width || img.height() != manifest.image_height
                    {
                        return Err(CoreError::ManifestMismatch(format!(
                            "cell ({r}, {c}) is {}x{}, manifest says {}x{}",
                            img.width(),
                            img.height(),
                            manifest.image_width,
                            manifest.image_height
                        )));
                    }
                    grid.set_cell(r, c, img, state)?;
                }
            }
        }
    }
    Ok(grid)
}

#[derive(Debug, Serialize, Deserialize)]
struct VideoManifest {
    image_width: u32,
    image_height: u32,
    cameras: Vec<CameraRecord>,
    raw_times: Vec<f64>,
    normalized_times: Vec<f64>,
}

pub fn save_video(frames: &[View], raw_times: &[f64], dir: &Path) -> Result<()> {
    if frames.is_empty() {
        return Err(CoreError::EmptyInput("save_video frames"));
    }
    if frames.len() != raw_times.len() {
        return Err(CoreError::ShapeMismatch(format!(
            "{} frames but {} raw times",
            frames.len(),
            raw_times.len()
        )));
    }
    fs::create_dir_all(dir)?;
    let manifest = VideoManifest {
        image_width: frames[0].image.width(),
        image_height: frames[0].image.height(),
        cameras: frames.iter().map(|v| CameraRecord::from_camera(&v.camera)).collect(),
        raw_times: raw_times.to_vec(),
        normalized_times: frames.iter().map(|v| v.time).collect(),
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    for (i, v) in frames.iter().enumerate() {
        write_png(&dir.join(format!("frame_{i:04}.png")), &v.image)?;
    }
    Ok(())
}

/// Returns the frames plus their raw timestamps.
pub fn load_video(dir: &Path) -> Result<(Vec<View>, Vec<f64>)> {
    let manifest: VideoManifest =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
    if manifest.cameras.len() != manifest.raw_times.len()
        || manifest.cameras.len() != manifest.normalized_times.len()
    {
        return Err(CoreError::ManifestMismatch("video manifest lengths".into()));
    }
    let mut frames = Vec::with_capacity(manifest.cameras.len());
    for (i, rec) in manifest.cameras.iter().enumerate() {
        let path = dir.join(format!("frame_{i:04}.png"));
        if !path.exists() {
            return Err(CoreError::MissingCell { cam: 0, time: i });
        }
        let img = read_png(&path)?;
        frames.push(View::new(img, rec.to_camera()?, manifest.normalized_times[i])?);
    }
    Ok((frames, manifest.raw_times))
}

/// Load only the frame images of a video directory (no manifest needed);
/// frames are taken in `frame_NNNN.png` order.
pub fn load_video_frames(dir: &Path) -> Result<Vec<Image>> {
    let mut frames = Vec::new();
    let mut i = 0;
    loop {
        let path = dir.join(format!("frame_{i:04}.png"));
        if !path.exists() {
            break;
        }
        frames.push(read_png(&path)?);
        i += 1;
    }
    if frames.is_empty() {
        return Err(CoreError::EmptyInput("load_video_frames"));
    }
    Ok(frames)
}
