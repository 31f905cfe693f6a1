use crate::camera::Camera;
use crate::error::CoreError;
use crate::image::Image;
use crate::Result;

/// An image plus the camera that captured it and its normalized timestamp;
/// the atom of all conditioning and generation.
#[derive(Debug, Clone, PartialEq)]
pub struct View {
    pub image: Image,
    pub camera: Camera,
    pub time: f64,
}

impl View {
    pub fn new(image: Image, camera: Camera, time: f64) -> Result<Self> {
        if image.width() != camera.width || image.height() != camera.height {
            return Err(CoreError::ShapeMismatch(format!(
                "image {}x{} does not match camera {}x{}",
                image.width(),
                image.height(),
                camera.width,
                camera.height
            )));
        }
        if !(0.0..=1.0).contains(&time) {
            return Err(CoreError::ShapeMismatch(format!(
                "time {time} outside [0, 1]"
            )));
        }
        Ok(View { image, camera, time })
    }
}
