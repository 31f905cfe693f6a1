//! Shared geometry, image, and view-grid types used by every other crate:
//! pinhole cameras, timestamped views, the camera-by-time image grid, and
//! their on-disk formats.

mod camera;
mod error;
mod grid;
mod image;
pub mod io;
mod math;
mod time;
mod view;

pub use camera::Camera;
pub use error::CoreError;
pub use grid::{FillState, ViewGrid};
pub use image::Image;
pub use math::{Aabb, Mat3, RigidTransform, Vec3};
pub use time::normalize_times;
pub use view::View;

pub type Result<T> = std::result::Result<T, CoreError>;
