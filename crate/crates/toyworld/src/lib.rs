//! Procedural dynamic 3D scenes with an analytic ray-casting renderer.
//! Ground truth is available at any (camera, time), which backs the oracle
//! denoiser and most verification in the workspace.

mod generate;
mod render;
mod scene;

pub use generate::{generate_scene, GenerateConfig, ToyWorldError};
pub use render::{render, render_input_video};
pub use scene::{Background, Motion, Primitive, SceneSpec, Shape};
