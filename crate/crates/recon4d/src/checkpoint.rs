use crate::deform::DeformationField;
use crate::gaussians::GaussianCloud;
use crate::{ReconError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;
use viewloom_core::Aabb;

const VERSION: u32 = 1;

/// JSON-of-arrays model checkpoint.
#[derive(Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub positions: Vec<[f64; 3]>,
    pub log_scales: Vec<f64>,
    pub opacity_logits: Vec<f64>,
    pub colors: Vec<[f64; 3]>,
    pub field_resolution: usize,
    pub field_features: usize,
    pub planes: Vec<Vec<f64>>,
    pub head: Vec<f64>,
    pub bounds: Aabb,
}

pub fn save_checkpoint(cloud: &GaussianCloud, field: &DeformationField, path: &Path) -> Result<()> {
    let ckpt = Checkpoint {
        version: VERSION,
        positions: cloud.positions.iter().map(|p| p.to_array()).collect(),
        log_scales: cloud.log_scales.clone(),
        opacity_logits: cloud.opacity_logits.clone(),
        colors: cloud.colors.clone(),
        field_resolution: field.resolution,
        field_features: field.features,
        planes: field.planes.to_vec(),
        head: field.head.clone(),
        bounds: field.bounds,
    };
    std::fs::write(path, serde_json::to_string(&ckpt)?)?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<(GaussianCloud, DeformationField)> {
    let ckpt: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if ckpt.version != VERSION {
        return Err(ReconError::Checkpoint(format!("unsupported version {}", ckpt.version)));
    }
    let n = ckpt.positions.len();
    if ckpt.log_scales.len() != n || ckpt.opacity_logits.len() != n || ckpt.colors.len() != n {
        return Err(ReconError::Checkpoint("parameter array lengths disagree".into()));
    }
    if ckpt.planes.len() != 6 {
        return Err(ReconError::Checkpoint("expected 6 feature planes".into()));
    }
    let expected = ckpt.field_resolution * ckpt.field_resolution * ckpt.field_features;
    if ckpt.planes.iter().any(|p| p.len() != expected)
        || ckpt.head.len() != 3 * ckpt.field_features
    {
        return Err(ReconError::Checkpoint("field array lengths disagree".into()));
    }
    let cloud = GaussianCloud {
        positions: ckpt.positions.iter().map(|&a| viewloom_core::Vec3::from_array(a)).collect(),
        log_scales: ckpt.log_scales,
        opacity_logits: ckpt.opacity_logits,
        colors: ckpt.colors,
    };
    let mut planes_iter = ckpt.planes.into_iter();
    let planes = std::array::from_fn(|_| planes_iter.next().expect("6 planes"));
    let field = DeformationField {
        resolution: ckpt.field_resolution,
        features: ckpt.field_features,
        planes,
        head: ckpt.head,
        bounds: ckpt.bounds,
    };
    Ok((cloud, field))
}
