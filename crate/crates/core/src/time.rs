use crate::error::CoreError;
use crate::Result;

/// Normalize raw timestamps to [0, 1] relative to the first timestamp.
/// A constant sequence maps to all zeros.
pub fn normalize_times(raw: &[f64]) -> Result<Vec<f64>> {
    if raw.is_empty() {
        return Err(CoreError::EmptyInput("normalize_times"));
    }
    for i in 1..raw.len() {
        if raw[i] < raw[i - 1] {
            return Err(CoreError::TimeOrdering { index: i });
        }
    }
    let first = raw[0];
    let span = raw[raw.len() - 1] - first;
    if span == 0.0 {
        return Ok(vec![0.0; raw.len()]);
    }
    Ok(raw.iter().map(|&t| (t - first) / span).collect())
}
