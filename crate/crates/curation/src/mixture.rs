use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Training-mixture weights over data sources plus the probability of the
/// degenerate single-image case (all targets set to an input view).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub sources: Vec<(String, f64)>,
    pub single_image_prob: f64,
}

impl Default for MixtureSpec {
    fn default() -> Self {
        let sources = [
            ("objaverse_like", 2.5),
            ("kubric_like", 2.5),
            ("re10k_like", 1.0),
            ("mvimgnet_like", 1.0),
            ("co3d_like", 1.0),
            ("mq4k_like", 1.0),
            ("static_view_video", 5.0),
            ("augmented_co3d", 1.0),
            ("augmented_video", 1.0),
        ]
        .into_iter()
        .map(|(n, w)| (n.to_string(), w))
        .collect();
        MixtureSpec { sources, single_image_prob: 0.01 }
    }
}

impl MixtureSpec {
    pub fn validate(&self) -> bool {
        !self.sources.is_empty()
            && self.sources.iter().all(|(_, w)| *w > 0.0)
            && (0.0..=1.0).contains(&self.single_image_prob)
    }

    pub fn total_weight(&self) -> f64 {
        self.sources.iter().map(|(_, w)| w).sum()
    }

    pub fn normalized_weight(&self, name: &str) -> Option<f64> {
        let total = self.total_weight();
        self.sources.iter().find(|(n, _)| n == name).map(|(_, w)| w / total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchDescriptor {
    pub source: String,
    pub degenerate_single_image: bool,
}

/// Draw one batch descriptor: source proportional to the weights, degenerate
/// flag independently with `single_image_prob`.
pub fn mixture_sample(spec: &MixtureSpec, rng: &mut ChaCha8Rng) -> BatchDescriptor {
    assert!(spec.validate(), "invalid mixture spec");
    let total = spec.total_weight();
    let mut x: f64 = rng.gen_range(0.0..total);
    let mut source = spec.sources.last().expect("non-empty").0.clone();
    for (name, w) in &spec.sources {
        if x < *w {
            source = name.clone();
            break;
        }
        x -= w;
    }
    let degenerate_single_image = rng.gen_bool(spec.single_image_prob);
    BatchDescriptor { source, degenerate_single_image }
}
