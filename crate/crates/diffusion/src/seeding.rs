//! Stable seed derivation. Sampling work is split into independently seeded
//! units (per window, per batch) so parallel execution cannot change results.

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic combination of seed components.
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut acc = 0x243f6a8885a308d3u64; // arbitrary non-zero start
    for &p in parts {
        acc = mix(acc ^ p);
    }
    acc
}

/// Incremental hasher over f64 bit patterns, for content-derived seeds.
#[derive(Debug, Clone)]
pub struct ContentHasher {
    acc: u64,
}

impl ContentHasher {
    pub fn new(seed: u64) -> Self {
        ContentHasher { acc: mix(seed ^ 0x6a09e667f3bcc908) }
    }

    pub fn push_u64(&mut self, v: u64) {
        self.acc = mix(self.acc ^ v);
    }

    pub fn push_f64(&mut self, v: f64) {
        self.push_u64(v.to_bits());
    }

    pub fn push_f64s(&mut self, vs: &[f64]) {
        for &v in vs {
            self.push_f64(v);
        }
    }

    pub fn finish(&self) -> u64 {
        mix(self.acc)
    }

    /// Uniform in [-1, 1) from the current state.
    pub fn unit_signed(&self) -> f64 {
        (self.finish() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}
