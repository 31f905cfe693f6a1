/// Plain Adam over a flat parameter vector. Moments can be remapped when the
/// Gaussian set changes shape during densification.
#[derive(Debug, Clone)]
pub struct Adam {
    pub lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    t: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Adam {
    pub fn new(lr: f64, n: usize) -> Self {
        Adam { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8, t: 0, m: vec![0.0; n], v: vec![0.0; n] }
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        assert_eq!(params.len(), self.m.len(), "adam state size");
        assert_eq!(params.len(), grads.len(), "gradient size");
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grads[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grads[i] * grads[i];
            let mh = self.m[i] / bc1;
            let vh = self.v[i] / bc2;
            params[i] -= self.lr * mh / (vh.sqrt() + self.eps);
        }
    }

    /// Rebuild moments after densify/prune: entry i of the new state copies
    /// stride consecutive values from old index source[i], or zeros for fresh
    /// Gaussians.
    pub fn remap(&mut self, source: &[Option<usize>], stride: usize) {
        let mut m = vec![0.0; source.len() * stride];
        let mut v = vec![0.0; source.len() * stride];
        for (i, src) in source.iter().enumerate() {
            if let Some(s) = src {
                for k in 0..stride {
                    m[i * stride + k] = self.m[s * stride + k];
                    v[i * stride + k] = self.v[s * stride + k];
                }
            }
        }
        self.m = m;
        self.v = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_a_quadratic() {
        let mut p = vec![3.0, -2.0];
        let mut opt = Adam::new(0.05, 2);
        for _ in 0..800 {
            let g: Vec<f64> = p.iter().map(|x| 2.0 * x).collect();
            opt.step(&mut p, &g);
        }
        assert!(p.iter().all(|x| x.abs() < 1e-3), "{p:?}");
    }

    #[test]
    fn remap_keeps_and_zeroes() {
        let mut opt = Adam::new(0.1, 4);
        opt.step(&mut [0.0, 0.0, 0.0, 0.0], &[1.0, 2.0, 3.0, 4.0]);
        let m_before = opt.m.clone();
        opt.remap(&[Some(1), None, Some(0)], 2);
        assert_eq!(opt.m.len(), 6);
        assert_eq!(&opt.m[0..2], &m_before[2..4]);
        assert_eq!(&opt.m[2..4], &[0.0, 0.0]);
        assert_eq!(&opt.m[4..6], &m_before[0..2]);
    }
}
