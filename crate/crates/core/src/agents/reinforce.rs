//! REINFORCE with linear-Gaussian and linear-softmax policies.

use std::f64::consts::PI;

use crate::rng::RngStream;

const LOG_STD_FLOOR: f64 = -13.815510557964274; // ln(1e-6)
const HALF_LN_TAU: f64 = 0.9189385332046727; // 0.5 * ln(2 pi)

/// Discounted returns-to-go.
pub fn returns_to_go(rewards: &[f64], gamma: f64) -> Vec<f64> {
    let mut out = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for t in (0..rewards.len()).rev() {
        acc = rewards[t] + gamma * acc;
        out[t] = acc;
    }
    out
}

/// Gaussian policy whose mean is linear in the features and whose
/// per-dimension log standard deviation is a free parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearGaussianPolicy {
    features: usize,
    dims: usize,
    /// Row-major `features x dims`.
    weights: Vec<f64>,
    log_std: Vec<f64>,
    pub learning_rate: f64,
    /// Times a standard deviation hit the `1e-6` floor.
    pub std_clamps: u64,
}

impl LinearGaussianPolicy {
    pub fn new(features: usize, dims: usize, init_std: f64, learning_rate: f64) -> Self {
        Self {
            features,
            dims,
            weights: vec![0.0; features * dims],
            log_std: vec![init_std.max(1e-6).ln(); dims],
            learning_rate,
            std_clamps: 0,
        }
    }

    pub fn num_params(&self) -> usize {
        self.weights.len() + self.log_std.len()
    }

    /// Weights followed by log standard deviations.
    pub fn params(&self) -> Vec<f64> {
        self.weights.iter().chain(&self.log_std).copied().collect()
    }

    pub fn set_params(&mut self, p: &[f64]) {
        assert_eq!(p.len(), self.num_params());
        let (w, s) = p.split_at(self.weights.len());
        self.weights.copy_from_slice(w);
        self.log_std.copy_from_slice(s);
    }

    pub fn mean(&self, phi: &[f64]) -> Vec<f64> {
        (0..self.dims).map(|d| phi.iter().enumerate().map(|(f, x)| x * self.weights[f * self.dims + d]).sum()).collect()
    }

    pub fn std(&self) -> Vec<f64> {
        self.log_std.iter().map(|l| l.exp()).collect()
    }

    pub fn sample(&self, phi: &[f64], rng: &mut RngStream) -> Vec<f64> {
        let mu = self.mean(phi);
        let sd = self.std();
        (0..self.dims).map(|d| mu[d] + sd[d] * rng.standard_normal()).collect()
    }

    pub fn log_prob(&self, phi: &[f64], action: &[f64]) -> f64 {
        let mu = self.mean(phi);
        (0..self.dims)
            .map(|d| {
                let z = (action[d] - mu[d]) / self.log_std[d].exp();
                -0.5 * z * z - self.log_std[d] - HALF_LN_TAU
            })
            .sum()
    }

    /// Analytic gradient of `log_prob` in `params()` order.
    pub fn grad_log_prob(&self, phi: &[f64], action: &[f64]) -> Vec<f64> {
        let mu = self.mean(phi);
        let mut g = vec![0.0; self.num_params()];
        for d in 0..self.dims {
            let var = (2.0 * self.log_std[d]).exp();
            let diff = action[d] - mu[d];
            for f in 0..self.features {
                g[f * self.dims + d] = phi[f] * diff / var;
            }
            g[self.weights.len() + d] = diff * diff / var - 1.0;
        }
        g
    }

    /// One REINFORCE step over an episode of `(features, raw action)` pairs.
    pub fn update(&mut self, steps: &[(Vec<f64>, Vec<f64>)], advantages: &[f64]) {
        let mut total = vec![0.0; self.num_params()];
        for ((phi, a), adv) in steps.iter().zip(advantages) {
            if *adv == 0.0 {
                continue;
            }
            for (t, g) in total.iter_mut().zip(self.grad_log_prob(phi, a)) {
                *t += adv * g;
            }
        }
        let mut p = self.params();
        for (x, g) in p.iter_mut().zip(&total) {
            *x += self.learning_rate * g;
        }
        self.set_params(&p);
        for l in self.log_std.iter_mut() {
            if *l < LOG_STD_FLOOR {
                *l = LOG_STD_FLOOR;
                self.std_clamps += 1;
            }
        }
    }
}

/// Softmax policy over discrete actions with logits linear in the features.
#[derive(Clone, Debug, PartialEq)]
pub struct SoftmaxPolicy {
    features: usize,
    actions: usize,
    /// Row-major `features x actions`.
    weights: Vec<f64>,
    pub learning_rate: f64,
}

impl SoftmaxPolicy {
    pub fn new(features: usize, actions: usize, learning_rate: f64) -> Self {
        Self { features, actions, weights: vec![0.0; features * actions], learning_rate }
    }

    pub fn params(&self) -> Vec<f64> {
        self.weights.clone()
    }

    pub fn set_params(&mut self, p: &[f64]) {
        self.weights.copy_from_slice(p);
    }

    pub fn probabilities(&self, phi: &[f64]) -> Vec<f64> {
        let logits: Vec<f64> = (0..self.actions)
            .map(|b| phi.iter().enumerate().map(|(f, x)| x * self.weights[f * self.actions + b]).sum())
            .collect();
        let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
        let z: f64 = e.iter().sum();
        e.into_iter().map(|x| x / z).collect()
    }

    pub fn sample(&self, phi: &[f64], rng: &mut RngStream) -> usize {
        rng.weighted_index(&self.probabilities(phi))
    }

    pub fn greedy(&self, phi: &[f64]) -> usize {
        let p = self.probabilities(phi);
        (0..self.actions).fold(0, |best, b| if p[b] > p[best] { b } else { best })
    }

    pub fn log_prob(&self, phi: &[f64], action: usize) -> f64 {
        self.probabilities(phi)[action].ln()
    }

    pub fn grad_log_prob(&self, phi: &[f64], action: usize) -> Vec<f64> {
        let p = self.probabilities(phi);
        let mut g = vec![0.0; self.weights.len()];
        for f in 0..self.features {
            for b in 0..self.actions {
                let indicator = if b == action { 1.0 } else { 0.0 };
                g[f * self.actions + b] = phi[f] * (indicator - p[b]);
            }
        }
        g
    }

    pub fn update(&mut self, steps: &[(Vec<f64>, usize)], advantages: &[f64]) {
        let mut total = vec![0.0; self.weights.len()];
        for ((phi, a), adv) in steps.iter().zip(advantages) {
            if *adv == 0.0 {
                continue;
            }
            for (t, g) in total.iter_mut().zip(self.grad_log_prob(phi, *a)) {
                *t += adv * g;
            }
        }
        for (w, g) in self.weights.iter_mut().zip(&total) {
            *w += self.learning_rate * g;
        }
    }
}

/// Exponentially weighted running mean of episode returns.
#[derive(Clone, Debug, PartialEq)]
pub struct Baseline {
    pub value: f64,
    pub rate: f64,
    initialised: bool,
}

impl Baseline {
    pub fn new(rate: f64) -> Self {
        Self { value: 0.0, rate, initialised: false }
    }

    pub fn update(&mut self, g: f64) {
        if self.initialised {
            self.value += self.rate * (g - self.value);
        } else {
            self.value = g;
            self.initialised = true;
        }
    }
}

/// Features for the two-link arm: the 7 observation values scaled to
/// `[-1, 1]`, sin/cos of both joint angles, and a bias.
pub fn arm_features(obs: &[f64]) -> Vec<f64> {
    let (p1x, p1y, p2x, p2y) = (obs[0], obs[1], obs[2], obs[3]);
    let t1 = p1y.atan2(p1x);
    let t12 = (p2y - p1y).atan2(p2x - p1x);
    let t2 = (t12 - t1 + PI).rem_euclid(2.0 * PI) - PI;
    vec![
        p1x,
        p1y,
        p2x / 2.0,
        p2y / 2.0,
        obs[4] / 2.0,
        obs[5] / 2.0,
        2.0 * obs[6] - 1.0,
        t1.sin(),
        t1.cos(),
        t2.sin(),
        t2.cos(),
        1.0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_advantage_leaves_parameters() {
        let mut p = LinearGaussianPolicy::new(3, 2, 0.5, 0.1);
        p.set_params(&[0.1, -0.2, 0.3, 0.0, 0.5, -0.5, -0.7, -0.6]);
        let before = p.params();
        p.update(&[(vec![1.0, 2.0, 3.0], vec![0.4, -0.1])], &[0.0]);
        assert_eq!(p.params(), before);
    }

    proptest! {
        #[test]
        fn gaussian_gradient_matches_differences(
            params in prop::collection::vec(-1.0f64..1.0, 8),
            phi in prop::collection::vec(-2.0f64..2.0, 3),
            action in prop::collection::vec(-1.5f64..1.5, 2),
        ) {
            let mut p = LinearGaussianPolicy::new(3, 2, 1.0, 0.1);
            p.set_params(&params);
            let g = p.grad_log_prob(&phi, &action);
            for i in 0..params.len() {
                let h = 1e-5;
                let mut up = params.clone();
                up[i] += h;
                let mut dn = params.clone();
                dn[i] -= h;
                p.set_params(&up);
                let lu = p.log_prob(&phi, &action);
                p.set_params(&dn);
                let ld = p.log_prob(&phi, &action);
                let fd = (lu - ld) / (2.0 * h);
                prop_assert!((fd - g[i]).abs() <= 1e-5 * g[i].abs().max(1.0), "param {}: {} vs {}", i, fd, g[i]);
            }
        }
    }

    #[test]
    fn std_floor_is_enforced_and_counted() {
        let mut p = LinearGaussianPolicy::new(1, 1, 1e-5, 1.0);
        // a sample far inside one std pulls log-std down hard
        p.update(&[(vec![1.0], vec![0.0])], &[100.0]);
        assert!(p.std()[0] >= 1e-6 * (1.0 - 1e-12));
        assert_eq!(p.std_clamps, 1);
    }

    #[test]
    fn returns_to_go_by_hand() {
        assert_eq!(returns_to_go(&[1.0, 0.0, 2.0], 0.5), vec![1.5, 1.0, 2.0]);
    }

    #[test]
    fn softmax_gradient_matches_differences() {
        let mut p = SoftmaxPolicy::new(2, 3, 0.1);
        p.set_params(&[0.3, -0.1, 0.7, 0.2, 0.0, -0.4]);
        let phi = [1.0, -0.5];
        let g = p.grad_log_prob(&phi, 2);
        let base = p.params();
        for i in 0..base.len() {
            let h = 1e-6;
            let mut up = base.clone();
            up[i] += h;
            let mut dn = base.clone();
            dn[i] -= h;
            p.set_params(&up);
            let lu = p.log_prob(&phi, 2);
            p.set_params(&dn);
            let ld = p.log_prob(&phi, 2);
            assert!(((lu - ld) / (2.0 * h) - g[i]).abs() < 1e-7);
        }
    }

    #[test]
    fn bandit_preference_rises_monotonically() {
        let mut policy = SoftmaxPolicy::new(1, 2, 0.5);
        let mut baseline = Baseline::new(0.1);
        let mut rng = RngStream::new(3);
        let mut last = policy.probabilities(&[1.0])[1];
        for _ in 0..200 {
            let a = policy.sample(&[1.0], &mut rng);
            let r = if a == 1 { 1.0 } else { 0.0 };
            let adv = r - baseline.value;
            policy.update(&[(vec![1.0], a)], &[adv]);
            baseline.update(r);
            let now = policy.probabilities(&[1.0])[1];
            assert!(now >= last, "{now} < {last}");
            last = now;
        }
        assert!(last > 0.9);
    }

    #[test]
    fn arm_features_recover_angles() {
        let (t1, t2) = (0.7f64, -1.9f64);
        let p1 = (t1.cos(), t1.sin());
        let p2 = (p1.0 + (t1 + t2).cos(), p1.1 + (t1 + t2).sin());
        let f = arm_features(&[p1.0, p1.1, p2.0, p2.1, p2.0, p2.1, 1.0]);
        assert!((f[7] - t1.sin()).abs() < 1e-12 && (f[8] - t1.cos()).abs() < 1e-12);
        assert!((f[9] - t2.sin()).abs() < 1e-12 && (f[10] - t2.cos()).abs() < 1e-12);
        assert_eq!(f.len(), 12);
    }
}
