//! Seeded, splittable random streams.
//!
//! Every stream is a ChaCha8 generator (`rand_chacha`), which produces the
//! same sequence on every platform for a given 64-bit seed. Child streams
//! are derived from `(seed, label)` by hashing the label with FNV-1a and
//! mixing it into the parent seed with SplitMix64, so environment dynamics,
//! agent exploration and reward noise never share a stream.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream for `label`; depends only on this stream's seed,
    /// not on how much of it has been consumed.
    pub fn child(&self, label: &str) -> RngStream {
        RngStream::new(splitmix64(self.seed ^ splitmix64(fnv1a(label))))
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        rand::Rng::random::<f64>(self)
    }

    /// Uniform index in `0..n`. Panics when `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        rand::Rng::random_range(self, 0..n)
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(self)
    }

    pub fn normal(&mut self, mean: f64, std: f64) -> f64 {
        mean + std * self.standard_normal()
    }

    /// Index drawn with probability proportional to `weights`.
    pub fn weighted_index(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let mut u = self.uniform() * total;
        for (i, w) in weights.iter().enumerate() {
            if u < *w {
                return i;
            }
            u -= w;
        }
        weights.iter().rposition(|w| *w > 0.0).unwrap_or(weights.len() - 1)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RngStream::new(42);
        let mut b = RngStream::new(42);
        let xs: Vec<u64> = (0..16).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..16).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn known_first_draw_is_stable() {
        // Frozen so that a generator swap is caught.
        let mut a = RngStream::new(0);
        let first = a.next_u64();
        let mut b = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(first, b.next_u64());
    }

    #[test]
    fn children_differ_by_label_and_ignore_consumption() {
        let mut parent = RngStream::new(7);
        let c1 = parent.child("env");
        parent.next_u64();
        let c2 = parent.child("env");
        assert_eq!(c1.seed(), c2.seed());
        assert_ne!(parent.child("env").seed(), parent.child("agent").seed());
        assert_ne!(RngStream::new(8).child("env").seed(), c1.seed());
    }

    #[test]
    fn weighted_index_respects_zero_weights() {
        let mut r = RngStream::new(1);
        for _ in 0..1000 {
            let i = r.weighted_index(&[0.0, 1.0, 0.0, 2.0]);
            assert!(i == 1 || i == 3);
        }
    }

    #[test]
    fn normal_moments() {
        let mut r = RngStream::new(3);
        let n = 50_000;
        let xs: Vec<f64> = (0..n).map(|_| r.normal(2.0, 0.5)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 2.0).abs() < 0.01);
        assert!((var.sqrt() - 0.5).abs() < 0.01);
    }
}
