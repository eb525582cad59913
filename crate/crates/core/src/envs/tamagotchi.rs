//! Tamagotchi: amount of state signal.
//!
//! Four hidden needs (play, feed, sleep, clean) live in `[0, 100]`. The
//! agent sees only the rounded mean of the needs (HP) and a short utterance.
//! Each utterance token is drawn from a softmax whose signal tokens `0..4`
//! get logit `(100 - v_j) / (100 tau)` and whose noise tokens get logit 0,
//! so a small temperature names the most deficient need and a large one
//! babbles.

use serde::{Deserialize, Serialize};

use crate::env::{Dynamics, EnvironmentHandle, Transition};
use crate::error::EnvError;
use crate::rng::RngStream;
use crate::space::{Element, SpaceDescriptor};

pub const NEEDS: [&str; 4] = ["play", "feed", "sleep", "clean"];
pub const BOOST: i64 = 30;
pub const DECAY: i64 = 5;
pub const WRONG_PENALTY: i64 = 10;
pub const MIN_REWARD: f64 = -200.0;
pub const MAX_REWARD: f64 = 75.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TamagotchiConfig {
    pub tau: f64,
    pub max_msg_length: usize,
    pub vocab_size: usize,
    pub steps_per_episode: usize,
}

impl Default for TamagotchiConfig {
    fn default() -> Self {
        Self { tau: 1.0, max_msg_length: 1, vocab_size: 8, steps_per_episode: 100 }
    }
}

impl TamagotchiConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(EnvError::Parameter("tamagotchi tau must be a positive finite number".into()));
        }
        if self.max_msg_length < 1 {
            return Err(EnvError::Parameter("max_msg_length must be >= 1".into()));
        }
        if self.vocab_size < 4 {
            return Err(EnvError::Parameter("vocabulary must hold the 4 signal tokens".into()));
        }
        if self.steps_per_episode < 1 {
            return Err(EnvError::Parameter("steps_per_episode must be >= 1".into()));
        }
        Ok(())
    }
}

/// Weighted mean where lower needs weigh more, mapped linearly onto `[-200, 75]`.
pub fn happiness(needs: &[i64; 4]) -> f64 {
    let weights: Vec<f64> = needs.iter().map(|&v| (101 - v) as f64).collect();
    let total: f64 = weights.iter().sum();
    let m: f64 = weights.iter().zip(needs).map(|(w, &v)| w * v as f64).sum::<f64>() / total;
    (MAX_REWARD - MIN_REWARD) / 100.0 * m + MIN_REWARD
}

pub fn hp(needs: &[i64; 4]) -> usize {
    (needs.iter().sum::<i64>() as f64 / 4.0).round() as usize
}

/// Lowest need, ties to the lowest index.
pub fn ideal_action(needs: &[i64; 4]) -> usize {
    let mut best = 0;
    for i in 1..4 {
        if needs[i] < needs[best] {
            best = i;
        }
    }
    best
}

/// Token probabilities for the given needs.
pub fn token_distribution(needs: &[i64; 4], tau: f64, vocab_size: usize) -> Vec<f64> {
    let logits: Vec<f64> = (0..vocab_size)
        .map(|j| if j < 4 { (100 - needs[j]) as f64 / (100.0 * tau) } else { 0.0 })
        .collect();
    let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}

#[derive(Clone, Debug)]
pub struct Tamagotchi {
    config: TamagotchiConfig,
    pub needs: [i64; 4],
    pub utterance: Vec<usize>,
    pub steps: usize,
}

impl Tamagotchi {
    pub fn new(config: TamagotchiConfig) -> Result<Self, EnvError> {
        config.validate()?;
        let n = config.max_msg_length;
        Ok(Self { config, needs: [100; 4], utterance: vec![0; n], steps: 0 })
    }

    pub fn config(&self) -> &TamagotchiConfig {
        &self.config
    }

    fn speak(&mut self, rng: &mut RngStream) {
        let probs = token_distribution(&self.needs, self.config.tau, self.config.vocab_size);
        self.utterance = (0..self.config.max_msg_length).map(|_| rng.weighted_index(&probs)).collect();
    }

    fn observe(&self) -> Element {
        let mut v = Vec::with_capacity(1 + self.utterance.len());
        v.push(hp(&self.needs));
        v.extend(self.utterance.iter().copied());
        Element::MultiDiscrete(v)
    }

    pub fn act(&mut self, action: usize, rng: &mut RngStream) -> Transition {
        let ideal = ideal_action(&self.needs);
        for (i, v) in self.needs.iter_mut().enumerate() {
            *v += if i == action { BOOST } else { -DECAY };
            if action != ideal {
                *v -= WRONG_PENALTY;
            }
            *v = (*v).clamp(0, 100);
        }
        self.steps += 1;
        let reward = happiness(&self.needs);
        self.speak(rng);
        let dead = hp(&self.needs) == 0;
        let done = dead || self.steps >= self.config.steps_per_episode;
        Transition::new(self.observe(), reward, done).with_info("ideal", if action == ideal { 1.0 } else { 0.0 })
    }
}

impl Dynamics for Tamagotchi {
    fn name(&self) -> &'static str {
        "tamagotchi"
    }

    fn observation_space(&self) -> SpaceDescriptor {
        let mut dims = vec![101];
        dims.extend(std::iter::repeat_n(self.config.vocab_size, self.config.max_msg_length));
        SpaceDescriptor::MultiDiscrete { dims }
    }

    fn action_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: 4 }
    }

    /// The episode always terminates by itself; the step limit is a backstop.
    fn default_max_steps(&self) -> usize {
        self.config.steps_per_episode + 1
    }

    fn reward_range(&self) -> (f64, f64) {
        (MIN_REWARD, MAX_REWARD)
    }

    fn reset(&mut self, rng: &mut RngStream) -> Element {
        self.needs = [100; 4];
        self.steps = 0;
        self.speak(rng);
        self.observe()
    }

    fn transition(&mut self, action: &Element, rng: &mut RngStream) -> Transition {
        self.act(action.as_discrete().expect("validated discrete action"), rng)
    }

    fn render(&self) -> String {
        let words: Vec<String> = self
            .utterance
            .iter()
            .map(|&t| if t < 4 { NEEDS[t].to_string() } else { format!("w{t}") })
            .collect();
        format!("HP {:>3}  step {}/{}\nsays: {}", hp(&self.needs), self.steps, self.config.steps_per_episode, words.join(" "))
    }
}

pub fn make(config: TamagotchiConfig, seed: u64) -> Result<EnvironmentHandle<Tamagotchi>, EnvError> {
    Ok(EnvironmentHandle::new(Tamagotchi::new(config)?, seed))
}
