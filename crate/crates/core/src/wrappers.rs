//! Observation wrappers.

use std::collections::VecDeque;

use crate::env::{Environment, StepOutcome};
use crate::error::EnvError;
use crate::space::{Element, SpaceDescriptor};

/// Presents the `k` most recent base observations as one multi-discrete
/// observation, oldest first.
///
/// Each frame holds the key of a base observation. Before `k` observations
/// have been seen in an episode the missing frames hold a padding symbol
/// equal to the base cardinality, so the wrapped space has `k` dims of
/// `base_cardinality + 1`.
pub struct FrameStack<E: Environment> {
    inner: E,
    k: usize,
    pad: usize,
    frames: VecDeque<usize>,
    space: SpaceDescriptor,
    name: String,
}

impl<E: Environment> FrameStack<E> {
    pub fn new(inner: E, k: usize) -> Result<Self, EnvError> {
        if k < 1 {
            return Err(EnvError::Parameter("framestack length k must be >= 1".into()));
        }
        let base = inner.observation_space();
        if !base.is_countable() {
            return Err(EnvError::Parameter(
                "framestacking requires a discrete or multi-discrete observation space".into(),
            ));
        }
        let card = base
            .cardinality()
            .and_then(|c| usize::try_from(c).ok())
            .ok_or_else(|| EnvError::Parameter("base observation space too large".into()))?;
        let space = SpaceDescriptor::multi_discrete(vec![card + 1; k])?;
        let name = format!("{}+framestack{k}", inner.name());
        Ok(Self { inner, k, pad: card, frames: VecDeque::with_capacity(k), space, name })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Value used for "no observation yet".
    pub fn padding_symbol(&self) -> usize {
        self.pad
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    fn push(&mut self, obs: &Element) -> Result<Element, EnvError> {
        let key = self.inner.observation_space().key_of(obs)?;
        if self.frames.len() == self.k {
            self.frames.pop_front();
        }
        self.frames.push_back(key.0 as usize);
        let mut out = vec![self.pad; self.k - self.frames.len()];
        out.extend(self.frames.iter().copied());
        Ok(Element::MultiDiscrete(out))
    }
}

impl<E: Environment> Environment for FrameStack<E> {
    fn name(&self) -> &str {
        &self.name
    }

    fn observation_space(&self) -> &SpaceDescriptor {
        &self.space
    }

    fn action_space(&self) -> &SpaceDescriptor {
        self.inner.action_space()
    }

    fn max_steps(&self) -> usize {
        self.inner.max_steps()
    }

    fn reward_range(&self) -> (f64, f64) {
        self.inner.reward_range()
    }

    fn reset(&mut self, seed: Option<u64>) -> Element {
        let obs = self.inner.reset(seed);
        self.frames.clear();
        self.push(&obs).expect("base environment emitted an observation outside its space")
    }

    fn step(&mut self, action: &Element) -> Result<StepOutcome, EnvError> {
        let mut out = self.inner.step(action)?;
        out.observation = self.push(&out.observation)?;
        Ok(out)
    }

    fn elapsed_steps(&self) -> usize {
        self.inner.elapsed_steps()
    }

    fn render(&self) -> String {
        let frames: Vec<String> = self
            .frames
            .iter()
            .map(|f| if *f == self.pad { "_".to_string() } else { f.to_string() })
            .collect();
        format!("{}\nframes: [{}]", self.inner.render(), frames.join(" "))
    }
}
