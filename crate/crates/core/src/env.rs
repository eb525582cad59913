//! Episodic environment protocol.
//!
//! Each environment in [`crate::envs`] implements [`Dynamics`]: a transition
//! function over its own internal state. [`EnvironmentHandle`] wraps a
//! `Dynamics` with the shared episode protocol (reset-before-step, step
//! counting, truncation at `max_steps`, action validation, seeding) and
//! exposes it through the object-safe [`Environment`] trait.

use std::collections::BTreeMap;

use crate::error::EnvError;
use crate::rng::RngStream;
use crate::space::{Element, SpaceDescriptor};

/// Auxiliary scalars reported alongside a transition.
pub type Info = BTreeMap<String, f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub observation: Element,
    pub reward: f64,
    pub terminated: bool,
    pub truncated: bool,
    pub info: Info,
}

impl StepOutcome {
    pub fn done(&self) -> bool {
        self.terminated || self.truncated
    }
}

/// Result of one environment-specific transition, before the protocol layer
/// decides on truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub observation: Element,
    pub reward: f64,
    pub terminated: bool,
    pub info: Info,
}

impl Transition {
    pub fn new(observation: Element, reward: f64, terminated: bool) -> Self {
        Self { observation, reward, terminated, info: Info::new() }
    }

    pub fn with_info(mut self, key: &str, value: f64) -> Self {
        self.info.insert(key.to_string(), value);
        self
    }
}

/// Environment-specific state and transition function.
pub trait Dynamics: Send {
    fn name(&self) -> &'static str;
    fn observation_space(&self) -> SpaceDescriptor;
    fn action_space(&self) -> SpaceDescriptor;
    fn default_max_steps(&self) -> usize;
    /// Inclusive bounds on any single-step reward, truncation penalty included.
    fn reward_range(&self) -> (f64, f64);
    /// Put the environment in its initial state and return the first observation.
    fn reset(&mut self, rng: &mut RngStream) -> Element;
    /// `action` has already been validated against `action_space`.
    fn transition(&mut self, action: &Element, rng: &mut RngStream) -> Transition;
    /// Added to the reward of the step on which the step limit expires.
    fn truncation_reward(&self) -> f64 {
        0.0
    }
    fn render(&self) -> String;
}

/// Object-safe view of an environment used by agents and the experiment runner.
pub trait Environment: Send {
    fn name(&self) -> &str;
    fn observation_space(&self) -> &SpaceDescriptor;
    fn action_space(&self) -> &SpaceDescriptor;
    fn max_steps(&self) -> usize;
    fn reward_range(&self) -> (f64, f64);
    /// Start a new episode. A given seed re-seeds the dynamics stream.
    fn reset(&mut self, seed: Option<u64>) -> Element;
    fn step(&mut self, action: &Element) -> Result<StepOutcome, EnvError>;
    /// Steps taken in the current episode.
    fn elapsed_steps(&self) -> usize;
    fn render(&self) -> String;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    NeedsReset,
    Running,
    Finished,
}

pub struct EnvironmentHandle<D: Dynamics> {
    dynamics: D,
    observation_space: SpaceDescriptor,
    action_space: SpaceDescriptor,
    max_steps: usize,
    rng: RngStream,
    steps: usize,
    phase: Phase,
}

impl<D: Dynamics> EnvironmentHandle<D> {
    /// Wrap `dynamics`; its transition randomness comes from the
    /// `"dynamics"` child of `seed`.
    pub fn new(dynamics: D, seed: u64) -> Self {
        let max_steps = dynamics.default_max_steps();
        Self {
            observation_space: dynamics.observation_space(),
            action_space: dynamics.action_space(),
            dynamics,
            max_steps,
            rng: RngStream::new(seed).child("dynamics"),
            steps: 0,
            phase: Phase::NeedsReset,
        }
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Result<Self, EnvError> {
        if max_steps == 0 {
            return Err(EnvError::Parameter("max_steps must be >= 1".into()));
        }
        self.max_steps = max_steps;
        Ok(self)
    }

    pub fn dynamics(&self) -> &D {
        &self.dynamics
    }

    /// Direct access to the internal state, for tests and planners.
    pub fn dynamics_mut(&mut self) -> &mut D {
        &mut self.dynamics
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Finished
    }
}

impl<D: Dynamics> Environment for EnvironmentHandle<D> {
    fn name(&self) -> &str {
        self.dynamics.name()
    }

    fn observation_space(&self) -> &SpaceDescriptor {
        &self.observation_space
    }

    fn action_space(&self) -> &SpaceDescriptor {
        &self.action_space
    }

    fn max_steps(&self) -> usize {
        self.max_steps
    }

    fn reward_range(&self) -> (f64, f64) {
        self.dynamics.reward_range()
    }

    fn reset(&mut self, seed: Option<u64>) -> Element {
        if let Some(seed) = seed {
            self.rng = RngStream::new(seed).child("dynamics");
        }
        self.steps = 0;
        self.phase = Phase::Running;
        self.dynamics.reset(&mut self.rng)
    }

    fn step(&mut self, action: &Element) -> Result<StepOutcome, EnvError> {
        match self.phase {
            Phase::NeedsReset => {
                return Err(EnvError::Protocol("reset() must be called before step()".into()))
            }
            Phase::Finished => {
                return Err(EnvError::Protocol("episode is over; call reset()".into()))
            }
            Phase::Running => {}
        }
        let (action, clipped) = validate_action(&self.action_space, action)?;
        let mut t = self.dynamics.transition(&action, &mut self.rng);
        if clipped {
            t.info.insert("action_clipped".into(), 1.0);
        }
        self.steps += 1;
        let truncated = !t.terminated && self.steps >= self.max_steps;
        if truncated {
            t.reward += self.dynamics.truncation_reward();
        }
        if t.terminated || truncated {
            self.phase = Phase::Finished;
        }
        Ok(StepOutcome {
            observation: t.observation,
            reward: t.reward,
            terminated: t.terminated,
            truncated,
            info: t.info,
        })
    }

    fn elapsed_steps(&self) -> usize {
        self.steps
    }

    fn render(&self) -> String {
        self.dynamics.render()
    }
}

/// Countable actions must be contained in the space; real-valued actions
/// are clipped to the box bounds (the returned flag records clipping).
fn validate_action(space: &SpaceDescriptor, action: &Element) -> Result<(Element, bool), EnvError> {
    if let (SpaceDescriptor::Box { low, high, .. }, Element::Real(v)) = (space, action) {
        if v.len() != low.len() || v.iter().any(|x| x.is_nan()) {
            return Err(EnvError::InvalidAction(format!("{action} for box of {} components", low.len())));
        }
        let clipped: Vec<f64> = v
            .iter()
            .zip(low.iter().zip(high))
            .map(|(x, (l, h))| x.clamp(*l, *h))
            .collect();
        let changed = clipped != *v;
        return Ok((Element::Real(clipped), changed));
    }
    if space.contains(action) {
        Ok((action.clone(), false))
    } else {
        Err(EnvError::InvalidAction(format!("{action} is outside the action space")))
    }
}

impl Environment for Box<dyn Environment> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn observation_space(&self) -> &SpaceDescriptor {
        (**self).observation_space()
    }
    fn action_space(&self) -> &SpaceDescriptor {
        (**self).action_space()
    }
    fn max_steps(&self) -> usize {
        (**self).max_steps()
    }
    fn reward_range(&self) -> (f64, f64) {
        (**self).reward_range()
    }
    fn reset(&mut self, seed: Option<u64>) -> Element {
        (**self).reset(seed)
    }
    fn step(&mut self, action: &Element) -> Result<StepOutcome, EnvError> {
        (**self).step(action)
    }
    fn elapsed_steps(&self) -> usize {
        (**self).elapsed_steps()
    }
    fn render(&self) -> String {
        (**self).render()
    }
}
