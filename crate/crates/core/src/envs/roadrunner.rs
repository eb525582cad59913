//! Roadrunner: on-policy versus off-policy credit assignment.
//!
//! A runner on cells `0..W` controls only its speed. Landing exactly on the
//! last cell `T = W - 1` ends the episode; overshooting it (falling off the
//! cliff) or braking below zero speed ends it with the penalty `R`. Every
//! step costs 1; event rewards add to the step cost.

use serde::{Deserialize, Serialize};

use crate::env::{Dynamics, EnvironmentHandle, Transition};
use crate::error::EnvError;
use crate::rng::RngStream;
use crate::space::{Element, SpaceDescriptor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoadrunnerConfig {
    pub width: usize,
    pub negative_reward: f64,
    pub max_speed: usize,
    /// Defaults to `10 · W`.
    pub max_steps: Option<usize>,
}

impl Default for RoadrunnerConfig {
    fn default() -> Self {
        Self { width: 10, negative_reward: -100.0, max_speed: 3, max_steps: None }
    }
}

impl RoadrunnerConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        if self.width < 2 {
            return Err(EnvError::Parameter("roadrunner width must be >= 2".into()));
        }
        if self.max_speed < 1 {
            return Err(EnvError::Parameter("roadrunner max_speed must be >= 1".into()));
        }
        if !self.negative_reward.is_finite() {
            return Err(EnvError::Parameter("roadrunner negative reward must be finite".into()));
        }
        Ok(())
    }
}

/// Speed change selected by each action index.
pub const SPEED_DELTAS: [i64; 3] = [-1, 0, 1];

#[derive(Clone, Debug)]
pub struct Roadrunner {
    config: RoadrunnerConfig,
    pub x: usize,
    pub dx: usize,
}

impl Roadrunner {
    pub fn new(config: RoadrunnerConfig) -> Result<Self, EnvError> {
        config.validate()?;
        Ok(Self { config, x: 0, dx: 0 })
    }

    pub fn config(&self) -> &RoadrunnerConfig {
        &self.config
    }

    pub fn target(&self) -> usize {
        self.config.width - 1
    }

    fn observe(&self) -> Element {
        Element::MultiDiscrete(vec![self.x, self.dx])
    }

    pub fn step_delta(&mut self, delta: i64) -> Transition {
        let penalty = self.config.negative_reward;
        let speed = self.dx as i64 + delta;
        if speed < 0 {
            self.dx = 0;
            return Transition::new(self.observe(), -1.0 + penalty, true).with_info("stalled", 1.0);
        }
        self.dx = (speed as usize).min(self.config.max_speed);
        let x = self.x + self.dx;
        let t = self.target();
        if x == t {
            self.x = t;
            Transition::new(self.observe(), -1.0 + 1.0, true).with_info("reached_target", 1.0)
        } else if x > t {
            self.x = t;
            Transition::new(self.observe(), -1.0 + penalty, true).with_info("fell", 1.0)
        } else {
            self.x = x;
            Transition::new(self.observe(), -1.0, false)
        }
    }
}

impl Dynamics for Roadrunner {
    fn name(&self) -> &'static str {
        "roadrunner"
    }

    fn observation_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::MultiDiscrete { dims: vec![self.config.width, self.config.max_speed + 1] }
    }

    fn action_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: 3 }
    }

    fn default_max_steps(&self) -> usize {
        self.config.max_steps.unwrap_or(10 * self.config.width)
    }

    fn reward_range(&self) -> (f64, f64) {
        (-1.0 + self.config.negative_reward.min(0.0), 0.0_f64.max(-1.0 + self.config.negative_reward))
    }

    fn reset(&mut self, _rng: &mut RngStream) -> Element {
        self.x = 0;
        self.dx = 0;
        self.observe()
    }

    fn transition(&mut self, action: &Element, _rng: &mut RngStream) -> Transition {
        self.step_delta(SPEED_DELTAS[action.as_discrete().expect("validated discrete action")])
    }

    fn render(&self) -> String {
        let mut track: Vec<char> = vec!['_'; self.config.width];
        track[self.target()] = 'T';
        track[self.x] = 'R';
        format!("{}|cliff\nspeed {}/{}", track.into_iter().collect::<String>(), self.dx, self.config.max_speed)
    }
}

pub fn make(config: RoadrunnerConfig, seed: u64) -> Result<EnvironmentHandle<Roadrunner>, EnvError> {
    Ok(EnvironmentHandle::new(Roadrunner::new(config)?, seed))
}
