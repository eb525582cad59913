//! Boulder: sparse-reward exploration.
//!
//! The agent climbs a wall of height `H`. At every height exactly one of `N`
//! grips holds; any other grip drops the agent back to the bottom. Reaching
//! the top pays 1, every other transition pays 0. The correct grips are drawn
//! once per environment instance, so knowledge accumulates across episodes.

use serde::{Deserialize, Serialize};

use crate::env::{Dynamics, EnvironmentHandle, Transition};
use crate::error::EnvError;
use crate::rng::RngStream;
use crate::space::{Element, SpaceDescriptor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoulderConfig {
    pub height: usize,
    pub num_grips: usize,
    /// Defaults to `10 · N^min(H, 6)`.
    pub max_steps: Option<usize>,
}

impl Default for BoulderConfig {
    fn default() -> Self {
        Self { height: 10, num_grips: 3, max_steps: None }
    }
}

impl BoulderConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        if self.height < 1 {
            return Err(EnvError::Parameter("boulder height must be >= 1".into()));
        }
        if self.num_grips < 2 {
            return Err(EnvError::Parameter("boulder needs at least 2 grips".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Boulder {
    config: BoulderConfig,
    correct_grip: Vec<usize>,
    /// Current height, always `< H` while the episode runs.
    pub h: usize,
}

impl Boulder {
    /// The grip sequence is drawn from `layout_rng`.
    pub fn new(config: BoulderConfig, layout_rng: &mut RngStream) -> Result<Self, EnvError> {
        config.validate()?;
        let correct_grip = (0..config.height).map(|_| layout_rng.index(config.num_grips)).collect();
        Ok(Self { config, correct_grip, h: 0 })
    }

    pub fn with_grips(config: BoulderConfig, correct_grip: Vec<usize>) -> Result<Self, EnvError> {
        config.validate()?;
        if correct_grip.len() != config.height || correct_grip.iter().any(|&g| g >= config.num_grips) {
            return Err(EnvError::Parameter("grip sequence must have length H with entries < N".into()));
        }
        Ok(Self { config, correct_grip, h: 0 })
    }

    pub fn config(&self) -> &BoulderConfig {
        &self.config
    }

    pub fn correct_grips(&self) -> &[usize] {
        &self.correct_grip
    }

    /// Observation emitted on reaching the top; never a resting state.
    pub fn summit(&self) -> usize {
        self.config.height
    }

    pub fn step_grip(&mut self, grip: usize) -> Transition {
        if grip == self.correct_grip[self.h] {
            let next = self.h + 1;
            if next == self.config.height {
                self.h = 0;
                return Transition::new(Element::Discrete(next), 1.0, true);
            }
            self.h = next;
        } else {
            self.h = 0;
        }
        Transition::new(Element::Discrete(self.h), 0.0, false)
    }
}

impl Dynamics for Boulder {
    fn name(&self) -> &'static str {
        "boulder"
    }

    fn observation_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: self.config.height + 1 }
    }

    fn action_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: self.config.num_grips }
    }

    fn default_max_steps(&self) -> usize {
        self.config.max_steps.unwrap_or_else(|| {
            10usize.saturating_mul(self.config.num_grips.saturating_pow(self.config.height.min(6) as u32))
        })
    }

    fn reward_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn reset(&mut self, _rng: &mut RngStream) -> Element {
        self.h = 0;
        Element::Discrete(0)
    }

    fn transition(&mut self, action: &Element, _rng: &mut RngStream) -> Transition {
        self.step_grip(action.as_discrete().expect("validated discrete action"))
    }

    fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:>4} {}\n", "top", "=".repeat(self.config.num_grips * 2 + 1)));
        for level in (0..self.config.height).rev() {
            let mut row = format!("{level:>4} |");
            for _ in 0..self.config.num_grips {
                row.push(if level == self.h { 'o' } else { '.' });
                row.push('|');
            }
            if level == self.h {
                row.push_str("  <- you");
            }
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}

pub fn make(config: BoulderConfig, seed: u64) -> Result<EnvironmentHandle<Boulder>, EnvError> {
    let mut layout = RngStream::new(seed).child("layout");
    Ok(EnvironmentHandle::new(Boulder::new(config, &mut layout)?, seed))
}
