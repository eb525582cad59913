//! MemoryCorridor: partial observability.
//!
//! The agent walks through corridors of doors. Corridor `L` has `L` steps
//! and at each step exactly one door is unlocked. The unlocked door at step
//! `d` is the `d`-th entry of a door sequence that grows by one random door
//! each time a corridor is finished. Only the last step of a corridor shows
//! which door to open; every other step shows the "no door marked" symbol.

use serde::{Deserialize, Serialize};

use crate::env::{Dynamics, EnvironmentHandle, Transition};
use crate::error::EnvError;
use crate::rng::RngStream;
use crate::space::{Element, SpaceDescriptor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MemoryCorridorConfig {
    pub num_doors: usize,
    pub max_steps: usize,
}

impl Default for MemoryCorridorConfig {
    fn default() -> Self {
        Self { num_doors: 3, max_steps: 1000 }
    }
}

impl MemoryCorridorConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        if self.num_doors < 2 {
            return Err(EnvError::Parameter("memory corridor needs at least 2 doors".into()));
        }
        if self.max_steps < 1 {
            return Err(EnvError::Parameter("max_steps must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct MemoryCorridor {
    config: MemoryCorridorConfig,
    door_sequence: Vec<usize>,
    /// 1-based position inside the current corridor.
    pub depth: usize,
}

impl MemoryCorridor {
    pub fn new(config: MemoryCorridorConfig) -> Result<Self, EnvError> {
        config.validate()?;
        Ok(Self { config, door_sequence: vec![0], depth: 1 })
    }

    pub fn config(&self) -> &MemoryCorridorConfig {
        &self.config
    }

    pub fn door_sequence(&self) -> &[usize] {
        &self.door_sequence
    }

    pub fn corridor_length(&self) -> usize {
        self.door_sequence.len()
    }

    pub fn no_door_marked(&self) -> usize {
        self.config.num_doors
    }

    pub fn observe(&self) -> usize {
        if self.depth == self.corridor_length() {
            self.door_sequence[self.depth - 1]
        } else {
            self.no_door_marked()
        }
    }

    pub fn open(&mut self, door: usize, rng: &mut RngStream) -> Transition {
        if door != self.door_sequence[self.depth - 1] {
            return Transition::new(Element::Discrete(self.observe()), 0.0, true);
        }
        if self.depth < self.corridor_length() {
            self.depth += 1;
        } else {
            self.door_sequence.push(rng.index(self.config.num_doors));
            self.depth = 1;
        }
        Transition::new(Element::Discrete(self.observe()), 1.0, false)
    }
}

impl Dynamics for MemoryCorridor {
    fn name(&self) -> &'static str {
        "memory_corridor"
    }

    fn observation_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: self.config.num_doors + 1 }
    }

    fn action_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: self.config.num_doors }
    }

    fn default_max_steps(&self) -> usize {
        self.config.max_steps
    }

    fn reward_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn reset(&mut self, rng: &mut RngStream) -> Element {
        self.door_sequence = vec![rng.index(self.config.num_doors)];
        self.depth = 1;
        Element::Discrete(self.observe())
    }

    fn transition(&mut self, action: &Element, rng: &mut RngStream) -> Transition {
        self.open(action.as_discrete().expect("validated discrete action"), rng)
    }

    fn render(&self) -> String {
        let shown = self.observe();
        let doors: String = (0..self.config.num_doors)
            .map(|i| if i == shown { "[*]" } else { "[ ]" })
            .collect::<Vec<_>>()
            .join(" ");
        format!(
            "corridor {} step {}/{}\n{}",
            self.corridor_length(),
            self.depth,
            self.corridor_length(),
            doors
        )
    }
}

pub fn make(config: MemoryCorridorConfig, seed: u64) -> Result<EnvironmentHandle<MemoryCorridor>, EnvError> {
    Ok(EnvironmentHandle::new(MemoryCorridor::new(config)?, seed))
}
