//! Golf: stochastic dynamics.
//!
//! The ball starts at the bottom centre of the course and every swing sends
//! it straight at the flag. A Gaussian deflection perpendicular to the shot
//! has standard deviation `c · d²`, so long shots are much less reliable.

use serde::{Deserialize, Serialize};

use crate::env::{Dynamics, EnvironmentHandle, Transition};
use crate::error::EnvError;
use crate::rng::RngStream;
use crate::space::{Element, SpaceDescriptor};

pub const SWINGS: [&str; 3] = ["putt", "chip", "drive"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GolfConfig {
    pub width: usize,
    pub length: usize,
    pub stochasticity_level: f64,
    pub max_hits: usize,
    pub swing_distances: [f64; 3],
    pub green_radius: f64,
}

impl Default for GolfConfig {
    fn default() -> Self {
        Self {
            width: 20,
            length: 40,
            stochasticity_level: 0.1,
            max_hits: 10,
            swing_distances: [1.0, 3.0, 8.0],
            green_radius: 1.0,
        }
    }
}

impl GolfConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        if self.width < 3 || self.length < 3 {
            return Err(EnvError::Parameter("golf course must be at least 3x3".into()));
        }
        if !(self.stochasticity_level >= 0.0) || !self.stochasticity_level.is_finite() {
            return Err(EnvError::Parameter("stochasticity_level must be finite and >= 0".into()));
        }
        if self.max_hits < 1 {
            return Err(EnvError::Parameter("max_hits must be >= 1".into()));
        }
        if self.swing_distances.iter().any(|d| !(*d > 0.0)) || !(self.green_radius >= 0.0) {
            return Err(EnvError::Parameter("swing distances must be > 0 and green radius >= 0".into()));
        }
        Ok(())
    }

    pub fn flag(&self) -> (usize, usize) {
        (self.width / 2, self.length - 1)
    }

    /// Standard deviation of the transverse deflection for a swing.
    pub fn deflection_std(&self, swing: usize) -> f64 {
        self.stochasticity_level * self.swing_distances[swing].powi(2)
    }

    pub fn green_reward(&self, hits_used: usize) -> f64 {
        (self.max_hits - hits_used + 1) as f64 / self.max_hits as f64
    }
}

#[derive(Clone, Debug)]
pub struct Golf {
    config: GolfConfig,
    pub x: usize,
    pub y: usize,
    pub hits: usize,
}

impl Golf {
    pub fn new(config: GolfConfig) -> Result<Self, EnvError> {
        config.validate()?;
        let x = config.width / 2;
        Ok(Self { config, x, y: 0, hits: 0 })
    }

    pub fn config(&self) -> &GolfConfig {
        &self.config
    }

    fn observe(&self) -> Element {
        Element::MultiDiscrete(vec![self.x, self.y])
    }

    fn distance_to_flag(&self, x: f64, y: f64) -> f64 {
        let (fx, fy) = self.config.flag();
        ((x - fx as f64).powi(2) + (y - fy as f64).powi(2)).sqrt()
    }

    /// Plays a swing with a given deflection already drawn.
    pub fn swing_with(&mut self, swing: usize, deflection: f64) -> Transition {
        self.hits += 1;
        let (fx, fy) = self.config.flag();
        let (dx, dy) = (fx as f64 - self.x as f64, fy as f64 - self.y as f64);
        let norm = (dx * dx + dy * dy).sqrt();
        let (ux, uy) = if norm > 0.0 { (dx / norm, dy / norm) } else { (0.0, 1.0) };
        let d = self.config.swing_distances[swing];
        let nx = self.x as f64 + d * ux - deflection * uy;
        let ny = self.y as f64 + d * uy + deflection * ux;
        let (rx, ry) = (nx.round(), ny.round());
        let off = rx < 0.0 || ry < 0.0 || rx >= self.config.width as f64 || ry >= self.config.length as f64;
        if off {
            return Transition::new(self.observe(), -1.0, true)
                .with_info("deflection", deflection)
                .with_info("off_course", 1.0);
        }
        self.x = rx as usize;
        self.y = ry as usize;
        let t = if self.distance_to_flag(rx, ry) <= self.config.green_radius {
            Transition::new(self.observe(), self.config.green_reward(self.hits), true).with_info("green", 1.0)
        } else if self.hits >= self.config.max_hits {
            Transition::new(self.observe(), -1.0, true)
        } else {
            Transition::new(self.observe(), 0.0, false)
        };
        t.with_info("deflection", deflection)
    }
}

impl Dynamics for Golf {
    fn name(&self) -> &'static str {
        "golf"
    }

    fn observation_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::MultiDiscrete { dims: vec![self.config.width, self.config.length] }
    }

    fn action_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: 3 }
    }

    fn default_max_steps(&self) -> usize {
        self.config.max_hits + 1
    }

    fn reward_range(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }

    fn reset(&mut self, _rng: &mut RngStream) -> Element {
        self.x = self.config.width / 2;
        self.y = 0;
        self.hits = 0;
        self.observe()
    }

    fn transition(&mut self, action: &Element, rng: &mut RngStream) -> Transition {
        let swing = action.as_discrete().expect("validated discrete action");
        let deflection = rng.normal(0.0, self.config.deflection_std(swing));
        self.swing_with(swing, deflection)
    }

    fn render(&self) -> String {
        let (fx, fy) = self.config.flag();
        let mut out = String::new();
        for y in (0..self.config.length).rev() {
            for x in 0..self.config.width {
                let green = self.distance_to_flag(x as f64, y as f64) <= self.config.green_radius;
                out.push(if (x, y) == (self.x, self.y) {
                    'o'
                } else if (x, y) == (fx, fy) {
                    'F'
                } else if green {
                    '"'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out.push_str(&format!("hits {}/{}", self.hits, self.config.max_hits));
        out
    }
}

pub fn make(config: GolfConfig, seed: u64) -> Result<EnvironmentHandle<Golf>, EnvError> {
    Ok(EnvironmentHandle::new(Golf::new(config)?, seed))
}
