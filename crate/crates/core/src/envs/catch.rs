//! Catch: state dimensionality.
//!
//! A ball falls one row per step from a random column; the paddle on the
//! bottom row moves left, stays, or moves right. The episode ends when the
//! ball reaches the paddle row, paying +1 for a catch and -1 otherwise.
//! The same internal state can be observed as a compact vector, a 0/1 grid,
//! or an RGB image.

use serde::{Deserialize, Serialize};

use crate::env::{Dynamics, EnvironmentHandle, Transition};
use crate::error::EnvError;
use crate::rng::RngStream;
use crate::space::{Element, SpaceDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservationType {
    /// `(ball_x, ball_y, paddle_x)`.
    Vectorised,
    /// Row-major `rows x columns` grid of 0/1.
    Grid,
    /// Row-major `rows x columns x 3` image, ball red and paddle blue.
    Rgb,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CatchConfig {
    pub rows: usize,
    pub columns: usize,
    pub observation_type: ObservationType,
}

impl Default for CatchConfig {
    fn default() -> Self {
        Self { rows: 7, columns: 7, observation_type: ObservationType::Vectorised }
    }
}

impl CatchConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        if self.rows < 3 || self.columns < 3 {
            return Err(EnvError::Parameter("catch needs rows, columns >= 3".into()));
        }
        Ok(())
    }
}

pub const BALL_RGB: [f64; 3] = [255.0, 0.0, 0.0];
pub const PADDLE_RGB: [f64; 3] = [0.0, 0.0, 255.0];

#[derive(Clone, Debug)]
pub struct Catch {
    config: CatchConfig,
    pub ball_x: usize,
    pub ball_y: usize,
    pub paddle_x: usize,
}

impl Catch {
    pub fn new(config: CatchConfig) -> Result<Self, EnvError> {
        config.validate()?;
        let paddle_x = config.columns / 2;
        Ok(Self { config, ball_x: 0, ball_y: 0, paddle_x })
    }

    pub fn config(&self) -> &CatchConfig {
        &self.config
    }

    pub fn paddle_row(&self) -> usize {
        self.config.rows - 1
    }

    pub fn render_as(&self, kind: ObservationType) -> Element {
        let (rows, cols) = (self.config.rows, self.config.columns);
        match kind {
            ObservationType::Vectorised => Element::MultiDiscrete(vec![self.ball_x, self.ball_y, self.paddle_x]),
            ObservationType::Grid => {
                let mut g = vec![0.0; rows * cols];
                g[self.ball_y * cols + self.ball_x] = 1.0;
                g[self.paddle_row() * cols + self.paddle_x] = 1.0;
                Element::Real(g)
            }
            ObservationType::Rgb => {
                let mut img = vec![0.0_f64; rows * cols * 3];
                let mut paint = |r: usize, c: usize, rgb: [f64; 3]| {
                    for (ch, v) in rgb.iter().enumerate() {
                        let px = &mut img[(r * cols + c) * 3 + ch];
                        *px = px.max(*v);
                    }
                };
                paint(self.ball_y, self.ball_x, BALL_RGB);
                paint(self.paddle_row(), self.paddle_x, PADDLE_RGB);
                Element::Real(img)
            }
        }
    }

    fn observe(&self) -> Element {
        self.render_as(self.config.observation_type)
    }

    /// `delta` in `{-1, 0, 1}`.
    pub fn step_delta(&mut self, delta: i64) -> Transition {
        let max_x = self.config.columns as i64 - 1;
        self.paddle_x = (self.paddle_x as i64 + delta).clamp(0, max_x) as usize;
        self.ball_y += 1;
        if self.ball_y == self.paddle_row() {
            let caught = self.ball_x == self.paddle_x;
            Transition::new(self.observe(), if caught { 1.0 } else { -1.0 }, true)
                .with_info("caught", if caught { 1.0 } else { 0.0 })
        } else {
            Transition::new(self.observe(), 0.0, false)
        }
    }
}

impl Dynamics for Catch {
    fn name(&self) -> &'static str {
        "catch"
    }

    fn observation_space(&self) -> SpaceDescriptor {
        let (rows, cols) = (self.config.rows, self.config.columns);
        match self.config.observation_type {
            ObservationType::Vectorised => SpaceDescriptor::MultiDiscrete { dims: vec![cols, rows, cols] },
            ObservationType::Grid => {
                SpaceDescriptor::uniform_box(0.0, 1.0, vec![rows, cols]).expect("valid box")
            }
            ObservationType::Rgb => {
                SpaceDescriptor::uniform_box(0.0, 255.0, vec![rows, cols, 3]).expect("valid box")
            }
        }
    }

    fn action_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: 3 }
    }

    fn default_max_steps(&self) -> usize {
        self.config.rows
    }

    fn reward_range(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }

    fn reset(&mut self, rng: &mut RngStream) -> Element {
        self.ball_x = rng.index(self.config.columns);
        self.ball_y = 0;
        self.paddle_x = self.config.columns / 2;
        self.observe()
    }

    fn transition(&mut self, action: &Element, _rng: &mut RngStream) -> Transition {
        self.step_delta(action.as_discrete().expect("validated discrete action") as i64 - 1)
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for r in 0..self.config.rows {
            for c in 0..self.config.columns {
                let ch = if r == self.ball_y && c == self.ball_x {
                    'o'
                } else if r == self.paddle_row() && c == self.paddle_x {
                    '='
                } else {
                    '.'
                };
                out.push(ch);
            }
            out.push('\n');
        }
        out
    }
}

pub fn make(config: CatchConfig, seed: u64) -> Result<EnvironmentHandle<Catch>, EnvError> {
    Ok(EnvironmentHandle::new(Catch::new(config)?, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Environment;

    #[test]
    fn paddle_starts_in_middle() {
        let mut env = make(CatchConfig::default(), 4).unwrap();
        match env.reset(None) {
            Element::MultiDiscrete(v) => {
                assert_eq!(v[2], 3);
                assert_eq!(v[1], 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn catch_and_miss() {
        let mut c = Catch::new(CatchConfig::default()).unwrap();
        c.ball_x = 3;
        c.ball_y = 5;
        let t = c.step_delta(0);
        assert!(t.terminated);
        assert_eq!(t.reward, 1.0);

        let mut c = Catch::new(CatchConfig::default()).unwrap();
        c.ball_x = 0;
        c.ball_y = 5;
        let t = c.step_delta(0);
        assert!(t.terminated);
        assert_eq!(t.reward, -1.0);
    }

    #[test]
    fn paddle_clamped_at_walls() {
        let mut c = Catch::new(CatchConfig::default()).unwrap();
        c.paddle_x = 0;
        c.step_delta(-1);
        assert_eq!(c.paddle_x, 0);
        c.paddle_x = 6;
        c.step_delta(1);
        assert_eq!(c.paddle_x, 6);
    }

    #[test]
    fn ball_falls_one_row_per_step() {
        let mut env = make(CatchConfig { rows: 9, columns: 5, ..Default::default() }, 1).unwrap();
        env.reset(None);
        for expected in 1..8 {
            env.step(&Element::Discrete(1)).unwrap();
            assert_eq!(env.dynamics().ball_y, expected);
        }
    }

    #[test]
    fn episode_length_is_rows_minus_one() {
        let mut env = make(CatchConfig::default(), 2).unwrap();
        env.reset(None);
        let mut n = 0;
        loop {
            n += 1;
            let out = env.step(&Element::Discrete(2)).unwrap();
            if out.done() {
                assert!(out.terminated && !out.truncated);
                break;
            }
        }
        assert_eq!(n, 6);
    }
}
