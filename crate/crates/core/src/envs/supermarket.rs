//! Supermarket: model-based planning.
//!
//! A shopper walks a fixed floor plan collecting three items before leaving
//! through the exit. Every step costs 1, each new item pays 25 and leaving
//! pays 50. Stepping can be made slow with `step_timeout`, while the built-in
//! model answers instantly, optionally with Gaussian noise on its rewards.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::env::{Dynamics, EnvironmentHandle, Transition};
use crate::error::EnvError;
use crate::model::{DescriptiveModel, Outcome};
use crate::rng::RngStream;
use crate::space::{Element, SpaceDescriptor};

pub const DEFAULT_MAP: &str = include_str!("../../data/supermarket.txt");
pub const STEP_REWARD: f64 = -1.0;
pub const ITEM_REWARD: f64 = 25.0;
pub const EXIT_REWARD: f64 = 50.0;
pub const NUM_ITEMS: usize = 3;
pub const ACTIONS: [&str; 4] = ["up", "down", "left", "right"];
const MOVES: [(i64, i64); 4] = [(0, -1), (0, 1), (-1, 0), (1, 0)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SupermarketConfig {
    /// Seconds each `step` blocks for.
    pub step_timeout: f64,
    /// Standard deviation of the noise added to model rewards.
    pub noise: f64,
    pub max_steps: usize,
}

impl Default for SupermarketConfig {
    fn default() -> Self {
        Self { step_timeout: 0.0, noise: 0.0, max_steps: 1000 }
    }
}

impl SupermarketConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        if !(self.step_timeout >= 0.0) || !self.step_timeout.is_finite() {
            return Err(EnvError::Parameter("step_timeout must be finite and >= 0".into()));
        }
        if !(self.noise >= 0.0) || !self.noise.is_finite() {
            return Err(EnvError::Parameter("model noise must be finite and >= 0".into()));
        }
        if self.max_steps < 1 {
            return Err(EnvError::Parameter("max_steps must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloorPlan {
    pub width: usize,
    pub height: usize,
    walls: Vec<bool>,
    pub items: [usize; NUM_ITEMS],
    pub start: usize,
    pub exit: usize,
}

impl FloorPlan {
    /// `#` wall, `.` floor, `1`-`3` items, `S` start, `E` exit.
    pub fn parse(text: &str) -> Result<Self, EnvError> {
        let rows: Vec<&str> = text.lines().map(str::trim_end).filter(|l| !l.is_empty()).collect();
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let bad = |m: String| Err(EnvError::Parameter(format!("floor plan: {m}")));
        if height == 0 || width == 0 {
            return bad("empty map".into());
        }
        if width * height > 100 {
            return bad("at most 100 cells are supported".into());
        }
        let mut walls = vec![false; width * height];
        let mut items = [usize::MAX; NUM_ITEMS];
        let (mut start, mut exit) = (None, None);
        for (y, row) in rows.iter().enumerate() {
            if row.chars().count() != width {
                return bad(format!("row {y} has a different width"));
            }
            for (x, ch) in row.chars().enumerate() {
                let i = y * width + x;
                match ch {
                    '#' => walls[i] = true,
                    '.' => {}
                    'S' => start = Some(i),
                    'E' => exit = Some(i),
                    '1'..='3' => items[ch as usize - '1' as usize] = i,
                    other => return bad(format!("unknown cell '{other}' at ({x}, {y})")),
                }
            }
        }
        if items.contains(&usize::MAX) {
            return bad("items 1, 2 and 3 must all appear".into());
        }
        match (start, exit) {
            (Some(start), Some(exit)) => Ok(Self { width, height, walls, items, start, exit }),
            _ => bad("needs both S and E".into()),
        }
    }

    pub fn cells(&self) -> usize {
        self.width * self.height
    }

    pub fn is_wall(&self, cell: usize) -> bool {
        self.walls[cell]
    }

    pub fn item_at(&self, cell: usize) -> Option<usize> {
        self.items.iter().position(|&c| c == cell)
    }

    /// Cell reached by a move, staying put at walls and edges.
    pub fn neighbour(&self, cell: usize, action: usize) -> usize {
        let (x, y) = ((cell % self.width) as i64, (cell / self.width) as i64);
        let (dx, dy) = MOVES[action];
        let (nx, ny) = (x + dx, y + dy);
        if nx < 0 || ny < 0 || nx >= self.width as i64 || ny >= self.height as i64 {
            return cell;
        }
        let next = ny as usize * self.width + nx as usize;
        if self.walls[next] {
            cell
        } else {
            next
        }
    }
}

/// Shopper position plus item flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShopState {
    pub cell: usize,
    /// Bit `i` set once item `i + 1` is collected.
    pub collected: u8,
}

impl ShopState {
    pub fn id(&self) -> usize {
        self.cell + 100 * self.collected as usize
    }

    pub fn from_id(id: usize) -> Self {
        Self { cell: id % 100, collected: (id / 100) as u8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelMode {
    Descriptive,
    Generative,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelOutput {
    Distribution(Vec<Outcome>),
    Sample(Outcome),
}

#[derive(Clone, Debug)]
pub struct Supermarket {
    config: SupermarketConfig,
    plan: FloorPlan,
    pub state: ShopState,
}

impl Supermarket {
    pub fn new(config: SupermarketConfig) -> Result<Self, EnvError> {
        Self::with_plan(config, FloorPlan::parse(DEFAULT_MAP)?)
    }

    pub fn with_plan(config: SupermarketConfig, plan: FloorPlan) -> Result<Self, EnvError> {
        config.validate()?;
        let state = ShopState { cell: plan.start, collected: 0 };
        Ok(Self { config, plan, state })
    }

    pub fn config(&self) -> &SupermarketConfig {
        &self.config
    }

    pub fn plan(&self) -> &FloorPlan {
        &self.plan
    }

    /// Noise-free transition from any state.
    pub fn next(&self, state: ShopState, action: usize) -> (ShopState, f64, bool) {
        let cell = self.plan.neighbour(state.cell, action);
        let mut collected = state.collected;
        let mut reward = STEP_REWARD;
        if let Some(i) = self.plan.item_at(cell) {
            if collected & (1 << i) == 0 {
                collected |= 1 << i;
                reward += ITEM_REWARD;
            }
        }
        let done = cell == self.plan.exit;
        if done {
            reward += EXIT_REWARD;
        }
        (ShopState { cell, collected }, reward, done)
    }

    /// Query the built-in model. Never blocks.
    pub fn model(&self, state_id: usize, action: usize, mode: ModelMode, rng: &mut RngStream) -> Result<ModelOutput, EnvError> {
        match mode {
            ModelMode::Descriptive => self.describe(state_id, action, rng).map(ModelOutput::Distribution),
            ModelMode::Generative => self.sample(state_id, action, rng).map(ModelOutput::Sample),
        }
    }
}

impl DescriptiveModel for Supermarket {
    fn num_states(&self) -> usize {
        100 << NUM_ITEMS
    }

    fn num_actions(&self) -> usize {
        ACTIONS.len()
    }

    /// Walkable, not the exit, and not standing on an item that is still uncollected.
    fn is_valid_state(&self, id: usize) -> bool {
        if id >= self.num_states() {
            return false;
        }
        let s = ShopState::from_id(id);
        if s.cell >= self.plan.cells() || self.plan.is_wall(s.cell) || s.cell == self.plan.exit {
            return false;
        }
        match self.plan.item_at(s.cell) {
            Some(i) => s.collected & (1 << i) != 0,
            None => true,
        }
    }

    fn initial_state(&self) -> usize {
        ShopState { cell: self.plan.start, collected: 0 }.id()
    }

    fn describe(&self, id: usize, action: usize, rng: &mut RngStream) -> Result<Vec<Outcome>, EnvError> {
        if !self.is_valid_state(id) {
            return Err(EnvError::InvalidState(format!("supermarket state {id} is not reachable")));
        }
        if action >= ACTIONS.len() {
            return Err(EnvError::InvalidAction(format!("supermarket action {action}")));
        }
        let (next, reward, terminal) = self.next(ShopState::from_id(id), action);
        let noise = if self.config.noise > 0.0 { rng.normal(0.0, self.config.noise) } else { 0.0 };
        Ok(vec![Outcome { next_state: next.id(), probability: 1.0, reward: reward + noise, terminal }])
    }
}

impl Dynamics for Supermarket {
    fn name(&self) -> &'static str {
        "supermarket"
    }

    fn observation_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: 800 }
    }

    fn action_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: ACTIONS.len() }
    }

    fn default_max_steps(&self) -> usize {
        self.config.max_steps
    }

    fn reward_range(&self) -> (f64, f64) {
        (STEP_REWARD, STEP_REWARD + ITEM_REWARD + EXIT_REWARD)
    }

    fn reset(&mut self, _rng: &mut RngStream) -> Element {
        self.state = ShopState { cell: self.plan.start, collected: 0 };
        Element::Discrete(self.state.id())
    }

    fn transition(&mut self, action: &Element, _rng: &mut RngStream) -> Transition {
        if self.config.step_timeout > 0.0 {
            std::thread::sleep(Duration::from_secs_f64(self.config.step_timeout));
        }
        let before = self.state.collected;
        let (next, reward, done) = self.next(self.state, action.as_discrete().expect("validated discrete action"));
        self.state = next;
        let t = Transition::new(Element::Discrete(next.id()), reward, done);
        if next.collected != before {
            t.with_info("items", next.collected.count_ones() as f64)
        } else {
            t
        }
    }

    fn render(&self) -> String {
        let p = &self.plan;
        let mut out = String::new();
        for y in 0..p.height {
            for x in 0..p.width {
                let c = y * p.width + x;
                out.push(if c == self.state.cell {
                    '@'
                } else if p.is_wall(c) {
                    '#'
                } else if c == p.exit {
                    'E'
                } else if let Some(i) = p.item_at(c) {
                    if self.state.collected & (1 << i) == 0 {
                        char::from(b'1' + i as u8)
                    } else {
                        '.'
                    }
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out.push_str(&format!("items {}/{}", self.state.collected.count_ones(), NUM_ITEMS));
        out
    }
}

pub fn make(config: SupermarketConfig, seed: u64) -> Result<EnvironmentHandle<Supermarket>, EnvError> {
    Ok(EnvironmentHandle::new(Supermarket::new(config)?, seed))
}
