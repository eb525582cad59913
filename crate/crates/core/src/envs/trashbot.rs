//! Trashbot: discrete versus continuous control.
//!
//! A planar two-link arm (unit links, base at the origin) carries a magnet at
//! its tip. Sweeping the magnet past the red box picks it up; bringing the
//! held box inside the green container drops it, paying more the closer the
//! drop lands to the container centre. Touching the floor or the container
//! walls with the arm or the held box ends the episode.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::env::{Dynamics, EnvironmentHandle, Transition};
use crate::error::EnvError;
use crate::rng::RngStream;
use crate::space::{Element, SpaceDescriptor};

pub const LINK: f64 = 1.0;
pub const FLOOR_Y: f64 = -1.2;
pub const BOX_HALF: f64 = 0.05;
pub const BOX_START: (f64, f64) = (0.15, FLOOR_Y + BOX_HALF);
pub const PICKUP_RADIUS: f64 = 0.1;
pub const CONTAINER_X: f64 = -1.7;
pub const WALL_HEIGHT: f64 = 0.5;
pub const INITIAL_ANGLES: (f64, f64) = (PI / 2.0, 0.0);
pub const STEP_LIMIT: usize = 150;
pub const ALLOWED_BINS: [usize; 5] = [3, 5, 7, 9, 11];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionMode {
    Continuous,
    Discrete,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrashbotConfig {
    pub action_mode: ActionMode,
    pub num_bins: usize,
    pub container_width: f64,
}

impl Default for TrashbotConfig {
    fn default() -> Self {
        Self { action_mode: ActionMode::Continuous, num_bins: 5, container_width: 0.6 }
    }
}

impl TrashbotConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        if !ALLOWED_BINS.contains(&self.num_bins) {
            return Err(EnvError::Parameter(format!("num_bins must be one of {ALLOWED_BINS:?}")));
        }
        if !(self.container_width > 2.0 * BOX_HALF) || self.container_width > 1.0 {
            return Err(EnvError::Parameter("container_width must lie in (0.1, 1.0]".into()));
        }
        Ok(())
    }

    /// Angle change for a bin index: a uniform grid over `[-1, 1]`.
    pub fn bin_value(&self, i: usize) -> f64 {
        -1.0 + 2.0 * i as f64 / (self.num_bins - 1) as f64
    }
}

type Point = (f64, f64);

pub fn wrap_angle(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

/// Elbow and magnet positions.
pub fn forward_kinematics(theta1: f64, theta2: f64) -> (Point, Point) {
    let p1 = (LINK * theta1.cos(), LINK * theta1.sin());
    let p2 = (p1.0 + LINK * (theta1 + theta2).cos(), p1.1 + LINK * (theta1 + theta2).sin());
    (p1, p2)
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: Point, b: Point, c: Point) -> bool {
    c.0 >= a.0.min(b.0) && c.0 <= a.0.max(b.0) && c.1 >= a.1.min(b.1) && c.1 <= a.1.max(b.1)
}

pub fn segments_intersect(p: Point, q: Point, r: Point, s: Point) -> bool {
    let d1 = orient(r, s, p);
    let d2 = orient(r, s, q);
    let d3 = orient(p, q, r);
    let d4 = orient(p, q, s);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return true;
    }
    (d1 == 0.0 && on_segment(r, s, p))
        || (d2 == 0.0 && on_segment(r, s, q))
        || (d3 == 0.0 && on_segment(p, q, r))
        || (d4 == 0.0 && on_segment(p, q, s))
}

pub fn point_segment_distance(a: Point, b: Point, p: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    ((a.0 + t * dx - p.0).powi(2) + (a.1 + t * dy - p.1).powi(2)).sqrt()
}

#[derive(Clone, Debug)]
pub struct Trashbot {
    config: TrashbotConfig,
    pub theta1: f64,
    pub theta2: f64,
    pub holding: bool,
}

impl Trashbot {
    pub fn new(config: TrashbotConfig) -> Result<Self, EnvError> {
        config.validate()?;
        Ok(Self { config, theta1: INITIAL_ANGLES.0, theta2: INITIAL_ANGLES.1, holding: false })
    }

    pub fn config(&self) -> &TrashbotConfig {
        &self.config
    }

    fn walls(&self) -> [(Point, Point); 2] {
        let half = self.config.container_width / 2.0;
        [
            ((CONTAINER_X - half, FLOOR_Y), (CONTAINER_X - half, FLOOR_Y + WALL_HEIGHT)),
            ((CONTAINER_X + half, FLOOR_Y), (CONTAINER_X + half, FLOOR_Y + WALL_HEIGHT)),
        ]
    }

    pub fn magnet(&self) -> Point {
        forward_kinematics(self.theta1, self.theta2).1
    }

    fn collides(&self) -> bool {
        let (p1, p2) = forward_kinematics(self.theta1, self.theta2);
        let walls = self.walls();
        for (a, b) in [((0.0, 0.0), p1), (p1, p2)] {
            if a.1.min(b.1) <= FLOOR_Y || walls.iter().any(|&(r, s)| segments_intersect(a, b, r, s)) {
                return true;
            }
        }
        if self.holding {
            let (x, y) = p2;
            if y - BOX_HALF <= FLOOR_Y {
                return true;
            }
            let hits_wall = walls.iter().any(|&((wx, y0), (_, y1))| {
                (x - BOX_HALF..=x + BOX_HALF).contains(&wx) && y - BOX_HALF <= y1 && y + BOX_HALF >= y0
            });
            if hits_wall {
                return true;
            }
        }
        false
    }

    fn in_container(&self, p: Point) -> bool {
        let half = self.config.container_width / 2.0;
        (p.0 - CONTAINER_X).abs() < half && p.1 > FLOOR_Y && p.1 < FLOOR_Y + WALL_HEIGHT
    }

    /// Drop payout for a box released at horizontal position `x`.
    pub fn drop_reward(&self, x: f64) -> f64 {
        2.0 + 2.0 * (1.0 - (x - CONTAINER_X).abs() / (self.config.container_width / 2.0))
    }

    pub fn observe(&self) -> Element {
        let (p1, p2) = forward_kinematics(self.theta1, self.theta2);
        Element::Real(vec![p1.0, p1.1, p2.0, p2.1, p2.0, p2.1, if self.holding { 1.0 } else { 0.0 }])
    }

    /// Applies angle changes already in `[-1, 1]`.
    pub fn move_joints(&mut self, d1: f64, d2: f64) -> Transition {
        let before = self.magnet();
        self.theta1 = wrap_angle(self.theta1 + d1);
        self.theta2 = wrap_angle(self.theta2 + d2);
        if self.collides() {
            return Transition::new(self.observe(), -2.0, true).with_info("collision", 1.0);
        }
        let mut reward = 0.0;
        let after = self.magnet();
        let mut info = None;
        if !self.holding && point_segment_distance(before, after, BOX_START) <= PICKUP_RADIUS {
            self.holding = true;
            reward += 1.0;
            info = Some(("pickup", 1.0));
        }
        if self.holding && self.in_container(after) {
            let drop = self.drop_reward(after.0);
            return Transition::new(self.observe(), reward + drop, true).with_info("drop_reward", drop);
        }
        let t = Transition::new(self.observe(), reward, false);
        match info {
            Some((k, v)) => t.with_info(k, v),
            None => t,
        }
    }
}

impl Dynamics for Trashbot {
    fn name(&self) -> &'static str {
        "trashbot"
    }

    fn observation_space(&self) -> SpaceDescriptor {
        let r = 2.0 * LINK;
        SpaceDescriptor::bounded_box(
            vec![-LINK, -LINK, -r, -r, -r, -r, 0.0],
            vec![LINK, LINK, r, r, r, r, 1.0],
            vec![7],
        )
        .expect("valid box")
    }

    fn action_space(&self) -> SpaceDescriptor {
        match self.config.action_mode {
            ActionMode::Continuous => SpaceDescriptor::uniform_box(-1.0, 1.0, vec![2]).expect("valid box"),
            ActionMode::Discrete => SpaceDescriptor::MultiDiscrete { dims: vec![self.config.num_bins; 2] },
        }
    }

    fn default_max_steps(&self) -> usize {
        STEP_LIMIT
    }

    fn reward_range(&self) -> (f64, f64) {
        (-2.0, 5.0)
    }

    fn truncation_reward(&self) -> f64 {
        -1.0
    }

    fn reset(&mut self, _rng: &mut RngStream) -> Element {
        self.theta1 = INITIAL_ANGLES.0;
        self.theta2 = INITIAL_ANGLES.1;
        self.holding = false;
        self.observe()
    }

    fn transition(&mut self, action: &Element, _rng: &mut RngStream) -> Transition {
        let (d1, d2) = match action {
            Element::Real(v) => (v[0], v[1]),
            Element::MultiDiscrete(v) => (self.config.bin_value(v[0]), self.config.bin_value(v[1])),
            other => unreachable!("validated action {other:?}"),
        };
        self.move_joints(d1, d2)
    }

    fn render(&self) -> String {
        const COLS: usize = 41;
        const ROWS: usize = 17;
        let to_cell = |p: Point| -> Option<(usize, usize)> {
            let c = ((p.0 + 2.0) / 4.0 * (COLS - 1) as f64).round();
            let r = ((2.0 - p.1) / 3.4 * (ROWS - 1) as f64).round();
            (c >= 0.0 && r >= 0.0 && (c as usize) < COLS && (r as usize) < ROWS).then_some((r as usize, c as usize))
        };
        let mut grid = vec![vec![' '; COLS]; ROWS];
        if let Some((r, _)) = to_cell((0.0, FLOOR_Y)) {
            grid[r].iter_mut().for_each(|c| *c = '_');
        }
        let draw = |grid: &mut Vec<Vec<char>>, a: Point, b: Point, ch: char| {
            for i in 0..=20 {
                let t = i as f64 / 20.0;
                if let Some((r, c)) = to_cell((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))) {
                    grid[r][c] = ch;
                }
            }
        };
        for (a, b) in self.walls() {
            draw(&mut grid, a, b, '#');
        }
        let (p1, p2) = forward_kinematics(self.theta1, self.theta2);
        draw(&mut grid, (0.0, 0.0), p1, '*');
        draw(&mut grid, p1, p2, '*');
        if !self.holding {
            if let Some((r, c)) = to_cell(BOX_START) {
                grid[r][c] = 'B';
            }
        }
        if let Some((r, c)) = to_cell(p2) {
            grid[r][c] = if self.holding { 'B' } else { 'M' };
        }
        let mut out: String = grid.into_iter().map(|row| row.into_iter().collect::<String>() + "\n").collect();
        out.push_str(&format!("angles ({:+.2}, {:+.2})  holding {}", self.theta1, self.theta2, self.holding));
        out
    }
}

pub fn make(config: TrashbotConfig, seed: u64) -> Result<EnvironmentHandle<Trashbot>, EnvError> {
    Ok(EnvironmentHandle::new(Trashbot::new(config)?, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Environment;

    #[test]
    fn zero_pose_kinematics() {
        let (p1, p2) = forward_kinematics(0.0, 0.0);
        assert_eq!(p1, (1.0, 0.0));
        assert_eq!(p2, (2.0, 0.0));
    }

    #[test]
    fn three_bins_are_unit_steps() {
        let cfg = TrashbotConfig { num_bins: 3, ..Default::default() };
        assert_eq!((0..3).map(|i| cfg.bin_value(i)).collect::<Vec<_>>(), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn centre_drop_pays_four() {
        let t = Trashbot::new(TrashbotConfig::default()).unwrap();
        assert_eq!(t.drop_reward(CONTAINER_X), 4.0);
        assert!((t.drop_reward(CONTAINER_X + 0.3) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn intersection_cases() {
        assert!(segments_intersect((0.0, 0.0), (1.0, 1.0), (0.0, 1.0), (1.0, 0.0)));
        assert!(!segments_intersect((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)));
        assert!(segments_intersect((0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 1.0)));
    }

    #[test]
    fn known_lattice_route_drops_the_box() {
        let mut env = make(TrashbotConfig { action_mode: ActionMode::Discrete, num_bins: 3, ..Default::default() }, 0).unwrap();
        env.reset(None);
        let route = [[0, 0], [0, 0], [2, 0], [2, 2], [2, 2], [2, 2]];
        let mut total = 0.0;
        let mut last = None;
        for a in route {
            let out = env.step(&Element::MultiDiscrete(a.to_vec())).unwrap();
            total += out.reward;
            last = Some(out);
        }
        let last = last.unwrap();
        assert!(last.terminated);
        let drop = last.info["drop_reward"];
        assert!(drop > 3.0 && drop < 4.0);
        assert!((total - 1.0 - drop).abs() < 1e-12);
    }

    #[test]
    fn swinging_into_the_floor_collides() {
        let mut t = Trashbot::new(TrashbotConfig::default()).unwrap();
        t.theta1 = -PI / 2.0 + 0.3;
        t.theta2 = 0.0;
        let out = t.move_joints(-0.3, 0.0);
        assert!(out.terminated);
        assert_eq!(out.reward, -2.0);
    }

    #[test]
    fn step_limit_truncates_with_penalty() {
        let mut env = make(TrashbotConfig::default(), 0).unwrap();
        env.reset(None);
        let mut last = None;
        for _ in 0..STEP_LIMIT {
            last = Some(env.step(&Element::Real(vec![0.0, 0.0])).unwrap());
        }
        let last = last.unwrap();
        assert!(last.truncated && !last.terminated);
        assert_eq!(last.reward, -1.0);
    }

    #[test]
    fn out_of_range_actions_are_clipped() {
        let mut env = make(TrashbotConfig::default(), 0).unwrap();
        env.reset(None);
        let out = env.step(&Element::Real(vec![0.0, 5.0])).unwrap();
        assert_eq!(out.info.get("action_clipped"), Some(&1.0));
        assert!((env.dynamics().theta2 - 1.0).abs() < 1e-12);
    }
}
