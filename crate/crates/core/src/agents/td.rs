//! Temporal-difference updates on a [`ValueTable`].

use super::value_table::ValueTable;
use crate::rng::RngStream;

/// With probability `epsilon` a uniform action, otherwise greedy with random tie-breaking.
pub fn epsilon_greedy(q: &ValueTable, s: u64, epsilon: f64, rng: &mut RngStream) -> usize {
    if epsilon > 0.0 && rng.uniform() < epsilon {
        rng.index(q.num_actions())
    } else {
        q.greedy(s, rng)
    }
}

fn bootstrap(terminated: bool, value: f64) -> f64 {
    if terminated {
        0.0
    } else {
        value
    }
}

/// Off-policy TD error using the greedy value of `s_next`.
pub fn q_learning_error(q: &ValueTable, s: u64, a: usize, r: f64, s_next: u64, terminated: bool, gamma: f64) -> f64 {
    r + gamma * bootstrap(terminated, q.max(s_next)) - q.get(s, a)
}

#[allow(clippy::too_many_arguments)]
pub fn q_learning_update(q: &mut ValueTable, s: u64, a: usize, r: f64, s_next: u64, terminated: bool, alpha: f64, gamma: f64) {
    let delta = q_learning_error(q, s, a, r, s_next, terminated, gamma);
    q.add(s, a, alpha * delta);
}

#[allow(clippy::too_many_arguments)]
pub fn sarsa_update(
    q: &mut ValueTable,
    s: u64,
    a: usize,
    r: f64,
    s_next: u64,
    a_next: usize,
    terminated: bool,
    alpha: f64,
    gamma: f64,
) {
    let target = r + gamma * bootstrap(terminated, q.get(s_next, a_next));
    let delta = target - q.get(s, a);
    q.add(s, a, alpha * delta);
}

/// Asymmetric TD step: positive errors scaled by `1 - kappa`, negative by `1 + kappa`.
pub fn risk_weighted_error(delta: f64, kappa: f64) -> f64 {
    (1.0 - kappa) * delta.max(0.0) + (1.0 + kappa) * delta.min(0.0)
}

#[allow(clippy::too_many_arguments)]
pub fn risk_sensitive_q_update(
    q: &mut ValueTable,
    s: u64,
    a: usize,
    r: f64,
    s_next: u64,
    terminated: bool,
    alpha: f64,
    gamma: f64,
    kappa: f64,
) {
    let delta = q_learning_error(q, s, a, r, s_next, terminated, gamma);
    q.add(s, a, alpha * risk_weighted_error(delta, kappa));
}

/// `r + beta / sqrt(n)` where `n` counts visits to the arrived-at state,
/// including the current one.
pub fn count_bonus_reward(r: f64, n: u64, beta: f64) -> f64 {
    if beta == 0.0 {
        return r;
    }
    r + beta / (n.max(1) as f64).sqrt()
}

/// One recorded step of an episode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub s: u64,
    pub a: usize,
    pub r: f64,
}

/// Batch n-step SARSA over a finished episode, updating in time order.
/// `n = None` is Monte Carlo. Targets never bootstrap past the end.
pub fn nstep_sarsa_episode_update(q: &mut ValueTable, trajectory: &[Step], n: Option<usize>, alpha: f64, gamma: f64) {
    let len = trajectory.len();
    for t in 0..len {
        let horizon = n.map_or(len - t, |n| n.min(len - t));
        let mut g = 0.0;
        let mut discount = 1.0;
        for step in &trajectory[t..t + horizon] {
            g += discount * step.r;
            discount *= gamma;
        }
        if t + horizon < len {
            let boot = trajectory[t + horizon];
            g += discount * q.get(boot.s, boot.a);
        }
        let cur = q.get(trajectory[t].s, trajectory[t].a);
        q.set(trajectory[t].s, trajectory[t].a, cur + alpha * (g - cur));
    }
}
