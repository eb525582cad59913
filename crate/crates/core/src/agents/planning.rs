//! Model-based updates: Dyna, Prioritised Sweeping and value iteration.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use super::tabular_model::TabularModel;
use super::td::q_learning_update;
use super::value_table::ValueTable;
use crate::error::AgentError;
use crate::model::DescriptiveModel;
use crate::rng::RngStream;

/// `budget` simulated Q-learning backups on uniformly chosen visited pairs.
/// Returns the number of model queries made.
pub fn dyna_planning(
    q: &mut ValueTable,
    model: &TabularModel,
    budget: usize,
    alpha: f64,
    gamma: f64,
    rng: &mut RngStream,
) -> Result<usize, AgentError> {
    let mut calls = 0;
    for _ in 0..budget {
        let Some((s, a)) = model.sample_visited(rng) else { break };
        let p = model.sample(s, a, rng)?;
        calls += 1;
        q_learning_update(q, s, a, p.reward, p.next, p.terminal, alpha, gamma);
    }
    Ok(calls)
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    priority: f64,
    seq: u64,
    s: u64,
    a: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    /// Highest priority first, older entries first among equals.
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Max-priority queue of state-action pairs. Pushing a pair already queued
/// with a lower priority replaces it; stale heap entries are skipped on pop.
#[derive(Clone, Debug, Default)]
pub struct PriorityQueue {
    heap: BinaryHeap<Entry>,
    current: HashMap<(u64, usize), f64>,
    seq: u64,
}

impl PriorityQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    pub fn priority(&self, s: u64, a: usize) -> Option<f64> {
        self.current.get(&(s, a)).copied()
    }

    pub fn push(&mut self, s: u64, a: usize, priority: f64) {
        if let Some(&p) = self.current.get(&(s, a)) {
            if p >= priority {
                return;
            }
        }
        self.current.insert((s, a), priority);
        self.seq += 1;
        self.heap.push(Entry { priority, seq: self.seq, s, a });
    }

    pub fn pop(&mut self) -> Option<(u64, usize, f64)> {
        while let Some(e) = self.heap.pop() {
            if self.current.get(&(e.s, e.a)) == Some(&e.priority) {
                self.current.remove(&(e.s, e.a));
                return Some((e.s, e.a, e.priority));
            }
        }
        None
    }
}

/// Expected one-step TD error of `(s, a)` under the learned model.
pub fn model_td_error(q: &ValueTable, model: &TabularModel, s: u64, a: usize, gamma: f64) -> Result<f64, AgentError> {
    let (r, v) = model.expectation(s, a, |n| q.max(n))?;
    Ok(r + gamma * v - q.get(s, a))
}

/// Prioritised Sweeping state: learned model plus priority queue.
#[derive(Clone, Debug, Default)]
pub struct PrioritizedSweeping {
    pub model: TabularModel,
    pub queue: PriorityQueue,
}

impl PrioritizedSweeping {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record a real transition and queue its pair if the model's TD error exceeds `theta`.
    pub fn observe(&mut self, q: &ValueTable, s: u64, a: usize, r: f64, s_next: u64, terminal: bool, gamma: f64, theta: f64) -> Result<(), AgentError> {
        self.model.update(s, a, r, s_next, terminal);
        let p = model_td_error(q, &self.model, s, a, gamma)?.abs();
        if p > theta {
            self.queue.push(s, a, p);
        }
        Ok(())
    }

    /// Up to `budget` expected backups in priority order, sweeping backwards
    /// through predecessors. Returns the number of backups performed.
    pub fn plan(&mut self, q: &mut ValueTable, budget: usize, alpha: f64, gamma: f64, theta: f64) -> Result<usize, AgentError> {
        let mut calls = 0;
        while calls < budget {
            let Some((s, a, _)) = self.queue.pop() else { break };
            let delta = model_td_error(q, &self.model, s, a, gamma)?;
            q.add(s, a, alpha * delta);
            calls += 1;
            let preds: Vec<(u64, usize)> = self.model.predecessors(s).copied().collect();
            for (ps, pa) in preds {
                let p = model_td_error(q, &self.model, ps, pa, gamma)?.abs();
                if p > theta {
                    self.queue.push(ps, pa, p);
                }
            }
        }
        Ok(calls)
    }
}

/// Result of value iteration over a descriptive model.
#[derive(Clone, Debug)]
pub struct ValueIterationResult {
    pub values: Vec<f64>,
    pub q: ValueTable,
    pub sweeps: usize,
}

/// Synchronous value iteration until the max-norm change drops below `tol`.
pub fn value_iteration<M: DescriptiveModel + ?Sized>(
    model: &M,
    gamma: f64,
    tol: f64,
    max_sweeps: usize,
    rng: &mut RngStream,
) -> Result<ValueIterationResult, AgentError> {
    if !(tol > 0.0) || !(0.0..=1.0).contains(&gamma) {
        return Err(AgentError::Config("value iteration needs tol > 0 and gamma in [0, 1]".into()));
    }
    let (ns, na) = (model.num_states(), model.num_actions());
    let valid: Vec<usize> = (0..ns).filter(|&s| model.is_valid_state(s)).collect();
    let mut table = Vec::with_capacity(valid.len());
    for &s in &valid {
        let mut per_action = Vec::with_capacity(na);
        for a in 0..na {
            let outcomes = model.describe(s, a, rng)?;
            let total: f64 = outcomes.iter().map(|o| o.probability).sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(AgentError::Model(format!("distribution for ({s}, {a}) sums to {total}")));
            }
            per_action.push(outcomes);
        }
        table.push(per_action);
    }
    let backup = |v: &[f64], outcomes: &[crate::model::Outcome]| -> f64 {
        outcomes
            .iter()
            .map(|o| o.probability * (o.reward + if o.terminal { 0.0 } else { gamma * v[o.next_state] }))
            .sum()
    };
    let mut v = vec![0.0; ns];
    let mut sweeps = 0;
    loop {
        if sweeps >= max_sweeps {
            return Err(AgentError::Model(format!("value iteration did not converge in {max_sweeps} sweeps")));
        }
        sweeps += 1;
        let mut next = v.clone();
        let mut change: f64 = 0.0;
        for (i, &s) in valid.iter().enumerate() {
            let best = table[i].iter().map(|o| backup(&v, o)).fold(f64::NEG_INFINITY, f64::max);
            change = change.max((best - v[s]).abs());
            next[s] = best;
        }
        v = next;
        if change < tol {
            break;
        }
    }
    let mut q = ValueTable::new(na, 0.0);
    for (i, &s) in valid.iter().enumerate() {
        for (a, outcomes) in table[i].iter().enumerate() {
            q.set(s as u64, a, backup(&v, outcomes));
        }
    }
    Ok(ValueIterationResult { values: v, q, sweeps })
}
