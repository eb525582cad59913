use std::collections::HashMap;
use std::io::Write;

use crate::rng::RngStream;

/// Action-value estimates `Q(s, a)` over state keys and dense action indices.
/// Unvisited entries read as `q0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueTable {
    q0: f64,
    num_actions: usize,
    rows: HashMap<u64, Vec<f64>>,
}

impl ValueTable {
    pub fn new(num_actions: usize, q0: f64) -> Self {
        assert!(num_actions >= 1, "a value table needs at least one action");
        Self { q0, num_actions, rows: HashMap::new() }
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn initial_value(&self) -> f64 {
        self.q0
    }

    /// Number of stored entries (states times actions).
    pub fn len(&self) -> usize {
        self.rows.len() * self.num_actions
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, s: u64, a: usize) -> f64 {
        self.rows.get(&s).map_or(self.q0, |r| r[a])
    }

    pub fn set(&mut self, s: u64, a: usize, v: f64) {
        let (n, q0) = (self.num_actions, self.q0);
        self.rows.entry(s).or_insert_with(|| vec![q0; n])[a] = v;
    }

    pub fn add(&mut self, s: u64, a: usize, delta: f64) {
        let v = self.get(s, a);
        self.set(s, a, v + delta);
    }

    pub fn row(&self, s: u64) -> Vec<f64> {
        self.rows.get(&s).cloned().unwrap_or_else(|| vec![self.q0; self.num_actions])
    }

    pub fn max(&self, s: u64) -> f64 {
        match self.rows.get(&s) {
            Some(r) => r.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            None => self.q0,
        }
    }

    /// Indices attaining the row maximum.
    pub fn argmax_set(&self, s: u64) -> Vec<usize> {
        let row = self.row(s);
        let best = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (0..self.num_actions).filter(|&a| row[a] == best).collect()
    }

    /// Greedy action with ties broken uniformly at random.
    pub fn greedy(&self, s: u64, rng: &mut RngStream) -> usize {
        let best = self.argmax_set(s);
        if best.len() == 1 {
            best[0]
        } else {
            best[rng.index(best.len())]
        }
    }

    /// Greedy action with ties broken towards the lowest index.
    pub fn greedy_first(&self, s: u64) -> usize {
        self.argmax_set(s)[0]
    }

    /// Stored entries as `(state_key, action, value)`, sorted by key.
    pub fn entries(&self) -> Vec<(u64, usize, f64)> {
        let mut keys: Vec<u64> = self.rows.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter()
            .flat_map(|k| self.rows[&k].iter().enumerate().map(move |(a, v)| (k, a, *v)).collect::<Vec<_>>())
            .collect()
    }

    /// Flat CSV dump with header `state_key,action,value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "state_key,action,value")?;
        for (k, a, v) in self.entries() {
            writeln!(out, "{k},{a},{v}")?;
        }
        Ok(())
    }
}
