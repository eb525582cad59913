use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::AgentError;
use crate::rng::RngStream;

/// Successor statistics for one `(s, a)` pair, keyed by `(s', terminal)`.
#[derive(Clone, Debug, Default, PartialEq)]
struct PairStats {
    visits: u64,
    next: BTreeMap<(u64, bool), (u64, f64)>,
}

/// Maximum-likelihood model learned from observed transitions.
#[derive(Clone, Debug, Default)]
pub struct TabularModel {
    pairs: HashMap<(u64, usize), PairStats>,
    /// Visited pairs in first-visit order, for reproducible uniform sampling.
    visited: Vec<(u64, usize)>,
    predecessors: HashMap<u64, BTreeSet<(u64, usize)>>,
}

/// One entry of the learned next-state distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub next: u64,
    pub terminal: bool,
    pub probability: f64,
    pub reward: f64,
}

impl TabularModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, s: u64, a: usize, r: f64, s_next: u64, terminal: bool) {
        let stats = self.pairs.entry((s, a)).or_insert_with(|| {
            self.visited.push((s, a));
            PairStats::default()
        });
        stats.visits += 1;
        let e = stats.next.entry((s_next, terminal)).or_insert((0, 0.0));
        e.0 += 1;
        e.1 += r;
        self.predecessors.entry(s_next).or_default().insert((s, a));
    }

    pub fn visits(&self, s: u64, a: usize) -> u64 {
        self.pairs.get(&(s, a)).map_or(0, |p| p.visits)
    }

    pub fn visited_pairs(&self) -> &[(u64, usize)] {
        &self.visited
    }

    pub fn predecessors(&self, s: u64) -> impl Iterator<Item = &(u64, usize)> {
        self.predecessors.get(&s).into_iter().flatten()
    }

    /// Count of transitions `(s, a) -> s'` regardless of the terminal flag.
    pub fn transition_count(&self, s: u64, a: usize, s_next: u64) -> u64 {
        self.pairs
            .get(&(s, a))
            .map_or(0, |p| p.next.iter().filter(|((n, _), _)| *n == s_next).map(|(_, (c, _))| c).sum())
    }

    /// Learned distribution over successors with mean rewards.
    pub fn predict(&self, s: u64, a: usize) -> Result<Vec<Prediction>, AgentError> {
        let stats = self.pairs.get(&(s, a)).ok_or_else(|| AgentError::Model(format!("pair ({s}, {a}) never visited")))?;
        let n = stats.visits as f64;
        Ok(stats
            .next
            .iter()
            .map(|(&(next, terminal), &(count, sum))| Prediction {
                next,
                terminal,
                probability: count as f64 / n,
                reward: sum / count as f64,
            })
            .collect())
    }

    /// Expected reward and expected bootstrap value under the learned model.
    pub fn expectation(&self, s: u64, a: usize, value: impl Fn(u64) -> f64) -> Result<(f64, f64), AgentError> {
        let mut r = 0.0;
        let mut v = 0.0;
        for p in self.predict(s, a)? {
            r += p.probability * p.reward;
            if !p.terminal {
                v += p.probability * value(p.next);
            }
        }
        Ok((r, v))
    }

    pub fn sample(&self, s: u64, a: usize, rng: &mut RngStream) -> Result<Prediction, AgentError> {
        let preds = self.predict(s, a)?;
        let i = if preds.len() == 1 {
            0
        } else {
            rng.weighted_index(&preds.iter().map(|p| p.probability).collect::<Vec<_>>())
        };
        Ok(preds[i])
    }

    /// Uniformly chosen previously visited pair.
    pub fn sample_visited(&self, rng: &mut RngStream) -> Option<(u64, usize)> {
        if self.visited.is_empty() {
            None
        } else {
            Some(self.visited[rng.index(self.visited.len())])
        }
    }

    /// Checks that successor counts add up to visit counts everywhere.
    pub fn counts_consistent(&self) -> bool {
        self.pairs.values().all(|p| p.next.values().map(|(c, _)| c).sum::<u64>() == p.visits)
    }
}
