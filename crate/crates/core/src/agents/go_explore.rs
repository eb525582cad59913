//! Go-Explore for deterministic tabular environments: return to an archived
//! state by replaying its action sequence, then explore from there.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::env::Environment;
use crate::error::AgentError;
use crate::rng::RngStream;
use crate::space::{Element, KeyEncoder};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GoExploreConfig {
    pub explore_steps: usize,
    /// Cells are selected with weight `(seen + 1)^-selection_power`.
    pub selection_power: f64,
    /// Prefer actions not yet tried from the current cell while exploring.
    pub untried_first: bool,
    /// Replay the best goal sequence once one is found.
    pub exploit: bool,
}

impl Default for GoExploreConfig {
    fn default() -> Self {
        Self { explore_steps: 10, selection_power: 0.5, untried_first: false, exploit: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub actions: Vec<usize>,
    /// Times the state has been reached, replays included.
    pub seen: u64,
    pub score: f64,
}

#[derive(Clone, Debug, Default)]
pub struct GoExploreArchive {
    cells: BTreeMap<u64, Cell>,
    /// Terminal states are recorded but never selected.
    terminal: BTreeMap<u64, Cell>,
}

impl GoExploreArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, key: u64) -> Option<&Cell> {
        self.cells.get(&key)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&u64, &Cell)> {
        self.cells.iter()
    }

    pub fn terminal_cells(&self) -> impl Iterator<Item = (&u64, &Cell)> {
        self.terminal.iter()
    }

    /// Highest-scoring terminal sequence, shortest among equals.
    pub fn best_terminal(&self) -> Option<&Cell> {
        self.terminal.values().fold(None, |best: Option<&Cell>, c| match best {
            Some(b) if b.score > c.score || (b.score == c.score && b.actions.len() <= c.actions.len()) => Some(b),
            _ => Some(c),
        })
    }

    /// Record that `key` was reached by `actions` with cumulative reward `score`.
    /// Returns true when the entry is new or improved.
    pub fn visit(&mut self, key: u64, actions: &[usize], score: f64, terminal: bool) -> bool {
        let map = if terminal { &mut self.terminal } else { &mut self.cells };
        match map.get_mut(&key) {
            Some(c) => {
                c.seen += 1;
                if score > c.score || (score == c.score && actions.len() < c.actions.len()) {
                    c.actions = actions.to_vec();
                    c.score = score;
                    true
                } else {
                    false
                }
            }
            None => {
                map.insert(key, Cell { actions: actions.to_vec(), seen: 1, score });
                true
            }
        }
    }

    pub fn select(&self, power: f64, rng: &mut RngStream) -> Option<u64> {
        if self.cells.is_empty() {
            return None;
        }
        let keys: Vec<u64> = self.cells.keys().copied().collect();
        let weights: Vec<f64> = self.cells.values().map(|c| (c.seen as f64 + 1.0).powf(-power)).collect();
        Some(keys[rng.weighted_index(&weights)])
    }
}

/// Tracks which actions have been tried from each state.
#[derive(Clone, Debug, Default)]
pub struct TriedActions {
    tried: HashMap<u64, Vec<bool>>,
}

impl TriedActions {
    pub fn choose(&mut self, key: u64, num_actions: usize, untried_first: bool, rng: &mut RngStream) -> usize {
        let row = self.tried.entry(key).or_insert_with(|| vec![false; num_actions]);
        let open: Vec<usize> = (0..num_actions).filter(|&a| !row[a]).collect();
        let a = if untried_first && !open.is_empty() { open[rng.index(open.len())] } else { rng.index(num_actions) };
        row[a] = true;
        a
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationReport {
    pub env_steps: usize,
    pub episode_return: f64,
    pub terminated: bool,
}

/// One select / return / explore iteration against a live environment.
pub fn go_explore_step(
    archive: &mut GoExploreArchive,
    tried: &mut TriedActions,
    env: &mut dyn Environment,
    encoder: &KeyEncoder,
    actions: &[Element],
    config: &GoExploreConfig,
    rng: &mut RngStream,
) -> Result<IterationReport, AgentError> {
    let start = env.reset(None);
    let start_key = encoder.encode(&start)?.0;
    archive.visit(start_key, &[], 0.0, false);
    let target = archive.select(config.selection_power, rng).expect("archive holds the start state");
    let plan = archive.get(target).expect("selected cell exists").actions.clone();
    let mut path: Vec<usize> = Vec::with_capacity(plan.len() + config.explore_steps);
    let mut score = 0.0;
    let mut key = start_key;
    let mut steps = 0;
    for &a in &plan {
        let out = env.step(&actions[a])?;
        steps += 1;
        path.push(a);
        score += out.reward;
        key = encoder.encode(&out.observation)?.0;
        if out.done() {
            return Err(AgentError::Contract("replayed sequence ended the episode early".into()));
        }
        archive.visit(key, &path, score, false);
    }
    if key != target {
        return Err(AgentError::Contract(format!("replay reached state {key} instead of {target}")));
    }
    for _ in 0..config.explore_steps {
        let a = tried.choose(key, actions.len(), config.untried_first, rng);
        let out = env.step(&actions[a])?;
        steps += 1;
        path.push(a);
        score += out.reward;
        key = encoder.encode(&out.observation)?.0;
        archive.visit(key, &path, score, out.terminated);
        if out.done() {
            return Ok(IterationReport { env_steps: steps, episode_return: score, terminated: out.terminated });
        }
    }
    Ok(IterationReport { env_steps: steps, episode_return: score, terminated: false })
}
