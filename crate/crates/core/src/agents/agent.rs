//! Learners behind a common interaction interface.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::go_explore::{GoExploreArchive, GoExploreConfig, TriedActions};
use super::planning::{dyna_planning, PrioritizedSweeping};
use super::reinforce::{arm_features, returns_to_go, Baseline, LinearGaussianPolicy, SoftmaxPolicy};
use super::tabular_model::TabularModel;
use super::td::{
    count_bonus_reward, epsilon_greedy, nstep_sarsa_episode_update, q_learning_update, risk_sensitive_q_update,
    sarsa_update, Step,
};
use super::value_table::ValueTable;
use crate::error::AgentError;
use crate::rng::RngStream;
use crate::space::{Discretizer, Element, KeyEncoder, SpaceDescriptor, StateKey};

/// Names accepted by [`build_agent`].
pub const AGENT_NAMES: [&str; 10] = [
    "random",
    "q_learning",
    "sarsa",
    "nstep_sarsa",
    "count_bonus",
    "risk_q",
    "dyna",
    "prioritized_sweeping",
    "go_explore",
    "reinforce",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMap {
    /// Observation scaled to `[-1, 1]` by the space bounds, plus a bias.
    Scaled,
    /// Two-link arm features, see [`arm_features`].
    Arm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyConfig {
    pub learning_rate: f64,
    pub init_std: f64,
    /// Rate of the exponential running mean used as baseline.
    pub baseline_rate: f64,
    pub features: FeatureMap,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self { learning_rate: 0.01, init_std: 0.5, baseline_rate: 0.05, features: FeatureMap::Scaled }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnerConfig {
    pub alpha: f64,
    /// Use `1 / N(s, a)` instead of the constant `alpha`.
    pub alpha_decay: bool,
    pub gamma: f64,
    pub epsilon: f64,
    /// Backup depth for n-step SARSA; `null` means Monte Carlo.
    pub n: Option<usize>,
    pub beta: f64,
    pub kappa: f64,
    pub planning_budget: usize,
    pub theta: f64,
    /// Initial value of every table entry.
    pub q0: f64,
    /// Bins per dimension when a tabular learner sees a continuous observation.
    pub obs_bins: Option<usize>,
    pub go_explore: GoExploreConfig,
    pub policy: PolicyConfig,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            alpha_decay: false,
            gamma: 1.0,
            epsilon: 0.1,
            n: Some(1),
            beta: 0.0,
            kappa: 0.0,
            planning_budget: 0,
            theta: 1e-4,
            q0: 0.0,
            obs_bins: None,
            go_explore: GoExploreConfig::default(),
            policy: PolicyConfig::default(),
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<(), AgentError> {
        let bad = |what: &str| Err(AgentError::Config(what.to_string()));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad("alpha must lie in (0, 1]");
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return bad("gamma must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon must lie in [0, 1]");
        }
        if self.n == Some(0) {
            return bad("n must be at least 1");
        }
        if !(self.beta >= 0.0) {
            return bad("beta must be non-negative");
        }
        if !(self.kappa > -1.0 && self.kappa < 1.0) {
            return bad("kappa must lie in (-1, 1)");
        }
        if !(self.theta >= 0.0) {
            return bad("theta must be non-negative");
        }
        if self.obs_bins == Some(0) {
            return bad("obs_bins must be at least 1");
        }
        if !(self.policy.learning_rate > 0.0 && self.policy.init_std > 0.0) {
            return bad("policy learning_rate and init_std must be positive");
        }
        if !(self.policy.baseline_rate > 0.0 && self.policy.baseline_rate <= 1.0) {
            return bad("policy baseline_rate must lie in (0, 1]");
        }
        Ok(())
    }
}

/// One environment step as seen by a learner.
#[derive(Clone, Copy, Debug)]
pub struct Experience<'a> {
    pub observation: &'a Element,
    pub action: &'a Element,
    pub reward: f64,
    pub next_observation: &'a Element,
    pub terminated: bool,
    pub truncated: bool,
}

impl Experience<'_> {
    pub fn done(&self) -> bool {
        self.terminated || self.truncated
    }
}

pub trait Agent: Send {
    fn name(&self) -> &str;
    /// Called with the first observation of every episode.
    fn begin_episode(&mut self, observation: &Element) -> Result<(), AgentError>;
    /// Behaviour action for the current observation.
    fn act(&mut self, observation: &Element) -> Result<Element, AgentError>;
    fn observe(&mut self, experience: &Experience) -> Result<(), AgentError>;
    /// True when the learner wants the episode cut short (Go-Explore).
    fn wants_reset(&self) -> bool {
        false
    }
    /// Action of the current greedy policy; does not touch the behaviour stream.
    fn greedy_action(&mut self, observation: &Element) -> Result<Element, AgentError>;
    /// Model queries made while processing the last `observe`.
    fn model_calls_last_step(&self) -> usize {
        0
    }
}

/// Construct a learner by name for the given spaces.
pub fn build_agent(
    name: &str,
    config: &LearnerConfig,
    observation_space: &SpaceDescriptor,
    action_space: &SpaceDescriptor,
    seed: u64,
) -> Result<Box<dyn Agent>, AgentError> {
    config.validate()?;
    let rng = RngStream::new(seed);
    let kind = match name {
        "random" => return Ok(Box::new(RandomAgent { action_space: action_space.clone(), rng: rng.child("behaviour") })),
        "reinforce" => return Ok(Box::new(ReinforceAgent::new(config, observation_space, action_space, &rng)?)),
        "go_explore" => return Ok(Box::new(GoExploreAgent::new(config, observation_space, action_space, &rng)?)),
        "q_learning" => TabularKind::QLearning,
        "sarsa" => TabularKind::Sarsa,
        "nstep_sarsa" => TabularKind::NStepSarsa,
        "count_bonus" => TabularKind::CountBonus,
        "risk_q" => TabularKind::RiskQ,
        "dyna" => TabularKind::Dyna,
        "prioritized_sweeping" => TabularKind::PrioritizedSweeping,
        other => {
            return Err(AgentError::Config(format!("unknown agent '{other}'; known agents: {}", AGENT_NAMES.join(", "))))
        }
    };
    Ok(Box::new(TabularAgent::new(kind, name, config, observation_space, action_space, &rng)?))
}

fn encoder_for(space: &SpaceDescriptor, bins: Option<usize>) -> Result<KeyEncoder, AgentError> {
    let discretizer = match (space, bins) {
        (SpaceDescriptor::Box { .. }, Some(b)) => Some(Discretizer::for_box(space, b)?),
        (SpaceDescriptor::Box { .. }, None) => {
            return Err(AgentError::Config("continuous observations need obs_bins for a tabular learner".into()))
        }
        _ => None,
    };
    Ok(KeyEncoder::new(space.clone(), discretizer))
}

fn enumerate_actions(space: &SpaceDescriptor) -> Result<Vec<Element>, AgentError> {
    let n = space
        .cardinality()
        .ok_or_else(|| AgentError::Config("tabular learners need a finite action space".into()))?;
    (0..n as u64).map(|k| space.element_at(StateKey(k)).map_err(AgentError::from)).collect()
}

pub struct RandomAgent {
    action_space: SpaceDescriptor,
    rng: RngStream,
}

impl Agent for RandomAgent {
    fn name(&self) -> &str {
        "random"
    }
    fn begin_episode(&mut self, _: &Element) -> Result<(), AgentError> {
        Ok(())
    }
    fn act(&mut self, _: &Element) -> Result<Element, AgentError> {
        Ok(self.action_space.sample(&mut self.rng))
    }
    fn observe(&mut self, _: &Experience) -> Result<(), AgentError> {
        Ok(())
    }
    fn greedy_action(&mut self, _: &Element) -> Result<Element, AgentError> {
        Ok(self.action_space.sample(&mut self.rng))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TabularKind {
    QLearning,
    Sarsa,
    NStepSarsa,
    CountBonus,
    RiskQ,
    Dyna,
    PrioritizedSweeping,
}

/// Value-table learners sharing state encoding and ε-greedy behaviour.
pub struct TabularAgent {
    kind: TabularKind,
    name: String,
    config: LearnerConfig,
    encoder: KeyEncoder,
    actions: Vec<Element>,
    q: ValueTable,
    rng: RngStream,
    eval_rng: RngStream,
    pair_visits: HashMap<(u64, usize), u64>,
    state_visits: HashMap<u64, u64>,
    model: TabularModel,
    sweeping: PrioritizedSweeping,
    trajectory: Vec<Step>,
    /// SARSA commits to its next action when it updates.
    next_action: Option<usize>,
    model_calls: usize,
}

impl TabularAgent {
    pub fn new(
        kind: TabularKind,
        name: &str,
        config: &LearnerConfig,
        observation_space: &SpaceDescriptor,
        action_space: &SpaceDescriptor,
        rng: &RngStream,
    ) -> Result<Self, AgentError> {
        let actions = enumerate_actions(action_space)?;
        Ok(Self {
            kind,
            name: name.to_string(),
            config: config.clone(),
            encoder: encoder_for(observation_space, config.obs_bins)?,
            q: ValueTable::new(actions.len(), config.q0),
            actions,
            rng: rng.child("behaviour"),
            eval_rng: rng.child("evaluation"),
            pair_visits: HashMap::new(),
            state_visits: HashMap::new(),
            model: TabularModel::new(),
            sweeping: PrioritizedSweeping::new(),
            trajectory: Vec::new(),
            next_action: None,
            model_calls: 0,
        })
    }

    pub fn table(&self) -> &ValueTable {
        &self.q
    }

    pub fn kind(&self) -> TabularKind {
        self.kind
    }

    fn key(&self, obs: &Element) -> Result<u64, AgentError> {
        Ok(self.encoder.encode(obs)?.0)
    }

    fn action_index(&self, action: &Element) -> Result<usize, AgentError> {
        self.actions
            .iter()
            .position(|a| a == action)
            .ok_or_else(|| AgentError::Contract(format!("action {action} was not produced by this learner")))
    }

    fn step_size(&mut self, s: u64, a: usize) -> f64 {
        if self.config.alpha_decay {
            let n = self.pair_visits.entry((s, a)).or_insert(0);
            *n += 1;
            1.0 / *n as f64
        } else {
            self.config.alpha
        }
    }
}

impl Agent for TabularAgent {
    fn name(&self) -> &str {
        &self.name
    }

    fn begin_episode(&mut self, _: &Element) -> Result<(), AgentError> {
        self.trajectory.clear();
        self.next_action = None;
        Ok(())
    }

    fn act(&mut self, observation: &Element) -> Result<Element, AgentError> {
        let a = match self.next_action.take() {
            Some(a) => a,
            None => {
                let s = self.key(observation)?;
                epsilon_greedy(&self.q, s, self.config.epsilon, &mut self.rng)
            }
        };
        Ok(self.actions[a].clone())
    }

    fn observe(&mut self, e: &Experience) -> Result<(), AgentError> {
        let s = self.key(e.observation)?;
        let a = self.action_index(e.action)?;
        let s2 = self.key(e.next_observation)?;
        let gamma = self.config.gamma;
        self.model_calls = 0;
        match self.kind {
            TabularKind::QLearning => {
                let alpha = self.step_size(s, a);
                q_learning_update(&mut self.q, s, a, e.reward, s2, e.terminated, alpha, gamma);
            }
            TabularKind::CountBonus => {
                let n = self.state_visits.entry(s2).or_insert(0);
                *n += 1;
                let r = count_bonus_reward(e.reward, *n, self.config.beta);
                let alpha = self.step_size(s, a);
                q_learning_update(&mut self.q, s, a, r, s2, e.terminated, alpha, gamma);
            }
            TabularKind::RiskQ => {
                let alpha = self.step_size(s, a);
                risk_sensitive_q_update(&mut self.q, s, a, e.reward, s2, e.terminated, alpha, gamma, self.config.kappa);
            }
            TabularKind::Sarsa => {
                let a2 = if e.terminated { 0 } else { epsilon_greedy(&self.q, s2, self.config.epsilon, &mut self.rng) };
                let alpha = self.step_size(s, a);
                sarsa_update(&mut self.q, s, a, e.reward, s2, a2, e.terminated, alpha, gamma);
                if !e.done() {
                    self.next_action = Some(a2);
                }
            }
            TabularKind::NStepSarsa => {
                self.trajectory.push(Step { s, a, r: e.reward });
                if e.done() {
                    nstep_sarsa_episode_update(&mut self.q, &self.trajectory, self.config.n, self.config.alpha, gamma);
                    self.trajectory.clear();
                }
            }
            TabularKind::Dyna => {
                let alpha = self.step_size(s, a);
                q_learning_update(&mut self.q, s, a, e.reward, s2, e.terminated, alpha, gamma);
                self.model.update(s, a, e.reward, s2, e.terminated);
                self.model_calls = dyna_planning(
                    &mut self.q,
                    &self.model,
                    self.config.planning_budget,
                    self.config.alpha,
                    gamma,
                    &mut self.rng,
                )?;
            }
            TabularKind::PrioritizedSweeping => {
                self.sweeping.observe(&self.q, s, a, e.reward, s2, e.terminated, gamma, self.config.theta)?;
                self.model_calls = self.sweeping.plan(
                    &mut self.q,
                    self.config.planning_budget,
                    self.config.alpha,
                    gamma,
                    self.config.theta,
                )?;
            }
        }
        Ok(())
    }

    fn greedy_action(&mut self, observation: &Element) -> Result<Element, AgentError> {
        let s = self.key(observation)?;
        Ok(self.actions[self.q.greedy(s, &mut self.eval_rng)].clone())
    }

    fn model_calls_last_step(&self) -> usize {
        self.model_calls
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    /// Replaying an archived sequence, then exploring.
    Explore,
    /// Replaying the best goal sequence.
    Exploit,
}

/// Go-Explore driven through the regular step interface: each episode
/// replays an archived sequence, explores for a while, then asks for a reset.
pub struct GoExploreAgent {
    config: GoExploreConfig,
    encoder: KeyEncoder,
    actions: Vec<Element>,
    archive: GoExploreArchive,
    tried: TriedActions,
    rng: RngStream,
    eval_rng: RngStream,
    phase: Phase,
    plan: Vec<usize>,
    cursor: usize,
    target: u64,
    explore_left: usize,
    path: Vec<usize>,
    score: f64,
}

impl GoExploreAgent {
    pub fn new(
        config: &LearnerConfig,
        observation_space: &SpaceDescriptor,
        action_space: &SpaceDescriptor,
        rng: &RngStream,
    ) -> Result<Self, AgentError> {
        Ok(Self {
            config: config.go_explore.clone(),
            encoder: encoder_for(observation_space, config.obs_bins)?,
            actions: enumerate_actions(action_space)?,
            archive: GoExploreArchive::new(),
            tried: TriedActions::default(),
            rng: rng.child("behaviour"),
            eval_rng: rng.child("evaluation"),
            phase: Phase::Explore,
            plan: Vec::new(),
            cursor: 0,
            target: 0,
            explore_left: 0,
            path: Vec::new(),
            score: 0.0,
        })
    }

    pub fn archive(&self) -> &GoExploreArchive {
        &self.archive
    }

    fn goal_plan(&self) -> Option<Vec<usize>> {
        self.archive.best_terminal().filter(|c| c.score > 0.0).map(|c| c.actions.clone())
    }
}

impl Agent for GoExploreAgent {
    fn name(&self) -> &str {
        "go_explore"
    }

    fn begin_episode(&mut self, observation: &Element) -> Result<(), AgentError> {
        let key = self.encoder.encode(observation)?.0;
        self.archive.visit(key, &[], 0.0, false);
        self.path.clear();
        self.score = 0.0;
        self.cursor = 0;
        match self.goal_plan().filter(|_| self.config.exploit) {
            Some(plan) => {
                self.phase = Phase::Exploit;
                self.plan = plan;
            }
            None => {
                self.phase = Phase::Explore;
                self.target = self.archive.select(self.config.selection_power, &mut self.rng).expect("archive holds the start state");
                self.plan = self.archive.get(self.target).expect("selected cell exists").actions.clone();
                self.explore_left = self.config.explore_steps;
            }
        }
        Ok(())
    }

    fn act(&mut self, observation: &Element) -> Result<Element, AgentError> {
        let key = self.encoder.encode(observation)?.0;
        let a = if self.cursor < self.plan.len() {
            self.cursor += 1;
            self.plan[self.cursor - 1]
        } else {
            if self.phase == Phase::Explore && self.explore_left == self.config.explore_steps && key != self.target {
                return Err(AgentError::Contract(format!("replay reached state {key} instead of {}", self.target)));
            }
            self.explore_left = self.explore_left.saturating_sub(1);
            self.tried.choose(key, self.actions.len(), self.config.untried_first, &mut self.rng)
        };
        Ok(self.actions[a].clone())
    }

    fn observe(&mut self, e: &Experience) -> Result<(), AgentError> {
        let a = self
            .actions
            .iter()
            .position(|x| x == e.action)
            .ok_or_else(|| AgentError::Contract(format!("action {} was not produced by this learner", e.action)))?;
        self.path.push(a);
        self.score += e.reward;
        let key = self.encoder.encode(e.next_observation)?.0;
        self.archive.visit(key, &self.path, self.score, e.terminated);
        if e.done() && self.cursor < self.plan.len() && self.phase == Phase::Explore {
            return Err(AgentError::Contract("replayed sequence ended the episode early".into()));
        }
        Ok(())
    }

    fn wants_reset(&self) -> bool {
        self.phase == Phase::Explore && self.cursor >= self.plan.len() && self.explore_left == 0
    }

    fn greedy_action(&mut self, observation: &Element) -> Result<Element, AgentError> {
        // The greedy policy follows the best goal sequence when the current
        // state lies on it, and acts uniformly otherwise.
        let key = self.encoder.encode(observation)?.0;
        if let Some(plan) = self.goal_plan() {
            if let Some(cell) = self.archive.get(key) {
                if plan.starts_with(&cell.actions) && cell.actions.len() < plan.len() {
                    return Ok(self.actions[plan[cell.actions.len()]].clone());
                }
            }
        }
        Ok(self.actions[self.eval_rng.index(self.actions.len())].clone())
    }
}

enum Policy {
    Gaussian(LinearGaussianPolicy),
    Softmax(SoftmaxPolicy),
}

/// Episodic REINFORCE with a running-mean baseline.
pub struct ReinforceAgent {
    policy: Policy,
    features: FeatureMap,
    low: Vec<f64>,
    high: Vec<f64>,
    /// Lower and upper action bounds for the Gaussian policy.
    action_bounds: Option<(Vec<f64>, Vec<f64>)>,
    gamma: f64,
    baseline: Baseline,
    rng: RngStream,
    feature_log: Vec<Vec<f64>>,
    raw_actions: Vec<Vec<f64>>,
    discrete_actions: Vec<usize>,
    rewards: Vec<f64>,
    last_raw: Vec<f64>,
}

impl ReinforceAgent {
    pub fn new(
        config: &LearnerConfig,
        observation_space: &SpaceDescriptor,
        action_space: &SpaceDescriptor,
        rng: &RngStream,
    ) -> Result<Self, AgentError> {
        let (low, high) = match observation_space {
            SpaceDescriptor::Box { low, high, .. } => (low.clone(), high.clone()),
            SpaceDescriptor::Discrete { n } => (vec![0.0], vec![*n as f64 - 1.0]),
            SpaceDescriptor::MultiDiscrete { dims } => (vec![0.0; dims.len()], dims.iter().map(|&d| d as f64 - 1.0).collect()),
        };
        let pc = &config.policy;
        let num_features = match pc.features {
            FeatureMap::Scaled => low.len() + 1,
            FeatureMap::Arm => {
                if low.len() != 7 {
                    return Err(AgentError::Config("arm features need a 7-dimensional observation".into()));
                }
                12
            }
        };
        let (policy, action_bounds) = match action_space {
            SpaceDescriptor::Box { low, high, .. } => (
                Policy::Gaussian(LinearGaussianPolicy::new(num_features, low.len(), pc.init_std, pc.learning_rate)),
                Some((low.clone(), high.clone())),
            ),
            SpaceDescriptor::Discrete { n } => (Policy::Softmax(SoftmaxPolicy::new(num_features, *n, pc.learning_rate)), None),
            SpaceDescriptor::MultiDiscrete { .. } => {
                return Err(AgentError::Config("reinforce supports Box or Discrete action spaces".into()))
            }
        };
        Ok(Self {
            policy,
            features: pc.features,
            low,
            high,
            action_bounds,
            gamma: config.gamma,
            baseline: Baseline::new(pc.baseline_rate),
            rng: rng.child("behaviour"),
            feature_log: Vec::new(),
            raw_actions: Vec::new(),
            discrete_actions: Vec::new(),
            rewards: Vec::new(),
            last_raw: Vec::new(),
        })
    }

    /// Times the Gaussian standard deviation was clamped at its floor.
    pub fn std_clamps(&self) -> u64 {
        match &self.policy {
            Policy::Gaussian(p) => p.std_clamps,
            Policy::Softmax(_) => 0,
        }
    }

    fn features(&self, obs: &Element) -> Result<Vec<f64>, AgentError> {
        let values: Vec<f64> = match obs {
            Element::Real(v) => v.clone(),
            Element::Discrete(i) => vec![*i as f64],
            Element::MultiDiscrete(v) => v.iter().map(|&x| x as f64).collect(),
        };
        if values.len() != self.low.len() {
            return Err(AgentError::Contract("observation length does not match the observation space".into()));
        }
        Ok(match self.features {
            FeatureMap::Arm => arm_features(&values),
            FeatureMap::Scaled => values
                .iter()
                .zip(self.low.iter().zip(&self.high))
                .map(|(x, (l, h))| if h > l && h.is_finite() && l.is_finite() { 2.0 * (x - l) / (h - l) - 1.0 } else { *x })
                .chain(std::iter::once(1.0))
                .collect(),
        })
    }

    fn clip(&self, raw: &[f64]) -> Vec<f64> {
        let (lo, hi) = self.action_bounds.as_ref().expect("gaussian policy has bounds");
        raw.iter().zip(lo.iter().zip(hi)).map(|(x, (l, h))| x.clamp(*l, *h)).collect()
    }

    fn finish_episode(&mut self) {
        let g = returns_to_go(&self.rewards, self.gamma);
        let adv: Vec<f64> = g.iter().map(|x| x - self.baseline.value).collect();
        match &mut self.policy {
            Policy::Gaussian(p) => {
                let steps: Vec<(Vec<f64>, Vec<f64>)> =
                    self.feature_log.drain(..).zip(self.raw_actions.drain(..)).collect();
                p.update(&steps, &adv);
            }
            Policy::Softmax(p) => {
                let steps: Vec<(Vec<f64>, usize)> =
                    self.feature_log.drain(..).zip(self.discrete_actions.drain(..)).collect();
                p.update(&steps, &adv);
            }
        }
        if let Some(&g0) = g.first() {
            self.baseline.update(g0);
        }
        self.rewards.clear();
    }
}

impl Agent for ReinforceAgent {
    fn name(&self) -> &str {
        "reinforce"
    }

    fn begin_episode(&mut self, _: &Element) -> Result<(), AgentError> {
        self.feature_log.clear();
        self.raw_actions.clear();
        self.discrete_actions.clear();
        self.rewards.clear();
        Ok(())
    }

    fn act(&mut self, observation: &Element) -> Result<Element, AgentError> {
        let phi = self.features(observation)?;
        match &self.policy {
            Policy::Gaussian(p) => {
                self.last_raw = p.sample(&phi, &mut self.rng);
                Ok(Element::Real(self.clip(&self.last_raw)))
            }
            Policy::Softmax(p) => Ok(Element::Discrete(p.sample(&phi, &mut self.rng))),
        }
    }

    fn observe(&mut self, e: &Experience) -> Result<(), AgentError> {
        self.feature_log.push(self.features(e.observation)?);
        match (&self.policy, e.action) {
            (Policy::Gaussian(_), Element::Real(_)) => self.raw_actions.push(std::mem::take(&mut self.last_raw)),
            (Policy::Softmax(_), Element::Discrete(a)) => self.discrete_actions.push(*a),
            _ => return Err(AgentError::Contract("action type does not match the policy".into())),
        }
        self.rewards.push(e.reward);
        if e.done() {
            self.finish_episode();
        }
        Ok(())
    }

    fn greedy_action(&mut self, observation: &Element) -> Result<Element, AgentError> {
        let phi = self.features(observation)?;
        Ok(match &self.policy {
            Policy::Gaussian(p) => Element::Real(self.clip(&p.mean(&phi))),
            Policy::Softmax(p) => Element::Discrete(p.greedy(&phi)),
        })
    }
}
