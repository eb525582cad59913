//! Runs every arm of an experiment over its repetitions.

use std::collections::BTreeMap;

use rlcourse::agents::{build_agent, Agent, Experience};
use rlcourse::{envs, Environment, FrameStack, RngStream};

use crate::config::{EnvSpec, EvalMode, ExperimentConfig};
use crate::error::ExperimentError;

#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeRow {
    /// Environment step at which the episode ended (1-based).
    pub step: usize,
    pub episode: usize,
    pub length: usize,
    pub ret: f64,
    pub terminated: bool,
    /// False only for the episode still running when the step budget ran out.
    pub complete: bool,
    /// Per-episode sums of the environment's info values.
    pub aux: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRow {
    pub step: usize,
    pub ret: f64,
    pub info: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepetitionRecord {
    pub seed: u64,
    pub episodes: Vec<EpisodeRow>,
    pub evaluations: Vec<EvalRow>,
    pub model_calls: u64,
    pub max_model_calls_per_step: usize,
}

impl RepetitionRecord {
    /// Return of the episode each step belongs to, one value per step.
    pub fn step_values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.episodes.last().map_or(0, |e| e.step));
        for e in &self.episodes {
            out.extend(std::iter::repeat_n(e.ret, e.length));
        }
        out
    }

    pub fn completed(&self) -> impl Iterator<Item = &EpisodeRow> {
        self.episodes.iter().filter(|e| e.complete)
    }

    /// Mean of `step_values` over steps `from..to`.
    pub fn mean_over_steps(&self, from: usize, to: usize) -> f64 {
        let v = self.step_values();
        let to = to.min(v.len());
        if from >= to {
            return 0.0;
        }
        v[from..to].iter().sum::<f64>() / (to - from) as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArmRecord {
    pub agent: String,
    pub env: String,
    pub repetitions: Vec<RepetitionRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub name: String,
    pub total_steps: usize,
    pub eval: EvalMode,
    pub bin_size: usize,
    pub arms: Vec<ArmRecord>,
}

impl RunRecord {
    pub fn arm(&self, agent: &str, env: &str) -> Option<&ArmRecord> {
        self.arms.iter().find(|a| a.agent == agent && a.env == env)
    }
}

pub fn make_env(spec: &EnvSpec, seed: u64) -> Result<Box<dyn Environment>, ExperimentError> {
    let context = || spec.display_label();
    let env = envs::build(&spec.name, &spec.params, seed).map_err(|source| ExperimentError::Env { context: context(), source })?;
    Ok(match spec.framestack {
        Some(k) => Box::new(FrameStack::new(env, k).map_err(|source| ExperimentError::Env { context: context(), source })?),
        None => env,
    })
}

fn greedy_return(agent: &mut dyn Agent, env: &mut dyn Environment) -> Result<(f64, Vec<String>), rlcourse::AgentError> {
    let mut obs = env.reset(None);
    let (mut ret, mut info) = (0.0, Vec::new());
    loop {
        let a = agent.greedy_action(&obs)?;
        let out = env.step(&a)?;
        ret += out.reward;
        info.extend(out.info.keys().cloned());
        if out.done() {
            return Ok((ret, info));
        }
        obs = out.observation;
    }
}

/// Seed for the learner of the repetition seeded with `seed`.
pub fn agent_seed(seed: u64) -> u64 {
    RngStream::new(seed).child("agent").seed()
}

fn run_repetition(cfg: &ExperimentConfig, arm_index: usize, seed: u64) -> Result<RepetitionRecord, ExperimentError> {
    let arm = &cfg.arms[arm_index];
    let context = format!("{} / {} / seed {seed}", arm.agent.display_label(), arm.env.display_label());
    let agent_err = |source| ExperimentError::Agent { context: context.clone(), source };
    let env_err = |source| ExperimentError::Env { context: context.clone(), source };

    let mut env = make_env(&arm.env, seed)?;
    let mut agent = build_agent(&arm.agent.name, &arm.agent.config, env.observation_space(), env.action_space(), agent_seed(seed))
        .map_err(agent_err)?;
    let mut eval_env = match cfg.eval {
        EvalMode::GreedyEvery(_) => Some(make_env(&arm.env, seed)?),
        EvalMode::Online => None,
    };
    let budget = arm.agent.config.planning_budget;

    let mut rec = RepetitionRecord { seed, episodes: Vec::new(), evaluations: Vec::new(), model_calls: 0, max_model_calls_per_step: 0 };
    let mut obs = env.reset(None);
    agent.begin_episode(&obs).map_err(agent_err)?;
    let (mut ret, mut len, mut aux) = (0.0, 0usize, BTreeMap::new());
    for t in 1..=cfg.total_steps {
        let action = agent.act(&obs).map_err(agent_err)?;
        let out = env.step(&action).map_err(env_err)?;
        agent
            .observe(&Experience {
                observation: &obs,
                action: &action,
                reward: out.reward,
                next_observation: &out.observation,
                terminated: out.terminated,
                truncated: out.truncated,
            })
            .map_err(agent_err)?;
        let calls = agent.model_calls_last_step();
        if calls > budget {
            return Err(ExperimentError::Budget { context, calls, budget });
        }
        rec.model_calls += calls as u64;
        rec.max_model_calls_per_step = rec.max_model_calls_per_step.max(calls);
        ret += out.reward;
        len += 1;
        for (k, v) in &out.info {
            *aux.entry(k.clone()).or_insert(0.0) += v;
        }
        let ended = out.done() || agent.wants_reset();
        let terminated = out.terminated;
        obs = out.observation;
        if ended {
            rec.episodes.push(EpisodeRow {
                step: t,
                episode: rec.episodes.len(),
                length: len,
                ret,
                terminated,
                complete: true,
                aux: std::mem::take(&mut aux),
            });
            ret = 0.0;
            len = 0;
            obs = env.reset(None);
            agent.begin_episode(&obs).map_err(agent_err)?;
        }
        if let (EvalMode::GreedyEvery(k), Some(e)) = (cfg.eval, eval_env.as_mut()) {
            if t % k == 0 {
                let (r, info) = greedy_return(agent.as_mut(), e.as_mut()).map_err(agent_err)?;
                rec.evaluations.push(EvalRow { step: t, ret: r, info });
            }
        }
    }
    if len > 0 {
        rec.episodes.push(EpisodeRow {
            step: cfg.total_steps,
            episode: rec.episodes.len(),
            length: len,
            ret,
            terminated: false,
            complete: false,
            aux,
        });
    }
    Ok(rec)
}

/// Runs all arms; repetition `i` uses seed `base_seed + i`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunRecord, ExperimentError> {
    cfg.validate()?;
    let mut arms = Vec::with_capacity(cfg.arms.len());
    for (i, arm) in cfg.arms.iter().enumerate() {
        let repetitions = (0..cfg.repetitions as u64)
            .map(|r| run_repetition(cfg, i, cfg.base_seed + r))
            .collect::<Result<Vec<_>, _>>()?;
        arms.push(ArmRecord { agent: arm.agent.display_label(), env: arm.env.display_label(), repetitions });
    }
    Ok(RunRecord { name: cfg.name.clone(), total_steps: cfg.total_steps, eval: cfg.eval, bin_size: cfg.bin_size, arms })
}
