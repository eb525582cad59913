//! Declarative experiment description, stored as JSON.

use std::path::Path;

use rlcourse::agents::{LearnerConfig, AGENT_NAMES};
use rlcourse::envs::CATALOG;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::ExperimentError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvSpec {
    pub name: String,
    /// Environment parameters; `null` keeps the defaults.
    #[serde(default)]
    pub params: Value,
    /// Stack the last `k` observations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framestack: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl EnvSpec {
    pub fn new(name: &str, params: Value) -> Self {
        Self { name: name.to_string(), params, framestack: None, label: None }
    }

    /// `label` if set, otherwise the name followed by its parameters.
    pub fn display_label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let mut parts = vec![self.name.clone()];
        if let Value::Object(map) = &self.params {
            parts.extend(map.iter().map(|(k, v)| format!("{k}={}", compact(v))));
        }
        if let Some(k) = self.framestack {
            parts.push(format!("framestack={k}"));
        }
        parts.join(" ")
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub name: String,
    #[serde(default)]
    pub config: LearnerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl AgentSpec {
    pub fn new(name: &str, config: LearnerConfig) -> Self {
        Self { name: name.to_string(), config, label: None }
    }

    pub fn labelled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn display_label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.name.clone())
    }
}

/// One learner on one environment, repeated over seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arm {
    pub env: EnvSpec,
    pub agent: AgentSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// Returns of the training episodes, exploration included.
    Online,
    /// Greedy rollout on a separate instance every `k` steps.
    GreedyEvery(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetMode {
    CallCount,
    WallClock,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub arms: Vec<Arm>,
    pub total_steps: usize,
    pub repetitions: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_eval")]
    pub eval: EvalMode,
    #[serde(default = "one")]
    pub smoothing_window: usize,
    /// Steps per point of the online learning curve.
    #[serde(default = "default_bin")]
    pub bin_size: usize,
    #[serde(default = "default_budget_mode")]
    pub planning_budget_mode: BudgetMode,
}

fn default_eval() -> EvalMode {
    EvalMode::Online
}

fn one() -> usize {
    1
}

fn default_bin() -> usize {
    100
}

fn default_budget_mode() -> BudgetMode {
    BudgetMode::CallCount
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.repetitions < 1 {
            return bad("repetitions must be at least 1".into());
        }
        if self.smoothing_window < 1 {
            return bad("smoothing_window must be at least 1".into());
        }
        if self.bin_size < 1 {
            return bad("bin_size must be at least 1".into());
        }
        if self.eval == EvalMode::GreedyEvery(0) {
            return bad("greedy_every must be at least 1".into());
        }
        if self.planning_budget_mode == BudgetMode::WallClock {
            return bad("planning_budget_mode wall_clock is not supported; use call_count".into());
        }
        if self.arms.is_empty() {
            return bad("at least one arm is required".into());
        }
        for arm in &self.arms {
            if !CATALOG.iter().any(|e| e.name == arm.env.name) {
                return bad(format!("unknown environment '{}'", arm.env.name));
            }
            if !AGENT_NAMES.contains(&arm.agent.name.as_str()) {
                return bad(format!("unknown agent '{}'", arm.agent.name));
            }
            if arm.env.framestack == Some(0) {
                return bad("framestack must be at least 1".into());
            }
            arm.agent
                .config
                .validate()
                .map_err(|e| ExperimentError::Config(format!("agent '{}': {e}", arm.agent.display_label())))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io { path: path.to_path_buf(), source })?;
        let cfg = Self::from_json(&text).map_err(|source| ExperimentError::Parse { path: path.to_path_buf(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: &Path) -> Result<(), ExperimentError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|source| ExperimentError::Io { path: path.to_path_buf(), source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> ExperimentConfig {
        ExperimentConfig {
            name: "t".into(),
            arms: vec![Arm {
                env: EnvSpec::new("boulder", json!({"height": 4})),
                agent: AgentSpec::new("q_learning", LearnerConfig { n: None, ..Default::default() }),
            }],
            total_steps: 10,
            repetitions: 2,
            base_seed: 3,
            eval: EvalMode::GreedyEvery(5),
            smoothing_window: 1,
            bin_size: 5,
            planning_budget_mode: BudgetMode::CallCount,
        }
    }

    #[test]
    fn round_trips_through_json() {
        let cfg = sample();
        assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        v["arms"][0]["agent"]["config"]["epsilom"] = json!(0.1);
        assert!(serde_json::from_value::<ExperimentConfig>(v).is_err());
    }

    #[test]
    fn names_must_resolve() {
        let mut cfg = sample();
        cfg.arms[0].agent.name = "qlearning".into();
        assert!(cfg.validate().unwrap_err().to_string().contains("qlearning"));
        let mut cfg = sample();
        cfg.arms[0].env.name = "chess".into();
        assert!(cfg.validate().unwrap_err().to_string().contains("chess"));
    }

    #[test]
    fn zero_repetitions_rejected() {
        let cfg = ExperimentConfig { repetitions: 0, ..sample() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn labels() {
        let mut e = EnvSpec::new("boulder", json!({"height": 4, "num_grips": 2}));
        e.framestack = Some(2);
        assert_eq!(e.display_label(), "boulder height=4 num_grips=2 framestack=2");
    }
}
