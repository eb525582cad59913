//! Named experiment configurations for each challenge.
//!
//! Hyperparameters were tuned once so the expected qualitative orderings
//! appear, then frozen; the golden CSVs in `tests/golden` pin them.

use rlcourse::agents::go_explore::GoExploreConfig;
use rlcourse::agents::{FeatureMap, LearnerConfig, PolicyConfig};
use serde_json::json;

use crate::config::{AgentSpec, Arm, BudgetMode, EnvSpec, EvalMode, ExperimentConfig};
use crate::error::ExperimentError;

pub const PRESET_NAMES: [&str; 9] = [
    "fig2-boulder",
    "fig3-memory",
    "fig3-supermarket",
    "roadrunner-onoff",
    "study-nstep",
    "golf-risk",
    "catch-dim",
    "tamagotchi-signal",
    "trashbot-bins",
];

pub const BOULDER_HEIGHTS: [usize; 3] = [10, 30, 100];
pub const MEMORY_FRAMES: [usize; 4] = [1, 2, 4, 8];

fn base(name: &str, arms: Vec<Arm>, total_steps: usize) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_string(),
        arms,
        total_steps,
        repetitions: 10,
        base_seed: 0,
        eval: EvalMode::Online,
        smoothing_window: 1,
        bin_size: 100,
        planning_budget_mode: BudgetMode::CallCount,
    }
}

fn arm(env: EnvSpec, agent: AgentSpec) -> Arm {
    Arm { env, agent }
}

pub fn boulder_epsilon_greedy() -> LearnerConfig {
    LearnerConfig { epsilon: 0.1, gamma: 0.9, q0: 1.0, ..Default::default() }
}

pub fn boulder_count_bonus() -> LearnerConfig {
    LearnerConfig { epsilon: 0.1, gamma: 0.9, beta: 0.1, q0: 0.1, ..Default::default() }
}

pub fn boulder_go_explore() -> LearnerConfig {
    LearnerConfig {
        go_explore: GoExploreConfig { explore_steps: 3, selection_power: 2.0, untried_first: true, exploit: true },
        ..Default::default()
    }
}

fn fig2_boulder() -> ExperimentConfig {
    let mut arms = Vec::new();
    for h in BOULDER_HEIGHTS {
        let env = EnvSpec::new("boulder", json!({"height": h, "num_grips": 3}));
        arms.push(arm(env.clone(), AgentSpec::new("q_learning", boulder_epsilon_greedy()).labelled("epsilon_greedy")));
        arms.push(arm(env.clone(), AgentSpec::new("count_bonus", boulder_count_bonus())));
        arms.push(arm(env, AgentSpec::new("go_explore", boulder_go_explore())));
    }
    base("fig2-boulder", arms, 20_000)
}

fn fig3_memory() -> ExperimentConfig {
    let cfg = LearnerConfig { alpha: 0.5, epsilon: 0.05, gamma: 1.0, ..Default::default() };
    let arms = MEMORY_FRAMES
        .iter()
        .map(|&k| {
            let mut env = EnvSpec::new("memory_corridor", json!({"num_doors": 3}));
            env.framestack = Some(k);
            arm(env, AgentSpec::new("q_learning", cfg.clone()))
        })
        .collect();
    ExperimentConfig { bin_size: 500, ..base("fig3-memory", arms, 100_000) }
}

fn fig3_supermarket() -> ExperimentConfig {
    let q = LearnerConfig { alpha: 0.5, epsilon: 0.1, gamma: 1.0, ..Default::default() };
    let planned = LearnerConfig { planning_budget: 5, ..q.clone() };
    let env = EnvSpec::new("supermarket", json!({"noise": 0.0}));
    let arms = vec![
        arm(env.clone(), AgentSpec::new("q_learning", q)),
        arm(env.clone(), AgentSpec::new("dyna", planned.clone())),
        arm(env, AgentSpec::new("prioritized_sweeping", planned)),
    ];
    base("fig3-supermarket", arms, 20_000)
}

fn roadrunner_onoff() -> ExperimentConfig {
    let cfg = LearnerConfig { alpha: 0.1, epsilon: 0.2, gamma: 1.0, ..Default::default() };
    let env = EnvSpec::new("roadrunner", json!({"width": 6}));
    let arms = vec![
        arm(env.clone(), AgentSpec::new("q_learning", cfg.clone())),
        arm(env, AgentSpec::new("sarsa", cfg)),
    ];
    ExperimentConfig { bin_size: 500, eval: EvalMode::GreedyEvery(1_000), ..base("roadrunner-onoff", arms, 50_000) }
}

fn study_nstep() -> ExperimentConfig {
    let env = EnvSpec::new("study", json!({"num_other_actions": 5, "reward_noise_sigma": 2.0}));
    let arms = [(Some(1), "n=1"), (None, "n=inf")]
        .into_iter()
        .map(|(n, label)| {
            let cfg = LearnerConfig { alpha: 0.1, epsilon: 0.1, gamma: 1.0, n, ..Default::default() };
            arm(env.clone(), AgentSpec::new("nstep_sarsa", cfg).labelled(label))
        })
        .collect();
    ExperimentConfig { bin_size: 500, ..base("study-nstep", arms, 100_000) }
}

fn golf_risk() -> ExperimentConfig {
    let env = EnvSpec::new("golf", json!({"stochasticity_level": 0.25}));
    let arms = [-0.5, 0.0, 0.5]
        .into_iter()
        .map(|kappa| {
            let cfg = LearnerConfig { alpha: 0.1, epsilon: 0.1, kappa, ..Default::default() };
            arm(env.clone(), AgentSpec::new("risk_q", cfg).labelled(&format!("kappa={kappa}")))
        })
        .collect();
    ExperimentConfig { bin_size: 500, ..base("golf-risk", arms, 50_000) }
}

fn catch_dim() -> ExperimentConfig {
    let cfg = LearnerConfig { alpha: 0.5, epsilon: 0.05, ..Default::default() };
    let arms = vec![
        arm(EnvSpec::new("catch", json!({"observation_type": "vectorised"})), AgentSpec::new("q_learning", cfg.clone())),
        arm(
            EnvSpec::new("catch", json!({"observation_type": "grid"})),
            AgentSpec::new("q_learning", LearnerConfig { obs_bins: Some(2), ..cfg }),
        ),
    ];
    ExperimentConfig { bin_size: 500, ..base("catch-dim", arms, 30_000) }
}

pub fn tamagotchi_learner() -> LearnerConfig {
    LearnerConfig { alpha: 0.1, epsilon: 0.1, gamma: 0.9, ..Default::default() }
}

fn tamagotchi_signal() -> ExperimentConfig {
    let arms = [0.05, 50.0]
        .into_iter()
        .map(|tau| arm(EnvSpec::new("tamagotchi", json!({"tau": tau})), AgentSpec::new("q_learning", tamagotchi_learner())))
        .collect();
    ExperimentConfig { bin_size: 1_000, ..base("tamagotchi-signal", arms, 100_000) }
}

pub fn trashbot_reinforce() -> LearnerConfig {
    LearnerConfig {
        gamma: 1.0,
        policy: PolicyConfig { learning_rate: 3e-4, init_std: 1.0, baseline_rate: 0.05, features: FeatureMap::Arm },
        ..Default::default()
    }
}

fn trashbot_bins() -> ExperimentConfig {
    let arms = vec![
        arm(
            EnvSpec::new("trashbot", json!({"action_mode": "continuous"})),
            AgentSpec::new("reinforce", trashbot_reinforce()).labelled("reinforce_continuous"),
        ),
        arm(
            EnvSpec::new("trashbot", json!({"action_mode": "discrete", "num_bins": 3})),
            AgentSpec::new("q_learning", LearnerConfig { alpha: 0.2, epsilon: 0.1, obs_bins: Some(8), ..Default::default() })
                .labelled("q_learning_bins3"),
        ),
    ];
    ExperimentConfig { bin_size: 1_000, ..base("trashbot-bins", arms, 100_000) }
}

pub fn preset(name: &str) -> Result<ExperimentConfig, ExperimentError> {
    Ok(match name {
        "fig2-boulder" => fig2_boulder(),
        "fig3-memory" => fig3_memory(),
        "fig3-supermarket" => fig3_supermarket(),
        "roadrunner-onoff" => roadrunner_onoff(),
        "study-nstep" => study_nstep(),
        "golf-risk" => golf_risk(),
        "catch-dim" => catch_dim(),
        "tamagotchi-signal" => tamagotchi_signal(),
        "trashbot-bins" => trashbot_bins(),
        other => {
            return Err(ExperimentError::UnknownPreset { name: other.to_string(), available: PRESET_NAMES.join(", ") })
        }
    })
}
