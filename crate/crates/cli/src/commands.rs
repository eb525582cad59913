//! Text produced by the non-interactive subcommands.

use std::path::{Path, PathBuf};

use anyhow::Context;
use rlcourse::envs::{self, CATALOG};
use rlcourse_experiments::{
    aggregate, final_means, preset, run_experiment, write_outputs, ExperimentConfig, ExperimentError, PRESET_NAMES,
};

use crate::keymap::KeyMap;
use crate::style::Style;

/// Distinguishes bad input (exit 1) from failures while doing the work (exit 2).
#[derive(Debug)]
pub enum Failure {
    User(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::User(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::User(e) | Failure::Runtime(e) => e,
        }
    }
}

pub type CmdResult<T> = Result<T, Failure>;

pub fn user(e: impl Into<anyhow::Error>) -> Failure {
    Failure::User(e.into())
}

fn runtime(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Runtime(e.into())
}

fn table(style: &Style, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = style.bold(&line(header.to_vec())) + "\n";
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

pub fn list(style: &Style) -> String {
    let rows: Vec<Vec<String>> = CATALOG
        .iter()
        .map(|e| vec![e.label.to_string(), e.name.to_string(), e.challenge.to_string(), e.parameters.to_string()])
        .collect();
    table(style, &["", "environment", "challenge", "parameters"], &rows)
}

pub fn parse_params(text: Option<&str>) -> CmdResult<serde_json::Value> {
    match text {
        None => Ok(serde_json::Value::Null),
        Some(t) => serde_json::from_str(t).with_context(|| format!("--params is not valid JSON: {t}")).map_err(user),
    }
}

pub fn build_env(name: &str, params: &serde_json::Value, seed: u64) -> CmdResult<Box<dyn rlcourse::Environment>> {
    envs::build(name, params, seed).with_context(|| format!("cannot build environment '{name}'")).map_err(user)
}

pub fn inspect(style: &Style, name: &str, params: &serde_json::Value, seed: u64) -> CmdResult<String> {
    let mut env = build_env(name, params, seed)?;
    let info = envs::info(name).expect("built environments are catalogued");
    env.reset(None);
    let (lo, hi) = env.reward_range();
    let keys = KeyMap::for_env(name, env.action_space());
    Ok(format!(
        "{}\nchallenge     {}\nparameters    {}\nobservations  {:?}\nactions       {:?}\nmax steps     {}\nreward range  [{lo}, {hi}]\nplay keys     {}\n\n{}\n",
        style.bold(name),
        info.challenge,
        info.parameters,
        env.observation_space(),
        env.action_space(),
        env.max_steps(),
        keys.describe(),
        env.render()
    ))
}

pub fn preset_list(style: &Style) -> String {
    let rows: Vec<Vec<String>> = PRESET_NAMES
        .iter()
        .map(|name| {
            let cfg = preset(name).expect("listed presets exist");
            let mut agents: Vec<String> = Vec::new();
            for label in cfg.arms.iter().map(|a| a.agent.display_label()) {
                if !agents.contains(&label) {
                    agents.push(label);
                }
            }
            vec![name.to_string(), cfg.arms.len().to_string(), cfg.total_steps.to_string(), agents.join(", ")]
        })
        .collect();
    table(style, &["preset", "arms", "steps", "agents"], &rows)
}

pub fn preset_json(name: &str) -> CmdResult<String> {
    Ok(preset(name).map_err(user)?.to_json())
}

pub struct RunRequest<'a> {
    pub config: Option<&'a Path>,
    pub preset: Option<&'a str>,
    pub out: &'a Path,
    pub seed: Option<u64>,
    pub repetitions: Option<usize>,
}

pub struct RunSummary {
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub table: String,
}

fn load(req: &RunRequest) -> CmdResult<ExperimentConfig> {
    let mut cfg = match (req.config, req.preset) {
        (Some(path), None) => ExperimentConfig::load(path).map_err(user)?,
        (None, Some(name)) => preset(name).map_err(user)?,
        _ => return Err(user(anyhow::anyhow!("give exactly one of --config or --preset"))),
    };
    if let Some(seed) = req.seed {
        cfg.base_seed = seed;
    }
    if let Some(reps) = req.repetitions {
        cfg.repetitions = reps;
    }
    cfg.validate().map_err(user)?;
    Ok(cfg)
}

pub fn run(style: &Style, req: &RunRequest) -> CmdResult<RunSummary> {
    let cfg = load(req)?;
    let record = run_experiment(&cfg).map_err(|e| match e {
        ExperimentError::Config(_) | ExperimentError::UnknownPreset { .. } => user(e),
        other => runtime(other),
    })?;
    let curve = aggregate(&record, cfg.smoothing_window);
    let (csv, svg) = write_outputs(&curve, req.out, &cfg.name).map_err(runtime)?;
    let rows: Vec<Vec<String>> = final_means(&curve)
        .into_iter()
        .map(|(agent, env, mean, stderr)| vec![agent, env, format!("{mean:.3}"), format!("{stderr:.3}")])
        .collect();
    let table = table(style, &["agent", "environment", "final mean return", "stderr"], &rows);
    Ok(RunSummary { csv, svg, table })
}
