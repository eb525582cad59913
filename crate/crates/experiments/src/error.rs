use std::path::PathBuf;

use rlcourse::{AgentError, EnvError};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("unknown preset '{name}'; available presets: {available}")]
    UnknownPreset { name: String, available: String },
    #[error("environment error in {context}")]
    Env { context: String, source: EnvError },
    #[error("agent error in {context}")]
    Agent { context: String, source: AgentError },
    #[error("{context}: learner made {calls} model calls in one step, budget is {budget}")]
    Budget { context: String, calls: usize, budget: usize },
    #[error("cannot parse {path}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("cannot access {path}")]
    Io { path: PathBuf, source: std::io::Error },
}
