//! Learning agents.

pub mod agent;
pub mod go_explore;
pub mod planning;
pub mod reinforce;
pub mod tabular_model;
pub mod td;
pub mod value_table;

pub use agent::{build_agent, Agent, Experience, FeatureMap, LearnerConfig, PolicyConfig, AGENT_NAMES};
pub use value_table::ValueTable;
