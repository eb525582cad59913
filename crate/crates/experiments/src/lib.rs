//! Seeded experiment runner with learning-curve aggregation, CSV/SVG output
//! and named presets for each challenge.

pub mod aggregate;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod runner;

pub use aggregate::{aggregate, final_means, CurveRow};
pub use config::{AgentSpec, Arm, BudgetMode, EnvSpec, EvalMode, ExperimentConfig};
pub use error::ExperimentError;
pub use output::{to_csv, to_svg, write_outputs, CSV_HEADER};
pub use presets::{preset, PRESET_NAMES};
pub use runner::{run_experiment, RunRecord};
