//! Environment models that planners can query without stepping the environment.

use crate::error::EnvError;
use crate::rng::RngStream;

/// One possible result of taking an action.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub next_state: usize,
    pub probability: f64,
    pub reward: f64,
    pub terminal: bool,
}

/// A model that can list every successor of a state-action pair with its
/// probability. States and actions are dense indices.
pub trait DescriptiveModel {
    fn num_states(&self) -> usize;
    fn num_actions(&self) -> usize;
    /// States the model can be queried from.
    fn is_valid_state(&self, state: usize) -> bool;
    fn initial_state(&self) -> usize;
    fn describe(&self, state: usize, action: usize, rng: &mut RngStream) -> Result<Vec<Outcome>, EnvError>;

    /// Draws a single successor.
    fn sample(&self, state: usize, action: usize, rng: &mut RngStream) -> Result<Outcome, EnvError> {
        let outcomes = self.describe(state, action, rng)?;
        let probs: Vec<f64> = outcomes.iter().map(|o| o.probability).collect();
        let i = if outcomes.len() == 1 { 0 } else { rng.weighted_index(&probs) };
        let mut o = outcomes[i].clone();
        o.probability = 1.0;
        Ok(o)
    }
}
