//! Small reinforcement-learning environments that each isolate one
//! challenge, plus the tabular and policy-gradient methods used to study them.

pub mod agents;
pub mod env;
pub mod envs;
pub mod error;
pub mod model;
pub mod returns;
pub mod rng;
pub mod space;
pub mod wrappers;

pub use env::{Dynamics, Environment, EnvironmentHandle, Info, StepOutcome, Transition};
pub use error::{AgentError, EnvError, SpaceError};
pub use returns::discounted_return;
pub use rng::RngStream;
pub use space::{Discretizer, Element, KeyEncoder, SpaceDescriptor, StateKey};
pub use wrappers::FrameStack;
