use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("invalid space: {0}")]
    Invalid(String),
    #[error("value {0} is not an element of the space")]
    NotContained(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("state key does not fit in 64 bits")]
    KeyOverflow,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AgentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("model error: {0}")]
    Model(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Env(#[from] EnvError),
}
