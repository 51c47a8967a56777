use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("terminal sampling failed: {0}")]
    Sampling(String),
    #[error("graph generation failed: {0}")]
    Generation(String),
    #[error("cut tree construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, FlowError>;
