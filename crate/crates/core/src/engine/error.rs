use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid term `{term}`: {reason}")]
    InvalidTerm { term: String, reason: String },
    #[error("invalid variable `{variable}`: {reason}")]
    InvalidVariable { variable: String, reason: String },
    #[error("model integrity: {0}")]
    ModelIntegrity(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("no rule fired: aggregated output mass {mass:e} is below threshold")]
    NoRuleFired { mass: f64 },
}
