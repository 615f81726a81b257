//! Error types shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("{what} {value} outside supported range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("undefined ratio: {0}")]
    UndefinedRatio(&'static str),

    #[error("invalid curve `{label}`: {reason}")]
    InvalidCurve { label: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("cash-flow schedule has no sign change; IRR is undefined")]
    NoSignChange,

    #[error("schedule has no investment outlay; SIR is undefined")]
    ZeroInvestment,

    #[error("missing data file `{0}`")]
    MissingData(String),

    #[error("data file `{file}`: {reason}")]
    MalformedData { file: String, reason: String },

    #[error("capacity-factor profile is empty or all-zero")]
    EmptyProfile,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, EngineError>;
