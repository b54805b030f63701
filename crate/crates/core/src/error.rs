use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A `SimParams` invariant does not hold. The payload names the field,
    /// e.g. "theta out of range".
    #[error("{0}")]
    InvalidParams(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("index {index} out of range for M={m}")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("budget exhausted: found {found} of {wanted} codewords after {attempts} candidates")]
    BudgetExhausted {
        found: usize,
        wanted: usize,
        attempts: usize,
    },

    #[error("exponent nonpositive")]
    ExponentNonpositive,

    #[error("capacity nonpositive")]
    CapacityNonpositive,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown adversary '{0}'")]
    UnknownAdversary(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
