use thiserror::Error;

use crate::stl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid interval [{lo}, {hi}]: bounds must satisfy 0 <= lo <= hi")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid box: lo must be strictly below hi on every axis and all bounds finite")]
    InvalidBox,
    #[error("invalid predicate: {0}")]
    InvalidPredicate(String),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown region `{0}`")]
    UnknownRegion(String),
    #[error("interval [{lo}, {hi}] contains no sample at period {ts} s")]
    EmptyWindow { lo: f64, hi: f64, ts: f64 },
    #[error("trace too short: evaluation needs sample {needed} but the trace has {len} samples")]
    InsufficientTrace { needed: usize, len: usize },
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),
    #[error("non-finite boundary condition")]
    NonfiniteInput,
    #[error("segment duration must be positive and finite, got {0}")]
    DegenerateDuration(f64),
    #[error("no sample time falls inside the segment")]
    DegenerateSampling,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid mission: {0}")]
    InvalidSpec(String),
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("power-line inspection needs an even number of agents, got {0}")]
    OddAgentCount(usize),
    #[error("power-line inspection needs 4 pole regions, got {0}")]
    MissingPoles(usize),
    #[error("formula horizon {horizon} s exceeds the mission duration {duration} s")]
    HorizonExceedsDuration { horizon: f64, duration: f64 },
}
