use thiserror::Error;

/// Errors raised by the deliberation library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point kind mismatch: expected {expected}, found {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the status quo is not a proposal")]
    StatusQuoProposal,
    #[error("agent {index} sits at the status quo and approves no proposal")]
    AgentAtOrigin { index: usize },
    #[error("agent {index} has a non-positive weight")]
    NonPositiveWeight { index: usize },
    #[error("point {0} lies outside the proposal domain of this space")]
    OutOfDomain(String),
    #[error("a deliberation space needs at least one agent")]
    EmptyAgentSet,
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("guard exceeded: {what} is {actual}, limit {limit}")]
    GuardExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("weights cannot be scaled to machine integers")]
    WeightOverflow,
    #[error("method {method} does not apply to {kind} spaces")]
    UnsupportedMethod {
        method: &'static str,
        kind: &'static str,
    },
    #[error("malformed linear system: {0}")]
    MalformedSystem(String),
    #[error("invalid coalition structure: {0}")]
    InvalidStructure(String),
    #[error("invalid transition: {0}")]
    InvalidTransition(String),
    #[error("potential is only defined for integer weights")]
    NonIntegerWeights,
    #[error("support oracle missing for the adversarial scheduler")]
    OracleMissing,
    #[error("scheduler {scheduler} cannot run on {kind} spaces")]
    IncompatibleScheduler {
        scheduler: &'static str,
        kind: &'static str,
    },
    #[error("run exceeded its step bound of {0}")]
    StepBoundExceeded(String),
    #[error("potential did not increase: {before} -> {after}")]
    PotentialNotIncreasing { before: String, after: String },
    #[error("inadmissible parameter: {0}")]
    Inadmissible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
