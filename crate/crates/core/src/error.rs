use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("malformed model document: {0}")]
    Malformed(String),
    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("missing value for feature {0}")]
    MissingFeature(String),
    #[error("unknown level {level:?} for feature {feature}")]
    UnknownLevel { feature: String, level: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("blocking constraint needs a nonempty active set")]
    EmptyBlockingSet,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecourseError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("invalid goal: {0}")]
    InvalidGoal(String),
    #[error("invalid preferences: {0}")]
    InvalidPreferences(String),
    #[error("the current prediction already satisfies the goal")]
    GoalAlreadySatisfied,
    #[error("no candidate changes: {0}")]
    NoCandidates(String),
}

#[derive(Debug, Error)]
pub enum ReceiptError {
    #[error("cannot sign a receipt without plans")]
    NoPlans,
    #[error("plan {0} is not verified")]
    UnverifiedPlan(usize),
    #[error("malformed receipt: {0}")]
    Malformed(String),
    #[error("malformed key: {0}")]
    MalformedKey(String),
    #[error("signing failed: {0}")]
    Signing(String),
}
