use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("no eigenvalue available over the rationals: {0}")]
    RootsUnavailable(String),
    #[error("commutator rank exceeds one (rank {0})")]
    RankTooHigh(usize),
    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),
    #[error("quiver is not connected")]
    DisconnectedQuiver,
    #[error("quiver has an oriented cycle")]
    CyclicQuiver,
    #[error("quiver is not an oriented cycle")]
    NotACycle,
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("not a nearly representation: {0}")]
    NotNearly(String),
    #[error("relations do not hold: {0}")]
    NotAModule(String),
    #[error("subspaces are not closed under the arrow maps: {0}")]
    InvalidSubrep(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal assertion failed: {0}")]
    AssertionFailed(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("no intertwiner with the requested evaluation exists")]
    NoLift,
    #[error("generation target is infeasible: {0}")]
    Infeasible(String),
    #[error("generator retries exhausted: {0}")]
    RetriesExhausted(String),
    #[error("bad tube data: {0}")]
    BadTubeData(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
