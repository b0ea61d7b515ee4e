use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank must be at least 1")]
    InvalidRank,

    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i64, rank: usize },

    #[error("rank mismatch: expected {expected}, got {actual}")]
    RankMismatch { expected: usize, actual: usize },

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("invalid c-matrix: {0}")]
    InvalidCMatrix(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("first exponent component is nonzero at Y{i}({m})")]
    NotPlain { i: usize, m: i64 },

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("tableau is not marginally large")]
    NotMarginallyLarge,

    #[error("invalid X-form: {0}")]
    InvalidXForm(String),

    #[error("not a member: {0}")]
    NotMember(#[from] crate::Violation),

    #[error("a depth limit is required for an infinite crystal")]
    DepthRequired,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// The first condition a candidate element fails when tested for membership
/// in one of the monomial sets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("element does not match the template: {0}")]
    Template(String),
    #[error("condition (1) violated: {0}")]
    Condition1(String),
    #[error("condition (2) violated: {0}")]
    Condition2(String),
    #[error("condition (3) violated: {0}")]
    Condition3(String),
}
