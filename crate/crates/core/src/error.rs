use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in {source_name}: {detail}")]
    Parse { source_name: String, detail: String },

    #[error("non-finite weight at row {row}, column {col}")]
    NonFiniteWeight { row: usize, col: usize },

    #[error("weight matrix is not square: {0}")]
    NotSquare(String),

    #[error("network must have at least one node")]
    EmptyNetwork,

    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown node label `{0}`")]
    UnknownLabel(String),

    #[error("pair swap needs two distinct nodes, got `{0}` twice")]
    SwapSameNode(String),

    #[error("cycle network needs n >= 3, got {0}")]
    CycleTooSmall(usize),

    #[error("relation is empty")]
    EmptyRelation,

    #[error("relation or correspondence is invalid: {0}")]
    InvalidRelation(String),

    #[error("instance too large for exact search: {what} needs {required} steps, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("filtration only holds simplices up to dimension {available}; dimension {requested} requested")]
    SkeletonTooSmall { requested: usize, available: usize },

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("complex is not closed under faces: {0}")]
    NotClosed(String),

    #[error("first complex is not a subcomplex of the second")]
    NotSubcomplex,

    #[error("vertex map is not simplicial: {0}")]
    NotSimplicial(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("cover is not a cover of simplices")]
    NotCoverOfSimplices,

    #[error("relations are not nested (R must be contained in R')")]
    InclusionViolated,

    #[error("invalid arena: {0}")]
    InvalidArena(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("distance matrix contains an infinite entry between `{a}` and `{b}`")]
    InfiniteDistance { a: String, b: String },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(source_name: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.into(),
            detail: detail.into(),
        }
    }

    /// True for errors caused by exceeding a configured search or size budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
