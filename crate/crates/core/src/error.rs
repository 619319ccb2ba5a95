use thiserror::Error;

use crate::metric::PointId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {id} is out of range for a universe of {size} points")]
    InvalidPoint { id: PointId, size: usize },

    #[error("spread is undefined: support needs two points at positive distance")]
    DegenerateSpread,

    #[error("clustering has no trajectories")]
    EmptyClustering,

    #[error("instance has no levels")]
    NoLevels,

    #[error("level {level} is empty")]
    EmptyLevel { level: usize },

    #[error("level {level} lists point {id} more than once")]
    DuplicateInLevel { level: usize, id: PointId },

    #[error("distance matrix: {0}")]
    InvalidMatrix(String),

    #[error(
        "triangle inequality violated: d({a},{c}) = {ac} > d({a},{b}) + d({b},{c}) = {ab} + {bc}"
    )]
    TriangleViolation {
        a: usize,
        b: usize,
        c: usize,
        ab: f64,
        bc: f64,
        ac: f64,
    },

    #[error("coordinates: {0}")]
    InvalidCoordinates(String),

    #[error("structurally invalid: {0}")]
    Structural(String),

    #[error("invalid centers: {0}")]
    InvalidCenters(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cnf: {0}")]
    Cnf(String),

    #[error("{what} budget of {limit} exceeded")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("flow invariant broken: {0}")]
    FlowInvariant(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}
