//! Temporal clustering: trajectories through a sequence of point sets,
//! scored by k-center, k-median or k-means cost per level and by the largest
//! step between consecutive levels.

pub mod error;
pub mod flow;
pub mod generators;
pub mod instance;
pub mod io;
pub mod kcenter;
pub mod level_graph;
pub mod median;
pub mod metric;
pub mod nets;
pub mod oracle;

pub use error::{Error, Result};
pub use instance::{
    check_solution, spatial_cost, CheckReport, Clustering, ClusteringStats, Objective,
    TemporalSampling, Trajectory, Violation,
};
pub use kcenter::{Infeasibility, SolveOutcome};
pub use metric::{FiniteMetric, PointId, Validation};
