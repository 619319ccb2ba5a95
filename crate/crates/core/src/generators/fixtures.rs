//! Small fixed instances.

use crate::error::Result;
use crate::instance::{Clustering, TemporalSampling, Trajectory};
use crate::metric::{FiniteMetric, PointId};

/// Five collinear points spaced `spacing` apart, repeated in two levels.
pub fn line_pair(spacing: f64) -> Result<TemporalSampling> {
    let coords = (0..5).map(|i| vec![i as f64 * spacing]).collect();
    let metric = FiniteMetric::euclidean(1, coords)?;
    let level: Vec<PointId> = (0..5).map(PointId).collect();
    TemporalSampling::new(metric, vec![level.clone(), level])
}

/// The five stationary trajectories of [`line_pair`], with zero median cost.
pub fn line_pair_optimal() -> Clustering {
    (0..5).map(|i| Trajectory::from(vec![i, i])).collect()
}

/// A local optimum of swap-based local search on [`line_pair`] for
/// `spacing <= δ < 2 spacing`: every trajectory shifts one step to the right,
/// except the last which shifts back to the start of its pair.
pub fn line_pair_local_optimum() -> Clustering {
    [(0, 1), (1, 2), (2, 3), (3, 4), (4, 3)]
        .into_iter()
        .map(|(a, b)| Trajectory::from(vec![a, b]))
        .collect()
}
