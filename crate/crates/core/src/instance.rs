//! Temporal samplings, trajectories, clusterings and their costs.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetric, PointId};

/// A sequence of non-empty point sets ("levels") in one metric space.
#[derive(Clone, Debug)]
pub struct TemporalSampling {
    metric: FiniteMetric,
    levels: Vec<Vec<PointId>>,
    positions: Vec<HashMap<PointId, usize>>,
}

impl PartialEq for TemporalSampling {
    fn eq(&self, other: &Self) -> bool {
        self.metric == other.metric && self.levels == other.levels
    }
}

impl TemporalSampling {
    pub fn new(metric: FiniteMetric, levels: Vec<Vec<PointId>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::NoLevels);
        }
        let mut positions = Vec::with_capacity(levels.len());
        for (level, points) in levels.iter().enumerate() {
            if points.is_empty() {
                return Err(Error::EmptyLevel { level });
            }
            let mut index = HashMap::with_capacity(points.len());
            for (pos, &p) in points.iter().enumerate() {
                metric.check_point(p).map_err(|_| {
                    Error::Structural(format!(
                        "level {level} position {pos}: point {p} out of range for {} points",
                        metric.len()
                    ))
                })?;
                if index.insert(p, pos).is_some() {
                    return Err(Error::DuplicateInLevel { level, id: p });
                }
            }
            positions.push(index);
        }
        Ok(TemporalSampling {
            metric,
            levels,
            positions,
        })
    }

    pub fn metric(&self) -> &FiniteMetric {
        &self.metric
    }

    pub fn set_tolerance(&mut self, tolerance: f64) {
        self.metric = self.metric.clone().with_tolerance(tolerance);
    }

    /// Number of levels `t`.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[Vec<PointId>] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &[PointId] {
        &self.levels[i]
    }

    /// Total number of points over all levels (`n`).
    pub fn size(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn max_level_size(&self) -> usize {
        self.levels.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn position(&self, level: usize, p: PointId) -> Option<usize> {
        self.positions.get(level)?.get(&p).copied()
    }

    /// Distinct points appearing in any level, in increasing id order.
    pub fn support(&self) -> Vec<PointId> {
        let mut all: Vec<PointId> = self.levels.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn validate_trajectory(&self, tau: &Trajectory) -> Result<()> {
        if tau.len() != self.len() {
            return Err(Error::Structural(format!(
                "trajectory has {} points but the sampling has {} levels",
                tau.len(),
                self.len()
            )));
        }
        for (i, &p) in tau.points().iter().enumerate() {
            if self.position(i, p).is_none() {
                return Err(Error::Structural(format!(
                    "trajectory point {p} is not in level {i}"
                )));
            }
        }
        Ok(())
    }

    pub fn validate_clustering(&self, c: &Clustering) -> Result<()> {
        c.trajectories().iter().try_for_each(|tau| self.validate_trajectory(tau))
    }
}

/// One point per level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trajectory(Vec<PointId>);

impl Trajectory {
    pub fn new(points: Vec<PointId>) -> Self {
        Trajectory(points)
    }

    pub fn points(&self) -> &[PointId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn at(&self, level: usize) -> PointId {
        self.0[level]
    }

    /// Largest distance between consecutive points; zero for a single level.
    pub fn displacement(&self, metric: &FiniteMetric) -> f64 {
        self.0
            .windows(2)
            .map(|w| metric.dist(w[0], w[1]))
            .fold(0.0, f64::max)
    }
}

impl From<Vec<usize>> for Trajectory {
    fn from(v: Vec<usize>) -> Self {
        Trajectory(v.into_iter().map(PointId).collect())
    }
}

/// A multiset of trajectories.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    trajectories: Vec<Trajectory>,
}

impl Clustering {
    pub fn new(trajectories: Vec<Trajectory>) -> Self {
        Clustering { trajectories }
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn push(&mut self, tau: Trajectory) {
        self.trajectories.push(tau);
    }

    pub fn centers(&self, level: usize) -> impl Iterator<Item = PointId> + '_ {
        self.trajectories.iter().map(move |t| t.at(level))
    }

    pub fn displacement(&self, metric: &FiniteMetric) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyClustering);
        }
        Ok(self
            .trajectories
            .iter()
            .map(|t| t.displacement(metric))
            .fold(0.0, f64::max))
    }
}

impl FromIterator<Trajectory> for Clustering {
    fn from_iter<I: IntoIterator<Item = Trajectory>>(iter: I) -> Self {
        Clustering::new(iter.into_iter().collect())
    }
}

/// Spatial cost objective: k-center, k-median or k-means analogue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Center,
    Median,
    Means,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::Center, Objective::Median, Objective::Means];

    /// Per-level cost from the distances of each point to its nearest center.
    pub fn level_cost(self, nearest: impl IntoIterator<Item = f64>) -> f64 {
        let nearest = nearest.into_iter();
        match self {
            Objective::Center => nearest.fold(0.0, f64::max),
            Objective::Median => nearest.sum(),
            Objective::Means => nearest.map(|d| d * d).sum(),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Center => "center",
            Objective::Median => "median",
            Objective::Means => "means",
        })
    }
}

/// Distance from `p` to the nearest center of `c` at `level`.
pub fn nearest_center_distance(
    metric: &FiniteMetric,
    c: &Clustering,
    level: usize,
    p: PointId,
) -> f64 {
    c.centers(level)
        .map(|x| metric.dist(p, x))
        .fold(f64::INFINITY, f64::min)
}

pub fn level_cost(p: &TemporalSampling, c: &Clustering, level: usize, objective: Objective) -> f64 {
    let metric = p.metric();
    objective.level_cost(
        p.level(level)
            .iter()
            .map(|&q| nearest_center_distance(metric, c, level, q)),
    )
}

/// `rad_inf`, `rad_1` or `rad_2`: the worst level's cost.
pub fn spatial_cost(p: &TemporalSampling, c: &Clustering, objective: Objective) -> f64 {
    (0..p.len())
        .map(|i| level_cost(p, c, i, objective))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusteringStats {
    pub k: usize,
    pub rad_inf: f64,
    pub rad_1: f64,
    pub rad_2: f64,
    pub delta: f64,
}

impl ClusteringStats {
    pub fn compute(p: &TemporalSampling, c: &Clustering) -> Result<Self> {
        p.validate_clustering(c)?;
        let delta = c.displacement(p.metric())?;
        Ok(ClusteringStats {
            k: c.len(),
            rad_inf: spatial_cost(p, c, Objective::Center),
            rad_1: spatial_cost(p, c, Objective::Median),
            rad_2: spatial_cost(p, c, Objective::Means),
            delta,
        })
    }

    pub fn radius(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Center => self.rad_inf,
            Objective::Median => self.rad_1,
            Objective::Means => self.rad_2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    TooManyTrajectories { count: usize, k: usize },
    Radius { cost: f64, r: f64 },
    Displacement { delta: f64, bound: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooManyTrajectories { count, k } => {
                write!(f, "{count} trajectories > k = {k}")
            }
            Violation::Radius { cost, r } => write!(f, "spatial cost {cost} > r = {r}"),
            Violation::Displacement { delta, bound } => {
                write!(f, "displacement {delta} > delta = {bound}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub stats: ClusteringStats,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `|c| <= k`, cost `<= r` and displacement `<= delta`, all closed.
pub fn check_solution(
    p: &TemporalSampling,
    c: &Clustering,
    k: usize,
    r: f64,
    delta: f64,
    objective: Objective,
) -> Result<CheckReport> {
    let stats = ClusteringStats::compute(p, c)?;
    let metric = p.metric();
    let mut violations = Vec::new();
    if stats.k > k {
        violations.push(Violation::TooManyTrajectories { count: stats.k, k });
    }
    let cost = stats.radius(objective);
    if !metric.leq(cost, r) {
        violations.push(Violation::Radius { cost, r });
    }
    if !metric.leq(stats.delta, delta) {
        violations.push(Violation::Displacement {
            delta: stats.delta,
            bound: delta,
        });
    }
    Ok(CheckReport { stats, violations })
}
