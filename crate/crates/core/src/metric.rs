//! Finite metric spaces.
//!
//! Two representations are supported: an explicit symmetric distance matrix
//! and points with Euclidean coordinates. Every distance comparison against a
//! radius goes through [`FiniteMetric::within`], which applies the metric's
//! absolute tolerance (zero by default, i.e. exact closed `<=`).

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a point in the universe of a [`FiniteMetric`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub usize);

impl PointId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<usize> for PointId {
    fn from(i: usize) -> Self {
        PointId(i)
    }
}

/// Whether to run the O(n³) metric axioms check on an explicit matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Validation {
    #[default]
    Full,
    Skip,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricKind {
    /// Row-major `n × n` matrix.
    Matrix { n: usize, dist: Vec<f64> },
    Euclidean { dim: usize, coords: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetric {
    kind: MetricKind,
    tolerance: f64,
}

impl FiniteMetric {
    /// Builds an explicit metric from its rows, validating the axioms unless told not to.
    pub fn from_matrix(rows: Vec<Vec<f64>>, validation: Validation) -> Result<Self> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend(row);
        }
        let metric = FiniteMetric {
            kind: MetricKind::Matrix { n, dist },
            tolerance: 0.0,
        };
        if validation == Validation::Full {
            metric.validate_matrix()?;
        }
        Ok(metric)
    }

    pub fn euclidean(dim: usize, coords: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCoordinates("dimension must be positive".into()));
        }
        let mut seen = HashSet::with_capacity(coords.len());
        for (i, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::InvalidCoordinates(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    c.len()
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidCoordinates(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
            // +0.0 folds -0.0 into +0.0 so both hash alike.
            let key: Vec<u64> = c.iter().map(|x| (x + 0.0).to_bits()).collect();
            if !seen.insert(key) {
                return Err(Error::InvalidCoordinates(format!(
                    "point {i} duplicates an earlier point"
                )));
            }
        }
        Ok(FiniteMetric {
            kind: MetricKind::Euclidean { dim, coords },
            tolerance: 0.0,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance.max(0.0);
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            MetricKind::Matrix { n, .. } => *n,
            MetricKind::Euclidean { coords, .. } => coords.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn check_point(&self, p: PointId) -> Result<()> {
        if p.0 < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidPoint {
                id: p,
                size: self.len(),
            })
        }
    }

    pub fn distance(&self, a: PointId, b: PointId) -> Result<f64> {
        self.check_point(a)?;
        self.check_point(b)?;
        Ok(self.dist(a, b))
    }

    /// Distance without range checks; ids must be valid.
    #[inline]
    pub fn dist(&self, a: PointId, b: PointId) -> f64 {
        match &self.kind {
            MetricKind::Matrix { n, dist } => dist[a.0 * n + b.0],
            MetricKind::Euclidean { coords, .. } => coords[a.0]
                .iter()
                .zip(&coords[b.0])
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
        }
    }

    /// Closed comparison `d(a, b) <= radius` under the metric's tolerance.
    #[inline]
    pub fn within(&self, a: PointId, b: PointId, radius: f64) -> bool {
        self.dist(a, b) <= radius + self.tolerance
    }

    /// Closed comparison of two reals under the metric's tolerance.
    #[inline]
    pub fn leq(&self, x: f64, y: f64) -> bool {
        x <= y + self.tolerance
    }

    pub fn ball_members(
        &self,
        candidates: &[PointId],
        center: PointId,
        radius: f64,
    ) -> Result<Vec<PointId>> {
        self.check_point(center)?;
        for &p in candidates {
            self.check_point(p)?;
        }
        Ok(candidates
            .iter()
            .copied()
            .filter(|&p| self.within(center, p, radius))
            .collect())
    }

    /// Largest pairwise distance over `support`; zero for fewer than two points.
    pub fn diameter(&self, support: &[PointId]) -> f64 {
        let mut diam = 0.0_f64;
        for (i, &a) in support.iter().enumerate() {
            for &b in &support[i + 1..] {
                diam = diam.max(self.dist(a, b));
            }
        }
        diam
    }

    /// Smallest positive pairwise distance over `support`.
    pub fn min_positive_distance(&self, support: &[PointId]) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, &a) in support.iter().enumerate() {
            for &b in &support[i + 1..] {
                let d = self.dist(a, b);
                if d > 0.0 && best.is_none_or(|m| d < m) {
                    best = Some(d);
                }
            }
        }
        best
    }

    /// Diameter over minimum positive distance.
    pub fn spread(&self, support: &[PointId]) -> Result<f64> {
        for &p in support {
            self.check_point(p)?;
        }
        let min = self
            .min_positive_distance(support)
            .ok_or(Error::DegenerateSpread)?;
        Ok(self.diameter(support) / min)
    }

    fn validate_matrix(&self) -> Result<()> {
        let MetricKind::Matrix { n, dist } = &self.kind else {
            return Ok(());
        };
        let n = *n;
        let d = |i: usize, j: usize| dist[i * n + j];
        for i in 0..n {
            for j in 0..n {
                let v = d(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i},{j}) = {v} is not a finite nonnegative real"
                    )));
                }
                if i == j && v != 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "diagonal entry ({i},{i}) = {v} is not zero"
                    )));
                }
                if i != j && v == 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "distinct points {i} and {j} are at distance zero"
                    )));
                }
                if v != d(j, i) {
                    return Err(Error::InvalidMatrix(format!(
                        "asymmetric: ({i},{j}) = {v} but ({j},{i}) = {}",
                        d(j, i)
                    )));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (ab, bc, ac) = (d(a, b), d(b, c), d(a, c));
                    if ac > ab + bc + self.tolerance {
                        return Err(Error::TriangleViolation { a, b, c, ab, bc, ac });
                    }
                }
            }
        }
        Ok(())
    }
}
