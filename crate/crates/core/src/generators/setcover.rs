//! Set cover as a one-level dominating-set instance.
//!
//! Set points come first (`S_j` is point `j`), then element points
//! (`u_i` is point `m + i` for `m` sets). Two set points are at distance 1,
//! an element and a set containing it are at distance 1, and every other
//! pair of distinct points is at distance 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::TemporalSampling;
use crate::metric::{FiniteMetric, PointId, Validation};

/// `{"universe": N, "sets": [[idx, ...], ...]}` with zero-based element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetCoverInstance {
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let sc = SetCoverInstance { universe, sets };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        for (j, set) in self.sets.iter().enumerate() {
            for (a, &u) in set.iter().enumerate() {
                if u >= self.universe {
                    return Err(Error::InvalidParameter(format!(
                        "set {j} names element {u} outside a universe of {}",
                        self.universe
                    )));
                }
                if set[a + 1..].contains(&u) {
                    return Err(Error::InvalidParameter(format!(
                        "set {j} lists element {u} twice"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `S_1 = {u1,u2}`, `S_2 = {u2,u3,u4,u6}`, `S_3 = {u2,u3,u5}`, `S_4 = {u5}`, `S_5 = {u5,u6}`.
    pub fn example() -> Self {
        SetCoverInstance::new(
            6,
            vec![
                vec![0, 1],
                vec![1, 2, 3, 5],
                vec![1, 2, 4],
                vec![4],
                vec![4, 5],
            ],
        )
        .expect("fixture is valid")
    }

    pub fn set_point(&self, j: usize) -> PointId {
        PointId(j)
    }

    pub fn element_point(&self, i: usize) -> PointId {
        PointId(self.sets.len() + i)
    }

    /// Human-readable name of a point: `S<j+1>` or `u<i+1>`.
    pub fn point_name(&self, p: PointId) -> String {
        let m = self.sets.len();
        if p.0 < m {
            format!("S{}", p.0 + 1)
        } else {
            format!("u{}", p.0 - m + 1)
        }
    }
}

pub fn gen_setcover_metric(sc: &SetCoverInstance) -> Result<TemporalSampling> {
    sc.validate()?;
    let m = sc.sets.len();
    let n = m + sc.universe;
    if n == 0 {
        return Err(Error::InvalidParameter("set-cover instance is empty".into()));
    }
    let mut rows = vec![vec![2.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for a in 0..m {
        for b in 0..m {
            if a != b {
                rows[a][b] = 1.0;
            }
        }
    }
    for (j, set) in sc.sets.iter().enumerate() {
        for &u in set {
            rows[j][m + u] = 1.0;
            rows[m + u][j] = 1.0;
        }
    }
    let metric = FiniteMetric::from_matrix(rows, Validation::Full)?;
    TemporalSampling::new(metric, vec![(0..n).map(PointId).collect()])
}
