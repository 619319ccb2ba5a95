//! Greedy r-nets.

use crate::metric::{FiniteMetric, PointId};

#[derive(Clone, Debug, PartialEq)]
pub struct NetResult {
    pub chosen: Vec<PointId>,
    pub radius: f64,
}

/// Scans `points` in order, keeping a point iff it is farther than `r` from every kept point.
pub fn greedy_net(m: &FiniteMetric, points: &[PointId], r: f64) -> NetResult {
    let mut chosen: Vec<PointId> = Vec::new();
    for &p in points {
        if chosen.iter().all(|&c| !m.within(c, p, r)) {
            chosen.push(p);
        }
    }
    NetResult { chosen, radius: r }
}

impl NetResult {
    /// Pairwise separation and maximality with respect to `points`.
    pub fn is_net_of(&self, m: &FiniteMetric, points: &[PointId]) -> bool {
        let separated = self.chosen.iter().enumerate().all(|(i, &a)| {
            self.chosen[i + 1..]
                .iter()
                .all(|&b| !m.within(a, b, self.radius))
        });
        let maximal = points
            .iter()
            .all(|&p| self.chosen.iter().any(|&c| m.within(c, p, self.radius)));
        separated && maximal
    }
}
