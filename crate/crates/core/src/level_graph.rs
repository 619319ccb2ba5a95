//! The layered digraph linking δ-close points of consecutive levels.
//!
//! Vertices are numbered globally in (level, position-in-level) order, so
//! vertex ids double as a lexicographic order on trajectories.

use serde::Serialize;

use crate::instance::{TemporalSampling, Trajectory};
use crate::metric::PointId;

#[derive(Clone, Debug)]
pub struct LevelGraph {
    delta: f64,
    /// `offsets[i]` is the id of the first vertex of level `i`; one extra trailing entry.
    offsets: Vec<usize>,
    points: Vec<PointId>,
    level_of: Vec<usize>,
    successors: Vec<Vec<usize>>,
}

impl LevelGraph {
    /// O(n²) construction; edge `(i,p) -> (i+1,q)` iff `d(p,q) <= delta`.
    pub fn build(p: &TemporalSampling, delta: f64) -> Self {
        let metric = p.metric();
        let mut offsets = Vec::with_capacity(p.len() + 1);
        let mut points = Vec::with_capacity(p.size());
        let mut level_of = Vec::with_capacity(p.size());
        for (i, level) in p.levels().iter().enumerate() {
            offsets.push(points.len());
            points.extend_from_slice(level);
            level_of.extend(std::iter::repeat_n(i, level.len()));
        }
        offsets.push(points.len());

        let mut successors = vec![Vec::new(); points.len()];
        for i in 0..p.len().saturating_sub(1) {
            let next = offsets[i + 1]..offsets[i + 2];
            for v in offsets[i]..offsets[i + 1] {
                successors[v] = next
                    .clone()
                    .filter(|&w| metric.within(points[v], points[w], delta))
                    .collect();
            }
        }
        LevelGraph {
            delta,
            offsets,
            points,
            level_of,
            successors,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn num_levels(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.points.len()
    }

    pub fn num_edges(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn level_vertices(&self, level: usize) -> std::ops::Range<usize> {
        self.offsets[level]..self.offsets[level + 1]
    }

    pub fn vertex(&self, level: usize, pos: usize) -> usize {
        self.offsets[level] + pos
    }

    pub fn level_of(&self, v: usize) -> usize {
        self.level_of[v]
    }

    pub fn position_of(&self, v: usize) -> usize {
        v - self.offsets[self.level_of[v]]
    }

    pub fn point(&self, v: usize) -> PointId {
        self.points[v]
    }

    /// Sorted successor vertex ids (empty on the last level).
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.successors[v]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.successors[from].binary_search(&to).is_ok()
    }

    pub fn trajectory_from_vertices(&self, vertices: &[usize]) -> Trajectory {
        Trajectory::new(vertices.iter().map(|&v| self.points[v]).collect())
    }

    /// Whether every consecutive pair of `tau` is an edge, i.e. `displacement(tau) <= delta`.
    pub fn contains_path(&self, p: &TemporalSampling, tau: &Trajectory) -> bool {
        if tau.len() != self.num_levels() {
            return false;
        }
        let mut prev: Option<usize> = None;
        for (i, &x) in tau.points().iter().enumerate() {
            let Some(pos) = p.position(i, x) else {
                return false;
            };
            let v = self.vertex(i, pos);
            if let Some(u) = prev {
                if !self.has_edge(u, v) {
                    return false;
                }
            }
            prev = Some(v);
        }
        true
    }

    /// For each vertex, whether some path reaches the last level from it.
    pub fn reaches_last_level(&self) -> Vec<bool> {
        let t = self.num_levels();
        let mut ok = vec![false; self.num_vertices()];
        for v in self.level_vertices(t - 1) {
            ok[v] = true;
        }
        for i in (0..t - 1).rev() {
            for v in self.level_vertices(i) {
                ok[v] = self.successors[v].iter().any(|&w| ok[w]);
            }
        }
        ok
    }

    /// The lexicographically smallest first-to-last-level path, if any.
    pub fn first_path(&self) -> Option<Vec<usize>> {
        let ok = self.reaches_last_level();
        let mut v = self.level_vertices(0).find(|&v| ok[v])?;
        let mut path = vec![v];
        while !self.successors[v].is_empty() {
            v = *self.successors[v].iter().find(|&&w| ok[w])?;
            path.push(v);
        }
        Some(path)
    }

    pub fn to_debug_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Vertex {
            level: usize,
            point: PointId,
            successors: Vec<usize>,
        }
        let vertices: Vec<Vertex> = (0..self.num_vertices())
            .map(|v| Vertex {
                level: self.level_of[v],
                point: self.points[v],
                successors: self.successors[v].clone(),
            })
            .collect();
        serde_json::json!({ "delta": self.delta, "vertices": vertices })
    }
}
