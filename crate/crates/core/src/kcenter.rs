//! Temporal k-center solvers: exact-k via nets and minimum flow, the greedy
//! set-cover solver for exact `(r, δ)`, and the bicriteria variant.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::CenterNetwork;
use crate::instance::{Clustering, TemporalSampling, Trajectory};
use crate::level_graph::LevelGraph;
use crate::metric::PointId;
use crate::nets::greedy_net;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Infeasibility {
    NetTooLarge { level: usize, size: usize, k: usize },
    FlowInfeasible,
    FlowValueExceeds { value: u64, bound: usize },
    Uncovered { remaining: usize, level: usize, point: PointId },
    NoPath,
    LevelTooLarge { level: usize, size: usize, k: usize },
    PotentialTooHigh { w: f64, bound: f64 },
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::NetTooLarge { level, size, .. } => {
                write!(f, "net-size {size} > k at level {level}")
            }
            Infeasibility::FlowInfeasible => f.write_str("flow network admits no feasible flow"),
            Infeasibility::FlowValueExceeds { value, bound } => {
                write!(f, "minimum flow value {value} > {bound}")
            }
            Infeasibility::Uncovered {
                remaining,
                level,
                point,
            } => write!(
                f,
                "{remaining} points cannot be covered, including point {point} at level {level}"
            ),
            Infeasibility::NoPath => f.write_str("no trajectory of the given displacement exists"),
            Infeasibility::LevelTooLarge { level, size, k } => {
                write!(f, "level {level} has {size} points > k = {k}")
            }
            Infeasibility::PotentialTooHigh { w, bound } => {
                write!(f, "final potential {w} > {bound}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome {
    Clustering(Clustering),
    Infeasible(Infeasibility),
}

impl SolveOutcome {
    pub fn clustering(&self) -> Option<&Clustering> {
        match self {
            SolveOutcome::Clustering(c) => Some(c),
            SolveOutcome::Infeasible(_) => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveOutcome::Clustering(_))
    }
}

pub(crate) fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be a finite nonnegative real, got {x}"
        )))
    }
}

pub(crate) fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    Ok(())
}

/// The greedy `radius`-net of every level, in input order.
pub fn level_nets(p: &TemporalSampling, radius: f64) -> Vec<Vec<PointId>> {
    p.levels()
        .iter()
        .map(|level| greedy_net(p.metric(), level, radius).chosen)
        .collect()
}

fn flow_clustering(
    p: &TemporalSampling,
    centers: &[Vec<PointId>],
    gamma: f64,
    bound: usize,
) -> Result<SolveOutcome> {
    let network = CenterNetwork::build(p, centers, gamma)?;
    let Some(flow) = network.min_feasible_flow() else {
        return Ok(SolveOutcome::Infeasible(Infeasibility::FlowInfeasible));
    };
    if flow.value > bound as u64 {
        return Ok(SolveOutcome::Infeasible(Infeasibility::FlowValueExceeds {
            value: flow.value,
            bound,
        }));
    }
    Ok(SolveOutcome::Clustering(Clustering::new(
        network.decompose(&flow)?,
    )))
}

/// Returns a `(k, 2r, 2r + δ)`-clustering or certifies that no `(k, r, δ)`-clustering exists.
pub fn solve_exact_k(p: &TemporalSampling, k: usize, r: f64, delta: f64) -> Result<SolveOutcome> {
    check_k(k)?;
    check_nonneg("r", r)?;
    check_nonneg("delta", delta)?;
    let nets = level_nets(p, 2.0 * r);
    for (level, net) in nets.iter().enumerate() {
        if net.len() > k {
            return Ok(SolveOutcome::Infeasible(Infeasibility::NetTooLarge {
                level,
                size: net.len(),
                k,
            }));
        }
    }
    flow_clustering(p, &nets, 2.0 * r + delta, k)
}

/// Returns a `(2k, 2r, r + δ)`-clustering or certifies that no `(k, r, δ)`-clustering exists.
pub fn solve_bicriteria(
    p: &TemporalSampling,
    k: usize,
    r: f64,
    delta: f64,
) -> Result<SolveOutcome> {
    check_k(k)?;
    check_nonneg("r", r)?;
    check_nonneg("delta", delta)?;
    let nets = level_nets(p, 2.0 * r);
    flow_clustering(p, &nets, r + delta, 2 * k)
}

/// Covered flags per `(level, position)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageState {
    covered: Vec<Vec<bool>>,
    uncovered: usize,
}

impl CoverageState {
    pub fn new(p: &TemporalSampling) -> Self {
        CoverageState {
            covered: p.levels().iter().map(|l| vec![false; l.len()]).collect(),
            uncovered: p.size(),
        }
    }

    pub fn uncovered(&self) -> usize {
        self.uncovered
    }

    pub fn is_covered(&self, level: usize, pos: usize) -> bool {
        self.covered[level][pos]
    }

    pub fn first_uncovered(&self) -> Option<(usize, usize)> {
        self.covered
            .iter()
            .enumerate()
            .find_map(|(i, l)| l.iter().position(|&c| !c).map(|pos| (i, pos)))
    }

    /// Marks `tube(tau, r)` as covered and returns how many points were new.
    pub fn cover_tube(&mut self, p: &TemporalSampling, tau: &Trajectory, r: f64) -> usize {
        let metric = p.metric();
        let mut fresh = 0;
        for (i, level) in p.levels().iter().enumerate() {
            let x = tau.at(i);
            for (pos, &q) in level.iter().enumerate() {
                if !self.covered[i][pos] && metric.within(x, q, r) {
                    self.covered[i][pos] = true;
                    fresh += 1;
                }
            }
        }
        self.uncovered -= fresh;
        fresh
    }

    /// Number of uncovered points of `level` within `r` of `x`.
    pub fn gain(&self, p: &TemporalSampling, level: usize, x: PointId, r: f64) -> usize {
        let metric = p.metric();
        p.level(level)
            .iter()
            .enumerate()
            .filter(|&(pos, &q)| !self.covered[level][pos] && metric.within(x, q, r))
            .count()
    }
}

/// Backward DP over `graph` for the trajectory whose tube covers the most
/// uncovered points; ties go to the lexicographically smallest path.
pub fn best_new_tube_in(
    graph: &LevelGraph,
    p: &TemporalSampling,
    r: f64,
    state: &CoverageState,
) -> Option<(Trajectory, usize)> {
    let t = graph.num_levels();
    let reach = graph.reaches_last_level();
    let mut val = vec![0usize; graph.num_vertices()];
    let mut next = vec![usize::MAX; graph.num_vertices()];
    for i in (0..t).rev() {
        for v in graph.level_vertices(i) {
            if !reach[v] {
                continue;
            }
            let mut best: Option<usize> = None;
            for &w in graph.successors(v) {
                if reach[w] && best.is_none_or(|b| val[w] > val[b]) {
                    best = Some(w);
                }
            }
            val[v] = state.gain(p, i, graph.point(v), r) + best.map_or(0, |b| val[b]);
            next[v] = best.unwrap_or(usize::MAX);
        }
    }
    let mut start: Option<usize> = None;
    for v in graph.level_vertices(0) {
        if reach[v] && start.is_none_or(|s| val[v] > val[s]) {
            start = Some(v);
        }
    }
    let start = start?;
    let mut path = vec![start];
    let mut v = start;
    while next[v] != usize::MAX {
        v = next[v];
        path.push(v);
    }
    Some((graph.trajectory_from_vertices(&path), val[start]))
}

pub fn best_new_tube(
    p: &TemporalSampling,
    r: f64,
    delta: f64,
    state: &CoverageState,
) -> Option<(Trajectory, usize)> {
    best_new_tube_in(&LevelGraph::build(p, delta), p, r, state)
}

/// A greedy run: the outcome and the coverage gain of each chosen trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyRun {
    pub outcome: SolveOutcome,
    pub gains: Vec<usize>,
}

pub fn rds_greedy_run(p: &TemporalSampling, r: f64, delta: f64) -> Result<GreedyRun> {
    check_nonneg("r", r)?;
    check_nonneg("delta", delta)?;
    let graph = LevelGraph::build(p, delta);
    let mut state = CoverageState::new(p);
    let mut chosen = Clustering::default();
    let mut gains = Vec::new();
    while state.uncovered() > 0 {
        match best_new_tube_in(&graph, p, r, &state) {
            Some((tau, gain)) if gain > 0 => {
                let fresh = state.cover_tube(p, &tau, r);
                debug_assert_eq!(fresh, gain);
                gains.push(gain);
                chosen.push(tau);
            }
            _ => {
                let (level, pos) = state
                    .first_uncovered()
                    .expect("uncovered count is positive");
                let outcome = SolveOutcome::Infeasible(Infeasibility::Uncovered {
                    remaining: state.uncovered(),
                    level,
                    point: p.level(level)[pos],
                });
                return Ok(GreedyRun { outcome, gains });
            }
        }
    }
    Ok(GreedyRun {
        outcome: SolveOutcome::Clustering(chosen),
        gains,
    })
}

/// Covers every point with tubes of radius exactly `r` along trajectories of
/// displacement at most `δ`, using at most `⌈ln n⌉ · opt_k` of them.
pub fn solve_rds_greedy(p: &TemporalSampling, r: f64, delta: f64) -> Result<SolveOutcome> {
    Ok(rds_greedy_run(p, r, delta)?.outcome)
}
