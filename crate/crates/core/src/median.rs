//! Greedy temporal k-median / k-means on the potential
//! `W(C) = Σ_i max{0, cost(i; C) − r}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::CenterNetwork;
use crate::instance::{Clustering, Objective, TemporalSampling, Trajectory};
use crate::kcenter::{check_k, check_nonneg, Infeasibility, SolveOutcome};
use crate::level_graph::LevelGraph;

/// 1 for k-median, 2 for k-means.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Exponent {
    One,
    Two,
}

impl Exponent {
    #[inline]
    pub fn apply(self, d: f64) -> f64 {
        match self {
            Exponent::One => d,
            Exponent::Two => d * d,
        }
    }

    pub fn objective(self) -> Objective {
        match self {
            Exponent::One => Objective::Median,
            Exponent::Two => Objective::Means,
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Exponent::One => 1,
            Exponent::Two => 2,
        }
    }
}

impl TryFrom<Objective> for Exponent {
    type Error = Error;

    fn try_from(o: Objective) -> Result<Self> {
        match o {
            Objective::Median => Ok(Exponent::One),
            Objective::Means => Ok(Exponent::Two),
            Objective::Center => Err(Error::InvalidParameter(
                "the center objective has no potential".into(),
            )),
        }
    }
}

/// Per-point nearest-center costs of a growing trajectory set.
#[derive(Clone, Debug)]
pub struct PotentialState {
    nearest: Vec<Vec<f64>>,
    r: f64,
    exponent: Exponent,
    trajectories: Clustering,
}

impl PotentialState {
    pub fn new(p: &TemporalSampling, r: f64, exponent: Exponent) -> Self {
        PotentialState {
            nearest: p.levels().iter().map(|l| vec![f64::INFINITY; l.len()]).collect(),
            r,
            exponent,
            trajectories: Clustering::default(),
        }
    }

    pub fn add(&mut self, p: &TemporalSampling, tau: Trajectory) {
        let metric = p.metric();
        for (i, level) in p.levels().iter().enumerate() {
            let x = tau.at(i);
            for (m, &q) in self.nearest[i].iter_mut().zip(level) {
                *m = m.min(self.exponent.apply(metric.dist(x, q)));
            }
        }
        self.trajectories.push(tau);
    }

    pub fn level_cost(&self, level: usize) -> f64 {
        self.nearest[level].iter().sum()
    }

    pub fn w(&self) -> f64 {
        (0..self.nearest.len())
            .map(|i| (self.level_cost(i) - self.r).max(0.0))
            .sum()
    }

    pub fn nearest(&self) -> &[Vec<f64>] {
        &self.nearest
    }

    pub fn clustering(&self) -> &Clustering {
        &self.trajectories
    }

    pub fn into_clustering(self) -> Clustering {
        self.trajectories
    }
}

/// `W(C)` computed from scratch.
pub fn potential_w(p: &TemporalSampling, c: &Clustering, r: f64, exponent: Exponent) -> Result<f64> {
    if c.is_empty() {
        return Err(Error::EmptyClustering);
    }
    p.validate_clustering(c)?;
    let mut state = PotentialState::new(p, r, exponent);
    for tau in c.trajectories() {
        state.add(p, tau.clone());
    }
    Ok(state.w())
}

/// The trajectory of displacement at most the graph's δ minimising `W(C ∪ {τ})`.
///
/// `W(C ∪ {τ})` splits into one clipped term per level that depends only on
/// `τ(i)`, so a backward shortest-path DP is exact. Ties go to the
/// lexicographically smallest path.
pub fn best_w_trajectory_in(
    graph: &LevelGraph,
    p: &TemporalSampling,
    state: &PotentialState,
) -> Option<Trajectory> {
    let metric = p.metric();
    let reach = graph.reaches_last_level();
    let mut val = vec![f64::INFINITY; graph.num_vertices()];
    let mut next = vec![usize::MAX; graph.num_vertices()];
    for i in (0..graph.num_levels()).rev() {
        for v in graph.level_vertices(i) {
            if !reach[v] {
                continue;
            }
            let x = graph.point(v);
            let cost: f64 = p
                .level(i)
                .iter()
                .zip(&state.nearest[i])
                .map(|(&q, &m)| m.min(state.exponent.apply(metric.dist(x, q))))
                .sum();
            let term = (cost - state.r).max(0.0);
            let mut best: Option<usize> = None;
            for &w in graph.successors(v) {
                if reach[w] && best.is_none_or(|b| val[w] < val[b]) {
                    best = Some(w);
                }
            }
            val[v] = term + best.map_or(0.0, |b| val[b]);
            next[v] = best.unwrap_or(usize::MAX);
        }
    }
    let mut start: Option<usize> = None;
    for v in graph.level_vertices(0) {
        if reach[v] && start.is_none_or(|s| val[v] < val[s]) {
            start = Some(v);
        }
    }
    let mut v = start?;
    let mut path = vec![v];
    while next[v] != usize::MAX {
        v = next[v];
        path.push(v);
    }
    Some(graph.trajectory_from_vertices(&path))
}

pub fn best_w_trajectory(
    p: &TemporalSampling,
    delta: f64,
    c: &Clustering,
    r: f64,
    exponent: Exponent,
) -> Option<Trajectory> {
    let mut state = PotentialState::new(p, r, exponent);
    for tau in c.trajectories() {
        state.add(p, tau.clone());
    }
    best_w_trajectory_in(&LevelGraph::build(p, delta), p, &state)
}

/// `L = max(1, ⌈k · ln(n Δ^e / ε)⌉)`, with `Δ = 1` on a support without two distinct points.
pub fn iteration_count(p: &TemporalSampling, k: usize, epsilon: f64, exponent: Exponent) -> usize {
    let support = p.support();
    let spread = p.metric().spread(&support).unwrap_or(1.0);
    let n = p.size() as f64;
    let l = (k as f64 * (n * exponent.apply(spread) / epsilon).ln()).ceil();
    if l.is_finite() && l > 1.0 {
        l as usize
    } else {
        1
    }
}

/// A greedy run: the outcome and `W` after `C_0` and after each added trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct MedianRun {
    pub outcome: SolveOutcome,
    pub potentials: Vec<f64>,
    /// True when the outcome came from the zero-cost flow solver.
    pub via_flow: bool,
}

pub fn median_greedy_run(
    p: &TemporalSampling,
    k: usize,
    r: f64,
    delta: f64,
    epsilon: f64,
    exponent: Exponent,
) -> Result<MedianRun> {
    check_k(k)?;
    check_nonneg("r", r)?;
    check_nonneg("delta", delta)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be a positive real, got {epsilon}"
        )));
    }
    // Below the smallest positive cost a level can have, only zero-cost
    // solutions fit, and those are exactly what the flow solver finds.
    let min_cost = p
        .metric()
        .min_positive_distance(&p.support())
        .map(|d| exponent.apply(d));
    if r == 0.0 || min_cost.is_some_and(|m| r < m) {
        return Ok(MedianRun {
            outcome: solve_median_r0(p, k, delta)?,
            potentials: Vec::new(),
            via_flow: true,
        });
    }

    let graph = LevelGraph::build(p, delta);
    let Some(first) = graph.first_path() else {
        return Ok(MedianRun {
            outcome: SolveOutcome::Infeasible(Infeasibility::NoPath),
            potentials: Vec::new(),
            via_flow: false,
        });
    };
    let mut state = PotentialState::new(p, r, exponent);
    state.add(p, graph.trajectory_from_vertices(&first));
    let mut potentials = vec![state.w()];
    for _ in 0..iteration_count(p, k, epsilon, exponent) {
        if state.w() == 0.0 {
            break;
        }
        let tau = best_w_trajectory_in(&graph, p, &state).expect("graph has a path");
        state.add(p, tau);
        potentials.push(state.w());
    }
    let w = state.w();
    let bound = epsilon * r;
    let outcome = if p.metric().leq(w, bound) {
        SolveOutcome::Clustering(state.into_clustering())
    } else {
        SolveOutcome::Infeasible(Infeasibility::PotentialTooHigh { w, bound })
    };
    Ok(MedianRun {
        outcome,
        potentials,
        via_flow: false,
    })
}

/// Returns at most `1 + L` trajectories with cost `≤ (1 + ε) r`, or certifies
/// that no `(k, r, δ)` median (or means) clustering exists.
pub fn solve_median_greedy(
    p: &TemporalSampling,
    k: usize,
    r: f64,
    delta: f64,
    epsilon: f64,
    exponent: Exponent,
) -> Result<SolveOutcome> {
    Ok(median_greedy_run(p, k, r, delta, epsilon, exponent)?.outcome)
}

/// Exact zero-cost solver: every point becomes a lower-bound-1 center in `N_δ(P, P)`.
pub fn solve_median_r0(p: &TemporalSampling, k: usize, delta: f64) -> Result<SolveOutcome> {
    check_k(k)?;
    check_nonneg("delta", delta)?;
    for (level, points) in p.levels().iter().enumerate() {
        if points.len() > k {
            return Ok(SolveOutcome::Infeasible(Infeasibility::LevelTooLarge {
                level,
                size: points.len(),
                k,
            }));
        }
    }
    let network = CenterNetwork::build(p, p.levels(), delta)?;
    let Some(flow) = network.min_feasible_flow() else {
        return Ok(SolveOutcome::Infeasible(Infeasibility::FlowInfeasible));
    };
    if flow.value > k as u64 {
        return Ok(SolveOutcome::Infeasible(Infeasibility::FlowValueExceeds {
            value: flow.value,
            bound: k,
        }));
    }
    Ok(SolveOutcome::Clustering(Clustering::new(
        network.decompose(&flow)?,
    )))
}
