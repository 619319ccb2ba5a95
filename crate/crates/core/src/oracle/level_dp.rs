//! Exact optimum by dynamic programming over per-level center multisets.
//!
//! A clustering of at most `k` trajectories is, level by level, a multiset of
//! `k` centers; consecutive multisets must admit a perfect matching whose
//! pairs are within `δ`. The worst level cost along the best sequence is a
//! bottleneck shortest path, so the state count (not `|T_δ|`) bounds the work.

use crate::error::{Error, Result};
use crate::instance::{Clustering, Objective, TemporalSampling, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelDpBudget {
    /// Multisets per level.
    pub max_states: usize,
    /// Matching tests over the whole run.
    pub max_transitions: usize,
}

impl Default for LevelDpBudget {
    fn default() -> Self {
        LevelDpBudget {
            max_states: 5_000,
            max_transitions: 200_000_000,
        }
    }
}

/// Non-decreasing position sequences of length `k` over `0..m`.
fn multisets(m: usize, k: usize, limit: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    loop {
        if out.len() == limit {
            return Err(Error::BudgetExceeded {
                what: "level state",
                limit,
            });
        }
        out.push(cur.clone());
        // Advance like an odometer keeping the sequence non-decreasing.
        let Some(j) = (0..k).rev().find(|&j| cur[j] + 1 < m) else {
            return Ok(out);
        };
        let v = cur[j] + 1;
        cur[j..].fill(v);
    }
}

/// Kuhn's augmenting paths; `adj[a][b]` says slot `a` may move to slot `b`.
/// Returns `assign[a] = b` for a perfect matching.
fn perfect_matching(a: &[usize], b: &[usize], close: &[Vec<bool>]) -> Option<Vec<usize>> {
    let k = a.len();
    let mut owner = vec![usize::MAX; k];
    fn augment(
        x: usize,
        a: &[usize],
        b: &[usize],
        close: &[Vec<bool>],
        seen: &mut [bool],
        owner: &mut [usize],
    ) -> bool {
        for y in 0..b.len() {
            if !seen[y] && close[a[x]][b[y]] {
                seen[y] = true;
                if owner[y] == usize::MAX || augment(owner[y], a, b, close, seen, owner) {
                    owner[y] = x;
                    return true;
                }
            }
        }
        false
    }
    for x in 0..k {
        let mut seen = vec![false; k];
        if !augment(x, a, b, close, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut assign = vec![0; k];
    for (y, &x) in owner.iter().enumerate() {
        assign[x] = y;
    }
    Some(assign)
}

fn state_cost(p: &TemporalSampling, level: usize, state: &[usize], objective: Objective) -> f64 {
    let metric = p.metric();
    let points = p.level(level);
    objective.level_cost(points.iter().map(|&q| {
        state
            .iter()
            .map(|&s| metric.dist(points[s], q))
            .fold(f64::INFINITY, f64::min)
    }))
}

/// Minimum over clusterings of at most `k` trajectories with displacement at
/// most `delta` of the worst level cost, with an optimal clustering.
pub fn level_dp_opt_r(
    p: &TemporalSampling,
    k: usize,
    delta: f64,
    objective: Objective,
    budget: LevelDpBudget,
) -> Result<Option<(f64, Clustering)>> {
    if k == 0 {
        return Ok(None);
    }
    let metric = p.metric();
    let t = p.len();
    let states: Vec<Vec<Vec<usize>>> = p
        .levels()
        .iter()
        .map(|l| multisets(l.len(), k, budget.max_states))
        .collect::<Result<_>>()?;

    let mut transitions = 0usize;
    let mut best: Vec<f64> = states[0]
        .iter()
        .map(|s| state_cost(p, 0, s, objective))
        .collect();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new()];
    for i in 1..t {
        let (prev, cur) = (p.level(i - 1), p.level(i));
        let close: Vec<Vec<bool>> = prev
            .iter()
            .map(|&x| cur.iter().map(|&y| metric.within(x, y, delta)).collect())
            .collect();
        let mut order: Vec<usize> = (0..states[i - 1].len())
            .filter(|&s| best[s].is_finite())
            .collect();
        order.sort_by(|&a, &b| best[a].total_cmp(&best[b]).then(a.cmp(&b)));

        let mut next_best = vec![f64::INFINITY; states[i].len()];
        let mut next_pred = vec![usize::MAX; states[i].len()];
        for (s, state) in states[i].iter().enumerate() {
            for &from in &order {
                transitions += 1;
                if transitions > budget.max_transitions {
                    return Err(Error::BudgetExceeded {
                        what: "level transition",
                        limit: budget.max_transitions,
                    });
                }
                if perfect_matching(&states[i - 1][from], state, &close).is_some() {
                    next_best[s] = best[from].max(state_cost(p, i, state, objective));
                    next_pred[s] = from;
                    break;
                }
            }
        }
        best = next_best;
        pred.push(next_pred);
    }

    let Some(last) = (0..best.len())
        .filter(|&s| best[s].is_finite())
        .min_by(|&a, &b| best[a].total_cmp(&best[b]).then(a.cmp(&b)))
    else {
        return Ok(None);
    };
    let value = best[last];

    let mut chain = vec![last];
    for i in (1..t).rev() {
        chain.push(pred[i][*chain.last().expect("chain is non-empty")]);
    }
    chain.reverse();

    let mut slots: Vec<usize> = (0..k).collect();
    let mut paths: Vec<Vec<usize>> = (0..k).map(|j| vec![states[0][chain[0]][j]]).collect();
    for i in 1..t {
        let close: Vec<Vec<bool>> = p
            .level(i - 1)
            .iter()
            .map(|&x| p.level(i).iter().map(|&y| metric.within(x, y, delta)).collect())
            .collect();
        let a = &states[i - 1][chain[i - 1]];
        let b = &states[i][chain[i]];
        let assign = perfect_matching(a, b, &close).expect("chain transitions were matched");
        for (j, slot) in slots.iter_mut().enumerate() {
            *slot = assign[*slot];
            paths[j].push(b[*slot]);
        }
    }
    let mut trajectories: Vec<Trajectory> = Vec::new();
    for path in paths {
        let tau = Trajectory::new(
            path.iter()
                .enumerate()
                .map(|(i, &pos)| p.level(i)[pos])
                .collect(),
        );
        if !trajectories.contains(&tau) {
            trajectories.push(tau);
        }
    }
    Ok(Some((value, Clustering::new(trajectories))))
}

/// Whether a `(k, r, δ)`-clustering exists, with a witness.
pub fn level_dp_feasible(
    p: &TemporalSampling,
    k: usize,
    r: f64,
    delta: f64,
    objective: Objective,
    budget: LevelDpBudget,
) -> Result<Option<Clustering>> {
    Ok(level_dp_opt_r(p, k, delta, objective, budget)?
        .filter(|(value, _)| p.metric().leq(*value, r))
        .map(|(_, c)| c))
}
