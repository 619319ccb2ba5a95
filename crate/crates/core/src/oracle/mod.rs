//! Brute-force ground truth for tiny instances.
//!
//! Everything here enumerates `T_δ(P)` explicitly and is exponential; the
//! budgets turn a runaway search into an error instead of a hang.

mod level_dp;

pub use level_dp::{level_dp_feasible, level_dp_opt_r, LevelDpBudget};

use crate::error::{Error, Result};
use crate::instance::{Clustering, Objective, TemporalSampling, Trajectory};
use crate::level_graph::LevelGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_trajectories: usize,
    pub max_subsets: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_trajectories: 5_000,
            max_subsets: 200_000,
        }
    }
}

impl OracleBudget {
    fn validate(&self) -> Result<()> {
        if self.max_trajectories == 0 || self.max_subsets == 0 {
            return Err(Error::InvalidParameter("oracle budgets must be positive".into()));
        }
        Ok(())
    }
}

/// All trajectories of displacement at most `delta`, in lexicographic order.
pub fn enumerate_trajectories(
    p: &TemporalSampling,
    delta: f64,
    budget: OracleBudget,
) -> Result<Vec<Trajectory>> {
    budget.validate()?;
    let graph = LevelGraph::build(p, delta);
    let reach = graph.reaches_last_level();
    let t = graph.num_levels();
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(t);
    // Explicit DFS stack of (vertex, depth).
    let mut stack: Vec<(usize, usize)> = graph
        .level_vertices(0)
        .rev()
        .filter(|&v| reach[v])
        .map(|v| (v, 0))
        .collect();
    while let Some((v, depth)) = stack.pop() {
        path.truncate(depth);
        path.push(v);
        if depth + 1 == t {
            if out.len() == budget.max_trajectories {
                return Err(Error::BudgetExceeded {
                    what: "trajectory",
                    limit: budget.max_trajectories,
                });
            }
            out.push(graph.trajectory_from_vertices(&path));
            continue;
        }
        for &w in graph.successors(v).iter().rev() {
            if reach[w] {
                stack.push((w, depth + 1));
            }
        }
    }
    Ok(out)
}

/// Fixed-width bitset over the `(level, position)` pairs of an instance.
type Bits = Vec<u64>;

fn global_index(p: &TemporalSampling) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(p.len());
    let mut acc = 0;
    for level in p.levels() {
        offsets.push(acc);
        acc += level.len();
    }
    offsets
}

fn tube_bits(p: &TemporalSampling, tau: &Trajectory, r: f64, offsets: &[usize]) -> Bits {
    let metric = p.metric();
    let mut bits = vec![0u64; p.size().div_ceil(64)];
    for (i, level) in p.levels().iter().enumerate() {
        for (pos, &q) in level.iter().enumerate() {
            if metric.within(tau.at(i), q, r) {
                let g = offsets[i] + pos;
                bits[g / 64] |= 1 << (g % 64);
            }
        }
    }
    bits
}

struct Counter {
    used: usize,
    limit: usize,
}

impl Counter {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::BudgetExceeded {
                what: "subset",
                limit: self.limit,
            });
        }
        Ok(())
    }
}

/// Exact cover search: at most `k` tubes covering all `n` points.
fn center_cover(
    tubes: &[Bits],
    n: usize,
    k: usize,
    counter: &mut Counter,
) -> Result<Option<Vec<usize>>> {
    fn first_unset(bits: &Bits, n: usize) -> Option<usize> {
        (0..n).find(|&g| bits[g / 64] & (1 << (g % 64)) == 0)
    }
    fn search(
        tubes: &[Bits],
        n: usize,
        k: usize,
        covered: &Bits,
        chosen: &mut Vec<usize>,
        counter: &mut Counter,
    ) -> Result<bool> {
        counter.tick()?;
        let Some(g) = first_unset(covered, n) else {
            return Ok(true);
        };
        if chosen.len() == k {
            return Ok(false);
        }
        for (j, tube) in tubes.iter().enumerate() {
            if tube[g / 64] & (1 << (g % 64)) == 0 {
                continue;
            }
            let next: Bits = covered.iter().zip(tube).map(|(a, b)| a | b).collect();
            chosen.push(j);
            if search(tubes, n, k, &next, chosen, counter)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
    let mut chosen = Vec::new();
    let empty = vec![0u64; n.div_ceil(64)];
    Ok(search(tubes, n, k, &empty, &mut chosen, counter)?.then_some(chosen))
}

/// Best max-level cost over all `size`-subsets of `trajectories`, stopping
/// at the first subset with cost `<= stop_at` when given.
fn best_subset_cost(
    p: &TemporalSampling,
    trajectories: &[Trajectory],
    size: usize,
    objective: Objective,
    stop_at: Option<f64>,
    counter: &mut Counter,
) -> Result<Option<(f64, Vec<usize>)>> {
    let metric = p.metric();
    // dist[j][i][pos]: distance from level point to trajectory j's center.
    let dist: Vec<Vec<Vec<f64>>> = trajectories
        .iter()
        .map(|tau| {
            p.levels()
                .iter()
                .enumerate()
                .map(|(i, l)| l.iter().map(|&q| metric.dist(tau.at(i), q)).collect())
                .collect()
        })
        .collect();
    let empty: Vec<Vec<f64>> = p
        .levels()
        .iter()
        .map(|l| vec![f64::INFINITY; l.len()])
        .collect();

    struct Search<'a> {
        dist: &'a [Vec<Vec<f64>>],
        size: usize,
        objective: Objective,
        stop_at: Option<f64>,
        best: Option<(f64, Vec<usize>)>,
        chosen: Vec<usize>,
    }

    impl Search<'_> {
        fn run(&mut self, start: usize, nearest: &[Vec<f64>], counter: &mut Counter) -> Result<bool> {
            if self.chosen.len() == self.size {
                counter.tick()?;
                let cost = nearest
                    .iter()
                    .map(|l| self.objective.level_cost(l.iter().copied()))
                    .fold(0.0, f64::max);
                if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                    self.best = Some((cost, self.chosen.clone()));
                }
                return Ok(self.stop_at.is_some_and(|s| cost <= s));
            }
            let remaining = self.size - self.chosen.len();
            for j in start..=self.dist.len() - remaining {
                let next: Vec<Vec<f64>> = nearest
                    .iter()
                    .zip(&self.dist[j])
                    .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.min(*y)).collect())
                    .collect();
                self.chosen.push(j);
                let done = self.run(j + 1, &next, counter)?;
                self.chosen.pop();
                if done {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }

    let mut search = Search {
        dist: &dist,
        size,
        objective,
        stop_at,
        best: None,
        chosen: Vec::new(),
    };
    search.run(0, &empty, counter)?;
    Ok(search.best)
}

fn witness(trajectories: &[Trajectory], chosen: &[usize]) -> Clustering {
    chosen.iter().map(|&j| trajectories[j].clone()).collect()
}

fn feasible_among(
    p: &TemporalSampling,
    trajectories: &[Trajectory],
    k: usize,
    r: f64,
    objective: Objective,
    counter: &mut Counter,
) -> Result<Option<Clustering>> {
    if k == 0 || trajectories.is_empty() {
        return Ok(None);
    }
    match objective {
        Objective::Center => {
            let offsets = global_index(p);
            let tubes: Vec<Bits> = trajectories
                .iter()
                .map(|tau| tube_bits(p, tau, r, &offsets))
                .collect();
            let mut union = vec![0u64; p.size().div_ceil(64)];
            for tube in &tubes {
                union.iter_mut().zip(tube).for_each(|(a, b)| *a |= b);
            }
            if union.iter().map(|w| w.count_ones() as usize).sum::<usize>() < p.size() {
                return Ok(None);
            }
            Ok(center_cover(&tubes, p.size(), k, counter)?
                .map(|chosen| witness(trajectories, &chosen)))
        }
        Objective::Median | Objective::Means => {
            // Extra trajectories never raise the cost, so only the largest size matters.
            let size = k.min(trajectories.len());
            let stop = r + p.metric().tolerance();
            Ok(
                best_subset_cost(p, trajectories, size, objective, Some(stop), counter)?
                    .filter(|(cost, _)| p.metric().leq(*cost, r))
                    .map(|(_, chosen)| witness(trajectories, &chosen)),
            )
        }
    }
}

/// Whether a `(k, r, δ)`-clustering exists; returns a witness if so.
pub fn oracle_feasible(
    p: &TemporalSampling,
    k: usize,
    r: f64,
    delta: f64,
    objective: Objective,
    budget: OracleBudget,
) -> Result<Option<Clustering>> {
    if k == 0 {
        return Ok(None);
    }
    let trajectories = enumerate_trajectories(p, delta, budget)?;
    let mut counter = Counter {
        used: 0,
        limit: budget.max_subsets,
    };
    feasible_among(p, &trajectories, k, r, objective, &mut counter)
}

/// Smallest `k` admitting a `(k, r, δ)`-clustering, with a witness.
pub fn oracle_opt_k(
    p: &TemporalSampling,
    r: f64,
    delta: f64,
    objective: Objective,
    budget: OracleBudget,
) -> Result<Option<(usize, Clustering)>> {
    let trajectories = enumerate_trajectories(p, delta, budget)?;
    let mut counter = Counter {
        used: 0,
        limit: budget.max_subsets,
    };
    let all = trajectories.len();
    if feasible_among(p, &trajectories, all, r, objective, &mut counter)?.is_none() {
        return Ok(None);
    }
    for k in 1..=all {
        if let Some(c) = feasible_among(p, &trajectories, k, r, objective, &mut counter)? {
            return Ok(Some((k, c)));
        }
    }
    unreachable!("k = |T| was feasible")
}

/// Smallest `r` admitting a `(k, r, δ)`-clustering, with a witness.
///
/// For the center objective this is a binary search over within-level
/// distances. For median and means it is the minimum over all subsets of
/// size `min(k, |T|)` of the worst level cost.
pub fn oracle_opt_r(
    p: &TemporalSampling,
    k: usize,
    delta: f64,
    objective: Objective,
    budget: OracleBudget,
) -> Result<Option<(f64, Clustering)>> {
    if k == 0 {
        return Ok(None);
    }
    let trajectories = enumerate_trajectories(p, delta, budget)?;
    if trajectories.is_empty() {
        return Ok(None);
    }
    let mut counter = Counter {
        used: 0,
        limit: budget.max_subsets,
    };
    match objective {
        Objective::Center => {
            let metric = p.metric();
            let mut candidates = vec![0.0];
            for level in p.levels() {
                for (a, &x) in level.iter().enumerate() {
                    for &y in &level[a + 1..] {
                        candidates.push(metric.dist(x, y));
                    }
                }
            }
            candidates.sort_by(f64::total_cmp);
            candidates.dedup();
            // The largest candidate is feasible with any single trajectory.
            let (mut lo, mut hi) = (0, candidates.len() - 1);
            let mut best = feasible_among(p, &trajectories, k, candidates[hi], objective, &mut counter)?
                .expect("largest within-level distance is always feasible");
            while lo < hi {
                let mid = (lo + hi) / 2;
                match feasible_among(p, &trajectories, k, candidates[mid], objective, &mut counter)? {
                    Some(c) => {
                        hi = mid;
                        best = c;
                    }
                    None => lo = mid + 1,
                }
            }
            Ok(Some((candidates[hi], best)))
        }
        Objective::Median | Objective::Means => {
            let size = k.min(trajectories.len());
            Ok(
                best_subset_cost(p, &trajectories, size, objective, None, &mut counter)?
                    .map(|(cost, chosen)| (cost, witness(&trajectories, &chosen))),
            )
        }
    }
}
