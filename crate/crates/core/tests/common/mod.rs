#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use temporal_cluster::flow::{FlowNetwork, IntegralFlow};
use temporal_cluster::{FiniteMetric, PointId, TemporalSampling, Trajectory, Validation};

/// Shortest-path closure of random integer edge weights: a valid metric with
/// positive off-diagonal entries.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize, max_weight: u32) -> FiniteMetric {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(1..=max_weight) as f64;
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][m] + d[m][j] < d[i][j] {
                    d[i][j] = d[i][m] + d[m][j];
                }
            }
        }
    }
    FiniteMetric::from_matrix(d, Validation::Full).expect("closure is a metric")
}

/// `t` levels, each a random non-empty subset of at most `per_level` points
/// of a random metric on `universe` points.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_t: usize,
    per_level: usize,
    universe: usize,
) -> TemporalSampling {
    let metric = random_metric(rng, universe, 6);
    let t = rng.gen_range(1..=max_t);
    let ids: Vec<PointId> = (0..universe).map(PointId).collect();
    let levels = (0..t)
        .map(|_| {
            let size = rng.gen_range(1..=per_level.min(universe));
            ids.choose_multiple(rng, size).copied().collect()
        })
        .collect();
    TemporalSampling::new(metric, levels).unwrap()
}

/// A radius drawn from the instance's own distances (so closed comparisons
/// are exercised at the boundary), occasionally zero or a half-step off.
pub fn random_radius<R: Rng>(rng: &mut R, p: &TemporalSampling) -> f64 {
    let support = p.support();
    let m = p.metric();
    match rng.gen_range(0..5) {
        0 => 0.0,
        1 => rng.gen_range(0..12) as f64 / 2.0,
        _ => {
            let a = *support.choose(rng).unwrap();
            let b = *support.choose(rng).unwrap();
            m.dist(a, b)
        }
    }
}

/// A uniformly random trajectory (ignores displacement).
pub fn random_trajectory<R: Rng>(rng: &mut R, p: &TemporalSampling) -> Trajectory {
    Trajectory::new(p.levels().iter().map(|l| *l.choose(rng).unwrap()).collect())
}

/// Random DAG network on nodes `0..n` with source 0 and sink `n - 1`.
pub fn random_network<R: Rng>(rng: &mut R) -> FlowNetwork {
    let n = rng.gen_range(2..=6);
    let mut net = FlowNetwork::new(n, 0, n - 1);
    let edges = rng.gen_range(1..=10);
    let mut lower_left = 2;
    for _ in 0..edges {
        let a = rng.gen_range(0..n - 1);
        let b = rng.gen_range(a + 1..n);
        let lower = if lower_left > 0 && rng.gen_bool(0.4) {
            lower_left -= 1;
            1
        } else {
            0
        };
        let cap = rng.gen_range(lower.max(1)..=2);
        net.add_edge(a, b, lower, cap);
    }
    net
}

/// Minimum value over all integral flows with per-edge flow at most
/// `min(capacity, Σ lower)`; `None` if no such flow is feasible.
pub fn brute_min_flow(net: &FlowNetwork) -> Option<u64> {
    let total_lower: u64 = net.edges().iter().map(|e| e.lower).sum();
    let bounds: Vec<u64> = net
        .edges()
        .iter()
        .map(|e| e.capacity.min(total_lower))
        .collect();
    let mut flow = vec![0u64; bounds.len()];
    let mut best: Option<u64> = None;
    loop {
        let candidate = IntegralFlow {
            flow: flow.clone(),
            value: net
                .edges()
                .iter()
                .zip(&flow)
                .map(|(e, &f)| {
                    if e.from == net.source() {
                        f as i64
                    } else if e.to == net.source() {
                        -(f as i64)
                    } else {
                        0
                    }
                })
                .sum::<i64>()
                .max(0) as u64,
        };
        if candidate.check(net).is_ok() {
            best = Some(best.map_or(candidate.value, |b| b.min(candidate.value)));
        }
        // odometer
        let mut j = 0;
        loop {
            if j == flow.len() {
                return best;
            }
            if flow[j] < bounds[j] {
                flow[j] += 1;
                break;
            }
            flow[j] = 0;
            j += 1;
        }
    }
}
