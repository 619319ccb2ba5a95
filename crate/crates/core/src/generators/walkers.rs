//! Random walkers with a planted clustering.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Clustering, TemporalSampling, Trajectory};
use crate::metric::{FiniteMetric, PointId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkerParams {
    pub seed: u64,
    pub k: usize,
    pub t: usize,
    pub extras_per_level: usize,
    pub step: f64,
    pub radius: f64,
    pub dim: usize,
}

/// Uniform vector of length at most `max_len` (uniform direction, uniform length).
fn random_offset(rng: &mut ChaCha8Rng, dim: usize, max_len: f64) -> Vec<f64> {
    if max_len == 0.0 {
        return vec![0.0; dim];
    }
    let dir = loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            break v.into_iter().map(|x| x / n).collect::<Vec<_>>();
        }
    };
    // Shrink a hair so rounding in the distance computation stays within bounds.
    let len = rng.gen_range(0.0..=max_len) * (1.0 - 1e-9);
    dir.into_iter().map(|x| x * len).collect()
}

/// `k` walkers take `t` positions with steps of length at most `step`; each
/// level also gets `extras_per_level` points within `radius` of random
/// walkers. The walkers' trajectories are returned as the planted solution,
/// which is a `(k, radius, step)`-clustering under the center objective.
pub fn gen_random_walkers(params: WalkerParams) -> Result<(TemporalSampling, Clustering)> {
    let WalkerParams {
        seed,
        k,
        t,
        extras_per_level,
        step,
        radius,
        dim,
    } = params;
    if k == 0 || t == 0 || dim == 0 {
        return Err(Error::InvalidParameter("k, t and dim must be positive".into()));
    }
    for (name, x) in [("step", step), ("radius", radius)] {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be a finite nonnegative real, got {x}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 4.0 * (step + radius + 1.0) * k as f64;

    let mut index: HashMap<Vec<u64>, PointId> = HashMap::new();
    let mut coords: Vec<Vec<f64>> = Vec::new();
    let mut intern = |c: Vec<f64>| -> PointId {
        let key: Vec<u64> = c.iter().map(|x| (x + 0.0).to_bits()).collect();
        *index.entry(key).or_insert_with(|| {
            coords.push(c);
            PointId(coords.len() - 1)
        })
    };

    let mut positions: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..side)).collect())
        .collect();
    let mut levels = Vec::with_capacity(t);
    let mut paths: Vec<Vec<PointId>> = vec![Vec::with_capacity(t); k];
    for i in 0..t {
        if i > 0 {
            for pos in positions.iter_mut() {
                let off = random_offset(&mut rng, dim, step);
                pos.iter_mut().zip(off).for_each(|(x, d)| *x += d);
            }
        }
        let mut level: Vec<PointId> = Vec::new();
        for (w, pos) in positions.iter().enumerate() {
            let id = intern(pos.clone());
            paths[w].push(id);
            if !level.contains(&id) {
                level.push(id);
            }
        }
        for _ in 0..extras_per_level {
            let w = rng.gen_range(0..k);
            let off = random_offset(&mut rng, dim, radius);
            let c: Vec<f64> = positions[w].iter().zip(off).map(|(x, d)| x + d).collect();
            let id = intern(c);
            if !level.contains(&id) {
                level.push(id);
            }
        }
        levels.push(level);
    }
    let metric = FiniteMetric::euclidean(dim, coords)?;
    let sampling = TemporalSampling::new(metric, levels)?;
    let planted = paths.into_iter().map(Trajectory::new).collect();
    Ok((sampling, planted))
}
