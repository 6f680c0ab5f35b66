//! Lloyd's K-means iteration starting from a [`SeedSet`].

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::distance::squared_euclidean;
use crate::error::{Error, Result};
use crate::seeding::SeedSet;

/// Relative slack when checking that SSE never increases; absorbs rounding
/// in the centroid means.
const SSE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LloydConfig {
    pub max_iter: usize,
    /// Stop once the largest squared centroid displacement falls below this.
    pub shift_tol: f64,
}

impl Default for LloydConfig {
    fn default() -> Self {
        Self {
            max_iter: 300,
            shift_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub sse: f64,
    /// Completed update steps.
    pub iterations: usize,
    pub converged: bool,
    /// SSE after the initial assignment and after every update.
    pub sse_history: Vec<f64>,
    /// Steps where SSE rose by more than rounding slack. Always 0 for a
    /// correct implementation.
    pub sse_increases: usize,
}

pub fn lloyd(data: &Dataset, seeds: &SeedSet, config: &LloydConfig) -> Result<ClusteringResult> {
    if let Some(&bad) = seeds.center_indices.iter().find(|&&i| i >= data.len()) {
        return Err(Error::InvalidParameter(format!("seed index {bad} out of range")));
    }
    lloyd_from_centroids(data, seeds.centers(data), config)
}

pub fn lloyd_from_centroids(
    data: &Dataset,
    mut centroids: Vec<Vec<f64>>,
    config: &LloydConfig,
) -> Result<ClusteringResult> {
    if centroids.is_empty() {
        return Err(Error::InvalidParameter("no initial centroids".into()));
    }
    if centroids.iter().any(|c| c.len() != data.dim()) {
        return Err(Error::InvalidParameter(
            "centroid dimension does not match data".into(),
        ));
    }
    if config.max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    if config.shift_tol.is_nan() || config.shift_tol < 0.0 {
        return Err(Error::InvalidParameter("shift_tol must be non-negative".into()));
    }

    let (mut assignments, mut sse) = assign(data, &centroids);
    let mut sse_history = vec![sse];
    let mut sse_increases = 0;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iter {
        iterations += 1;
        let updated = update(data, &assignments, &centroids);
        let shift = centroids
            .iter()
            .zip(&updated)
            .map(|(a, b)| squared_euclidean(a, b))
            .fold(0.0, f64::max);
        centroids = updated;

        let (next, next_sse) = assign(data, &centroids);
        if next_sse > sse * (1.0 + SSE_SLACK) + f64::MIN_POSITIVE {
            sse_increases += 1;
        }
        debug_assert!(
            next_sse <= sse * (1.0 + SSE_SLACK) + f64::MIN_POSITIVE,
            "SSE increased from {sse} to {next_sse}"
        );
        sse_history.push(next_sse);
        sse = next_sse;
        let unchanged = next == assignments;
        assignments = next;
        if unchanged || shift < config.shift_tol {
            converged = true;
            break;
        }
    }

    Ok(ClusteringResult {
        assignments,
        centroids,
        sse,
        iterations,
        converged,
        sse_history,
        sse_increases,
    })
}

/// Nearest centroid per point (lowest id on ties) and the resulting SSE.
fn assign(data: &Dataset, centroids: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let nearest: Vec<(usize, f64)> = (0..data.len())
        .into_par_iter()
        .map(|i| {
            let p = data.point(i);
            let mut best = (0, f64::INFINITY);
            for (c, centroid) in centroids.iter().enumerate() {
                let d = squared_euclidean(p, centroid);
                if d < best.1 {
                    best = (c, d);
                }
            }
            best
        })
        .collect();
    let sse = nearest.iter().map(|&(_, d)| d).sum();
    (nearest.into_iter().map(|(c, _)| c).collect(), sse)
}

/// Member means; an empty cluster moves onto the point farthest from its
/// current centroid (distinct points for distinct empty clusters).
fn update(data: &Dataset, assignments: &[usize], old: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = old.len();
    let dim = data.dim();
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &c) in data.points().zip(assignments) {
        counts[c] += 1;
        for (s, x) in sums[c].iter_mut().zip(p) {
            *s += x;
        }
    }
    let mut centroids: Vec<Vec<f64>> = sums
        .into_iter()
        .zip(&counts)
        .zip(old)
        .map(|((s, &n), prev)| {
            if n == 0 {
                prev.clone()
            } else {
                s.into_iter().map(|x| x / n as f64).collect()
            }
        })
        .collect();

    let empty: Vec<usize> = (0..k).filter(|&c| counts[c] == 0).collect();
    if !empty.is_empty() {
        let mut spread: Vec<(usize, f64)> = data
            .points()
            .zip(assignments)
            .enumerate()
            .map(|(i, (p, &c))| (i, squared_euclidean(p, &centroids[c])))
            .collect();
        // farthest first, lowest index on ties
        spread.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        for (c, (i, _)) in empty.into_iter().zip(spread) {
            centroids[c] = data.point(i).to_vec();
        }
    }
    centroids
}
