//! Threshold-connected graph and per-vertex densities.
//!
//! A vertex's density is its neighbour count `k` in the threshold graph plus
//! a fractional bonus in `[0, 1)`. The bonus compares the vertex's mean
//! neighbour distance with the others that share the same `k`: the tightest
//! neighbourhood in the class gets a bonus just under 1, the loosest gets 0.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};

/// Keeps the fractional density term strictly below 1.
pub const DENSITY_EPSILON: f64 = 1e-10;

/// Graph joining every pair of distinct points no farther apart than `thr`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tcg {
    neighbors: Vec<Vec<usize>>,
    thr: f64,
}

impl Tcg {
    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn thr(&self) -> f64 {
        self.thr
    }
}

pub fn build_tcg(dist: &DistanceMatrix, thr: f64) -> Result<Tcg> {
    if thr.is_nan() || thr < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "threshold must be non-negative, got {thr}"
        )));
    }
    let n = dist.n();
    let neighbors = (0..n)
        .into_par_iter()
        .map(|i| {
            dist.row(i)
                .iter()
                .enumerate()
                .filter(|&(j, &d)| j != i && d <= thr)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    Ok(Tcg { neighbors, thr })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    /// Threshold-graph neighbour count per vertex.
    pub degree_k: Vec<usize>,
    /// Mean distance to threshold-graph neighbours; 0 for isolated vertices.
    pub mean_dist: Vec<f64>,
    /// For each occupied `k >= 1`: (largest, smallest) mean distance in that class.
    pub class_extrema: BTreeMap<usize, (f64, f64)>,
    pub rho: Vec<f64>,
    pub epsilon: f64,
}

pub fn densities(tcg: &Tcg, dist: &DistanceMatrix) -> Result<DensityProfile> {
    densities_with_epsilon(tcg, dist, DENSITY_EPSILON)
}

pub fn densities_with_epsilon(tcg: &Tcg, dist: &DistanceMatrix, epsilon: f64) -> Result<DensityProfile> {
    if tcg.n() != dist.n() {
        return Err(Error::LengthMismatch {
            left: tcg.n(),
            right: dist.n(),
        });
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let n = tcg.n();
    let degree_k: Vec<usize> = (0..n).map(|i| tcg.neighbors(i).len()).collect();
    let mean_dist: Vec<f64> = (0..n)
        .map(|i| {
            let nb = tcg.neighbors(i);
            if nb.is_empty() {
                0.0
            } else {
                let row = dist.row(i);
                nb.iter().map(|&j| row[j]).sum::<f64>() / nb.len() as f64
            }
        })
        .collect();

    let mut class_extrema: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    for (&k, &d) in degree_k.iter().zip(&mean_dist) {
        if k == 0 {
            continue;
        }
        class_extrema
            .entry(k)
            .and_modify(|(hi, lo)| {
                *hi = hi.max(d);
                *lo = lo.min(d);
            })
            .or_insert((d, d));
    }

    let rho = degree_k
        .iter()
        .zip(&mean_dist)
        .map(|(&k, &d)| {
            if k == 0 {
                return 0.0;
            }
            let (hi, lo) = class_extrema[&k];
            k as f64 + (hi - d) / (hi - lo + epsilon)
        })
        .collect();

    Ok(DensityProfile {
        degree_k,
        mean_dist,
        class_extrema,
        rho,
        epsilon,
    })
}
