//! Initial-center selection.
//!
//! [`AimkModel`] runs the deterministic pipeline once per dataset and
//! threshold mode (distances, MST, skeleton threshold, densities, hybrid
//! distance normalisers); [`AimkModel::select`] then picks centers for any
//! `(nc, lambda)` without recomputing those stages. The first center is the
//! density maximum and every later one maximises its minimum hybrid distance
//! to the centers already chosen. All argmax ties go to the lowest index.
//!
//! The random baselines (Forgy, k-means++, maximin) draw from
//! [`crate::dataset::rng_from_seed`] and are reproducible per seed.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{random_sample, random_sample_unordered, rng_from_seed, Dataset};
use crate::density::{build_tcg, densities, DensityProfile, Tcg};
use crate::distance::{DistanceCounter, DistanceMatrix};
use crate::error::{Error, Result};
use crate::mst::{prim_mst, skeleton_points, Mst, SkeletonResult, ThresholdMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedMethod {
    Aimk,
    AimkRs,
    Forgy,
    #[serde(rename = "kmeanspp")]
    KmeansPlusPlus,
    Maximin,
}

impl SeedMethod {
    pub const ALL: [SeedMethod; 5] = [
        SeedMethod::Aimk,
        SeedMethod::AimkRs,
        SeedMethod::Forgy,
        SeedMethod::KmeansPlusPlus,
        SeedMethod::Maximin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SeedMethod::Aimk => "aimk",
            SeedMethod::AimkRs => "aimk_rs",
            SeedMethod::Forgy => "forgy",
            SeedMethod::KmeansPlusPlus => "kmeanspp",
            SeedMethod::Maximin => "maximin",
        }
    }

    /// Whether the method consumes a random seed.
    pub fn is_stochastic(self) -> bool {
        !matches!(self, SeedMethod::Aimk)
    }

    /// Whether lambda and threshold mode apply.
    pub fn uses_hybrid_distance(self) -> bool {
        matches!(self, SeedMethod::Aimk | SeedMethod::AimkRs)
    }
}

impl std::fmt::Display for SeedMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SeedMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeedMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown seeding method {s:?}")))
    }
}

/// Chosen initial centers, as indices into the dataset they were picked from.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSet {
    pub center_indices: Vec<usize>,
    /// Only set for the hybrid-distance methods.
    pub lambda: Option<f64>,
    pub method: SeedMethod,
    /// Point-to-point distance evaluations spent choosing the centers.
    pub distance_evaluations: u64,
}

impl SeedSet {
    pub fn len(&self) -> usize {
        self.center_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.center_indices.is_empty()
    }

    /// Coordinates of the centers in `data`.
    pub fn centers(&self, data: &Dataset) -> Vec<Vec<f64>> {
        self.center_indices
            .iter()
            .map(|&i| data.point(i).to_vec())
            .collect()
    }
}

/// Normalisers for the hybrid distance, taken over all pairs `i != j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridStats {
    pub d_min: f64,
    pub d_max: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl HybridStats {
    pub fn compute(dist: &DistanceMatrix, rho: &[f64]) -> Result<Self> {
        if dist.n() != rho.len() {
            return Err(Error::LengthMismatch {
                left: dist.n(),
                right: rho.len(),
            });
        }
        if rho.len() < 2 {
            return Err(Error::TooFewPoints {
                required: 2,
                found: rho.len(),
            });
        }
        let (d_min, d_max) = dist.off_diagonal_extrema();
        // extreme pair sums come from the two largest / two smallest densities
        let mut sorted = rho.to_vec();
        sorted.sort_by(f64::total_cmp);
        let m = sorted.len();
        Ok(Self {
            d_min,
            d_max,
            p_min: sorted[0] + sorted[1],
            p_max: sorted[m - 1] + sorted[m - 2],
        })
    }

    #[inline]
    fn eval(&self, d: f64, pair_density: f64, lambda: f64) -> f64 {
        let dist_term = normalised(d, self.d_min, self.d_max);
        let dens_term = normalised(pair_density, self.p_min, self.p_max);
        lambda * dist_term * dist_term + (1.0 - lambda) * dens_term * dens_term
    }
}

#[inline]
fn normalised(x: f64, lo: f64, hi: f64) -> f64 {
    let span = hi - lo;
    if span > 0.0 {
        (x - lo) / span
    } else {
        0.0
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "lambda must lie in [0, 1], got {lambda}"
        )))
    }
}

/// Hybrid distance between vertices `i` and `j`: lambda times the squared
/// min-max-normalised distance plus `1 - lambda` times the squared
/// normalised density sum. A zero-width normaliser makes its term 0.
pub fn hybrid_distance(
    i: usize,
    j: usize,
    lambda: f64,
    rho: &DensityProfile,
    dist: &DistanceMatrix,
    stats: &HybridStats,
) -> Result<f64> {
    if i == j {
        return Err(Error::InvalidParameter(
            "hybrid distance needs two distinct vertices".into(),
        ));
    }
    check_lambda(lambda)?;
    Ok(stats.eval(dist.get(i, j), rho.rho[i] + rho.rho[j], lambda))
}

/// Everything AIMK computes before center selection.
#[derive(Debug, Clone)]
pub struct AimkModel {
    pub dist: DistanceMatrix,
    pub mst: Mst,
    pub skeleton: SkeletonResult,
    pub threshold_mode: ThresholdMode,
    pub tcg: Tcg,
    pub density: DensityProfile,
    pub stats: HybridStats,
    /// Distance evaluations spent building the model.
    pub distance_evaluations: u64,
}

impl AimkModel {
    pub fn fit(data: &Dataset, threshold_mode: ThresholdMode) -> Result<Self> {
        let counter = DistanceCounter::new();
        let dist = DistanceMatrix::compute(data, &counter)?;
        let mst = prim_mst(&dist)?;
        let mut skeleton = skeleton_points(&mst);
        let thr = skeleton.apply_threshold(&mst, threshold_mode);
        let tcg = build_tcg(&dist, thr)?;
        let density = densities(&tcg, &dist)?;
        let stats = HybridStats::compute(&dist, &density.rho)?;
        Ok(Self {
            dist,
            mst,
            skeleton,
            threshold_mode,
            tcg,
            density,
            stats,
            distance_evaluations: counter.get(),
        })
    }

    pub fn n(&self) -> usize {
        self.dist.n()
    }

    pub fn threshold(&self) -> f64 {
        self.tcg.thr()
    }

    pub fn hybrid(&self, i: usize, j: usize, lambda: f64) -> Result<f64> {
        hybrid_distance(i, j, lambda, &self.density, &self.dist, &self.stats)
    }

    /// Picks `nc` centers for the given `lambda`.
    pub fn select(&self, nc: usize, lambda: f64) -> Result<SeedSet> {
        let n = self.n();
        check_nc(nc, n)?;
        check_lambda(lambda)?;
        let rho = &self.density.rho;

        let first = argmax(rho.iter().copied().enumerate()).expect("n >= 2");
        let mut chosen = vec![first];
        let mut taken = vec![false; n];
        taken[first] = true;

        // min over chosen centers of H(center, v)
        let mut min_h: Vec<f64> = (0..n)
            .map(|v| {
                self.stats
                    .eval(self.dist.get(first, v), rho[first] + rho[v], lambda)
            })
            .collect();

        while chosen.len() < nc {
            let next = argmax((0..n).filter(|&v| !taken[v]).map(|v| (v, min_h[v])))
                .expect("nc <= n leaves a candidate");
            chosen.push(next);
            taken[next] = true;
            for v in (0..n).filter(|&v| !taken[v]) {
                let h = self
                    .stats
                    .eval(self.dist.get(next, v), rho[next] + rho[v], lambda);
                if h < min_h[v] {
                    min_h[v] = h;
                }
            }
        }

        Ok(SeedSet {
            center_indices: chosen,
            lambda: Some(lambda),
            method: SeedMethod::Aimk,
            distance_evaluations: self.distance_evaluations,
        })
    }
}

/// Index of the largest value; the first one wins ties.
fn argmax(values: impl Iterator<Item = (usize, f64)>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values {
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

fn check_nc(nc: usize, n: usize) -> Result<()> {
    if nc < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 centers, got {nc}"
        )));
    }
    if nc > n {
        return Err(Error::InvalidParameter(format!(
            "{nc} centers requested from {n} points"
        )));
    }
    Ok(())
}

pub fn aimk_seeds(data: &Dataset, nc: usize, lambda: f64, threshold_mode: ThresholdMode) -> Result<SeedSet> {
    check_nc(nc, data.len())?;
    check_lambda(lambda)?;
    AimkModel::fit(data, threshold_mode)?.select(nc, lambda)
}

/// Size of the AIMK-RS sample: `floor(sqrt(n))`.
pub fn rs_sample_size(n: usize) -> usize {
    n.isqrt()
}

/// AIMK on a uniform `floor(sqrt(n))` sample. Returned indices refer to the
/// full dataset.
pub fn aimk_rs_seeds(
    data: &Dataset,
    nc: usize,
    lambda: f64,
    threshold_mode: ThresholdMode,
    rng_seed: u64,
) -> Result<SeedSet> {
    let size = rs_sample_size(data.len());
    let required = nc.max(2);
    if size < required {
        return Err(Error::SampleTooSmall {
            sample: size,
            required,
        });
    }
    check_lambda(lambda)?;
    let sample = random_sample(data.len(), size, rng_seed)?;
    let sub = data.subset(&sample);
    let local = aimk_seeds(&sub, nc, lambda, threshold_mode)?;
    Ok(SeedSet {
        center_indices: local.center_indices.iter().map(|&i| sample[i]).collect(),
        method: SeedMethod::AimkRs,
        ..local
    })
}

/// `nc` distinct points chosen uniformly at random.
pub fn forgy_seeds(data: &Dataset, nc: usize, rng_seed: u64) -> Result<SeedSet> {
    if nc > data.len() {
        return Err(Error::InvalidParameter(format!(
            "{nc} centers requested from {} points",
            data.len()
        )));
    }
    Ok(SeedSet {
        center_indices: random_sample_unordered(data.len(), nc, rng_seed)?,
        lambda: None,
        method: SeedMethod::Forgy,
        distance_evaluations: 0,
    })
}

fn distinct_points(data: &Dataset) -> usize {
    data.points()
        .map(|p| p.iter().map(|c| (c + 0.0).to_bits()).collect::<Vec<_>>())
        .collect::<HashSet<_>>()
        .len()
}

/// k-means++: uniform first center, then each next center drawn with
/// probability proportional to squared distance to the nearest chosen one.
pub fn kmeanspp_seeds(data: &Dataset, nc: usize, rng_seed: u64) -> Result<SeedSet> {
    if nc == 0 {
        return Err(Error::InvalidParameter("need at least 1 center".into()));
    }
    let available = distinct_points(data);
    if nc > available {
        return Err(Error::NotEnoughDistinctPoints {
            requested: nc,
            available,
        });
    }
    let n = data.len();
    let counter = DistanceCounter::new();
    let mut rng = rng_from_seed(rng_seed);
    let first = rng.random_range(0..n);
    let mut chosen = vec![first];
    let mut d2: Vec<f64> = data
        .points()
        .map(|p| counter.squared(p, data.point(first)))
        .collect();

    while chosen.len() < nc {
        let dist = WeightedIndex::new(&d2).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let next = dist.sample(&mut rng);
        chosen.push(next);
        let c = data.point(next);
        for (i, p) in data.points().enumerate() {
            let d = counter.squared(p, c);
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    Ok(SeedSet {
        center_indices: chosen,
        lambda: None,
        method: SeedMethod::KmeansPlusPlus,
        distance_evaluations: counter.get(),
    })
}

/// Maximin (farthest-first) with a uniformly random first center.
pub fn maximin_seeds(data: &Dataset, nc: usize, rng_seed: u64) -> Result<SeedSet> {
    let mut rng = rng_from_seed(rng_seed);
    let first = rng.random_range(0..data.len());
    maximin_seeds_from(data, nc, first)
}

/// Maximin from a fixed first center; later ties go to the lowest index.
pub fn maximin_seeds_from(data: &Dataset, nc: usize, first: usize) -> Result<SeedSet> {
    let n = data.len();
    if nc == 0 || nc > n {
        return Err(Error::InvalidParameter(format!(
            "{nc} centers requested from {n} points"
        )));
    }
    if first >= n {
        return Err(Error::InvalidParameter(format!(
            "first center {first} out of range"
        )));
    }
    let counter = DistanceCounter::new();
    let mut chosen = vec![first];
    let mut taken = vec![false; n];
    taken[first] = true;
    let mut min_d: Vec<f64> = data
        .points()
        .map(|p| counter.euclidean(p, data.point(first)))
        .collect();
    while chosen.len() < nc {
        let next = argmax((0..n).filter(|&v| !taken[v]).map(|v| (v, min_d[v]))).expect("candidate remains");
        chosen.push(next);
        taken[next] = true;
        let c = data.point(next);
        for v in (0..n).filter(|&v| !taken[v]) {
            min_d[v] = min_d[v].min(counter.euclidean(data.point(v), c));
        }
    }
    Ok(SeedSet {
        center_indices: chosen,
        lambda: None,
        method: SeedMethod::Maximin,
        distance_evaluations: counter.get(),
    })
}

/// Dispatches to the seeder named by `method`.
pub fn seed(
    data: &Dataset,
    method: SeedMethod,
    nc: usize,
    lambda: f64,
    threshold_mode: ThresholdMode,
    rng_seed: u64,
) -> Result<SeedSet> {
    match method {
        SeedMethod::Aimk => aimk_seeds(data, nc, lambda, threshold_mode),
        SeedMethod::AimkRs => aimk_rs_seeds(data, nc, lambda, threshold_mode, rng_seed),
        SeedMethod::Forgy => forgy_seeds(data, nc, rng_seed),
        SeedMethod::KmeansPlusPlus => kmeanspp_seeds(data, nc, rng_seed),
        SeedMethod::Maximin => maximin_seeds(data, nc, rng_seed),
    }
}
