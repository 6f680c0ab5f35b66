//! Euclidean distances, an instrumented evaluation counter and the dense
//! pairwise distance matrix.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[inline]
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

/// Counts point-to-point distance evaluations.
///
/// Every seeder routes its distance computations through one of these so the
/// benchmark can report operation counts independent of wall time.
#[derive(Debug, Default)]
pub struct DistanceCounter(AtomicU64);

impl DistanceCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn euclidean(&self, a: &[f64], b: &[f64]) -> f64 {
        self.0.fetch_add(1, Ordering::Relaxed);
        euclidean(a, b)
    }

    #[inline]
    pub fn squared(&self, a: &[f64], b: &[f64]) -> f64 {
        self.0.fetch_add(1, Ordering::Relaxed);
        squared_euclidean(a, b)
    }

    pub fn add(&self, count: u64) {
        self.0.fetch_add(count, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

/// Symmetric `n x n` matrix of Euclidean distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Computes all pairwise distances of `data`; each unordered pair is
    /// evaluated once and recorded on `counter`.
    pub fn compute(data: &Dataset, counter: &DistanceCounter) -> Result<Self> {
        let n = data.len();
        if n < 2 {
            return Err(Error::TooFewPoints {
                required: 2,
                found: n,
            });
        }
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let pi = data.point(i);
                let row: Vec<f64> = ((i + 1)..n).map(|j| euclidean(pi, data.point(j))).collect();
                counter.add(row.len() as u64);
                row
            })
            .collect();

        let mut entries = vec![0.0; n * n];
        for (i, row) in upper.iter().enumerate() {
            for (offset, &d) in row.iter().enumerate() {
                let j = i + 1 + offset;
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Smallest and largest off-diagonal entry.
    pub fn off_diagonal_extrema(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            for &d in &self.row(i)[i + 1..] {
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
        (lo, hi)
    }
}

/// Shorthand for [`DistanceMatrix::compute`] with a throwaway counter.
pub fn pairwise_distances(data: &Dataset) -> Result<DistanceMatrix> {
    DistanceMatrix::compute(data, &DistanceCounter::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::l4;

    #[test]
    fn l4_entries() {
        let d = pairwise_distances(&l4()).unwrap();
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(0, 3), 10.0);
        assert_eq!(d.get(2, 3), 8.0);
        assert_eq!(d.get(3, 2), 8.0);
        assert!((0..4).all(|i| d.get(i, i) == 0.0));
        assert_eq!(d.off_diagonal_extrema(), (1.0, 10.0));
    }

    #[test]
    fn coincident_points() {
        let data = Dataset::new("dup", vec![vec![1.0, 2.0], vec![1.0, 2.0], vec![0.0, 0.0]], None).unwrap();
        let d = pairwise_distances(&data).unwrap();
        assert_eq!(d.get(0, 1), 0.0);
    }

    #[test]
    fn counts_each_pair_once() {
        let data = Dataset::new("c", (0..10).map(|i| vec![i as f64]).collect(), None).unwrap();
        let counter = DistanceCounter::new();
        DistanceMatrix::compute(&data, &counter).unwrap();
        assert_eq!(counter.get(), 45);
    }

    #[test]
    fn needs_two_points() {
        let data = Dataset::new("one", vec![vec![1.0]], None).unwrap();
        assert!(matches!(
            pairwise_distances(&data),
            Err(Error::TooFewPoints {
                required: 2,
                found: 1
            })
        ));
    }
}
