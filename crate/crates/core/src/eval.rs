//! External validation indices: accuracy under the best one-to-one
//! cluster-to-class mapping, Rand index and pair-counting F-measure.

use std::collections::HashMap;
use std::hash::Hash;

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::error::{Error, Result};

/// Pair counts over all unordered pairs of points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCounts {
    /// Same cluster, same class.
    pub true_positive: u64,
    /// Same cluster, different class.
    pub false_positive: u64,
    /// Different cluster, same class.
    pub false_negative: u64,
    /// Different cluster, different class.
    pub true_negative: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.true_positive + self.false_positive + self.false_negative + self.true_negative
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FMeasure {
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<T> {
    pub acc: f64,
    pub ri: f64,
    pub f_measure: f64,
    pub precision: f64,
    pub recall: f64,
    /// Cluster id to the class it was matched with for accuracy.
    pub mapping: Vec<(usize, T)>,
}

/// Dense ids in order of first appearance.
fn encode<T: Eq + Hash>(values: &[T]) -> (Vec<usize>, usize) {
    let mut ids: HashMap<&T, usize> = HashMap::new();
    let encoded = values
        .iter()
        .map(|v| {
            let next = ids.len();
            *ids.entry(v).or_insert(next)
        })
        .collect();
    (encoded, ids.len())
}

fn contingency(pred: &[usize], kp: usize, truth: &[usize], kt: usize) -> Vec<Vec<u64>> {
    let mut table = vec![vec![0u64; kt]; kp];
    for (&p, &t) in pred.iter().zip(truth) {
        table[p][t] += 1;
    }
    table
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::LengthMismatch { left: a, right: b })
    }
}

fn pairs(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// Pair counts from the contingency table in `O(n + clusters * classes)`.
pub fn pair_counts<P: Eq + Hash, T: Eq + Hash>(pred: &[P], truth: &[T]) -> Result<PairCounts> {
    check_lengths(pred.len(), truth.len())?;
    let (p, kp) = encode(pred);
    let (t, kt) = encode(truth);
    let table = contingency(&p, kp, &t, kt);

    let tp: u64 = table.iter().flatten().map(|&c| pairs(c)).sum();
    let same_cluster: u64 = table.iter().map(|row| pairs(row.iter().sum())).sum();
    let same_class: u64 = (0..kt).map(|j| pairs(table.iter().map(|row| row[j]).sum())).sum();
    let total = pairs(pred.len() as u64);
    Ok(PairCounts {
        true_positive: tp,
        false_positive: same_cluster - tp,
        false_negative: same_class - tp,
        true_negative: total + tp - same_cluster - same_class,
    })
}

pub fn rand_index(counts: &PairCounts) -> Result<f64> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::InvalidParameter(
            "Rand index needs at least one pair".into(),
        ));
    }
    Ok((counts.true_positive + counts.true_negative) as f64 / total as f64)
}

/// Precision, recall and their harmonic mean. Zero denominators yield 0.
pub fn f_measure(counts: &PairCounts) -> FMeasure {
    let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let precision = ratio(counts.true_positive, counts.true_positive + counts.false_positive);
    let recall = ratio(counts.true_positive, counts.true_positive + counts.false_negative);
    let f = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    FMeasure { precision, recall, f }
}

/// Fraction of points whose cluster maps to their class under the
/// one-to-one mapping that maximises that fraction.
pub fn accuracy<T: Eq + Hash + Clone>(pred: &[usize], truth: &[T]) -> Result<(f64, Vec<(usize, T)>)> {
    check_lengths(pred.len(), truth.len())?;
    if pred.is_empty() {
        return Err(Error::Empty("no points to score".into()));
    }
    let (p, kp) = encode(pred);
    let (t, kt) = encode(truth);
    let table = contingency(&p, kp, &t, kt);

    // kuhn_munkres wants rows <= columns; pad to a square matrix with zeros
    let size = kp.max(kt);
    let weights = Matrix::from_fn(
        size,
        size,
        |(r, c)| {
            if r < kp && c < kt {
                table[r][c] as i64
            } else {
                0
            }
        },
    );
    let (_, assignment) = kuhn_munkres(&weights);

    let mut cluster_of = vec![0usize; kp];
    for (orig, &id) in pred.iter().zip(&p) {
        cluster_of[id] = *orig;
    }
    let mut class_of: Vec<Option<&T>> = vec![None; kt];
    for (orig, &id) in truth.iter().zip(&t) {
        class_of[id] = Some(orig);
    }

    let mut correct = 0u64;
    let mut mapping = Vec::new();
    for (r, &c) in assignment.iter().enumerate().take(kp) {
        if c < kt {
            correct += table[r][c];
            mapping.push((cluster_of[r], class_of[c].expect("class seen").clone()));
        }
    }
    mapping.sort_by_key(|(cluster, _)| *cluster);
    Ok((correct as f64 / pred.len() as f64, mapping))
}

/// All three indices for one clustering.
pub fn evaluate<T: Eq + Hash + Clone>(pred: &[usize], truth: &[T]) -> Result<EvalReport<T>> {
    let (acc, mapping) = accuracy(pred, truth)?;
    let counts = pair_counts(pred, truth)?;
    let fm = f_measure(&counts);
    Ok(EvalReport {
        acc,
        ri: rand_index(&counts)?,
        f_measure: fm.f,
        precision: fm.precision,
        recall: fm.recall,
        mapping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    #[test]
    fn worked_example() {
        let c = pair_counts(&[0, 0, 0, 1], &["a", "a", "b", "b"]).unwrap();
        assert_eq!(
            c,
            PairCounts {
                true_positive: 1,
                false_positive: 2,
                false_negative: 1,
                true_negative: 2
            }
        );
        assert_eq!(rand_index(&c).unwrap(), 0.5);
        let f = f_measure(&c);
        assert!((f.precision - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.recall, 0.5);
        assert!((f.f - 0.4).abs() < 1e-15);
        let (acc, mapping) = accuracy(&[0, 0, 0, 1], &["a", "a", "b", "b"]).unwrap();
        assert_eq!(acc, 0.75);
        assert_eq!(mapping, vec![(0, "a"), (1, "b")]);
    }

    #[test]
    fn relabelled_perfect_clustering() {
        let (acc, mapping) = accuracy(&[0, 0, 1, 1], &["b", "b", "a", "a"]).unwrap();
        assert_eq!(acc, 1.0);
        assert_eq!(mapping, vec![(0, "b"), (1, "a")]);
        let c = pair_counts(&[0, 0, 1, 1], &["b", "b", "a", "a"]).unwrap();
        assert_eq!((c.false_positive, c.false_negative), (0, 0));
        assert_eq!(rand_index(&c).unwrap(), 1.0);
        let f = f_measure(&c);
        assert_eq!((f.precision, f.recall, f.f), (1.0, 1.0, 1.0));
    }

    #[test]
    fn one_cluster_all_distinct_classes() {
        let c = pair_counts(&[0; 5], &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(c.true_positive, 0);
        assert_eq!(c.true_negative, 0);
        assert_eq!(c.false_positive, 10);
        assert_eq!(f_measure(&c).f, 0.0);
    }

    #[test]
    fn overlapping_pair_sets() {
        // same-cluster plus same-class pairs exceed the total
        let c = pair_counts(&[0, 0, 0, 1], &[0, 0, 0, 1]).unwrap();
        assert_eq!((c.true_positive, c.true_negative), (3, 3));
        let c = pair_counts(&[0; 6], &[0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(c, oracle::pair_counts_bruteforce(&[0; 6], &[0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn more_clusters_than_classes() {
        let (acc, mapping) = accuracy(&[0, 1, 2, 2], &["x", "x", "y", "y"]).unwrap();
        assert_eq!(acc, 0.75);
        assert_eq!(mapping.len(), 2);
    }

    #[test]
    fn errors() {
        assert!(pair_counts(&[0, 1], &[0]).is_err());
        assert!(accuracy(&[0, 1], &[0]).is_err());
        assert!(rand_index(&PairCounts::default()).is_err());
    }

    fn labels_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
        (2usize..=50, 1usize..=6, 1usize..=6).prop_flat_map(|(n, kp, kt)| {
            (
                proptest::collection::vec(0..kp, n),
                proptest::collection::vec(0..kt, n),
            )
        })
    }

    proptest! {
        #[test]
        fn matches_pair_enumeration((pred, truth) in labels_strategy()) {
            let fast = pair_counts(&pred, &truth).unwrap();
            let slow = oracle::pair_counts_bruteforce(&pred, &truth);
            prop_assert_eq!(fast, slow);
            let n = pred.len() as u64;
            prop_assert_eq!(fast.total(), n * (n - 1) / 2);
        }

        #[test]
        fn accuracy_matches_exhaustive((pred, truth) in labels_strategy()) {
            let (acc, _) = accuracy(&pred, &truth).unwrap();
            prop_assert!((acc - oracle::accuracy_bruteforce(&pred, &truth)).abs() <= 1e-12);
        }

        #[test]
        fn permutation_invariant((pred, truth) in labels_strategy(), shift in 0usize..6) {
            let base = evaluate(&pred, &truth).unwrap();
            let pred2: Vec<usize> = pred.iter().map(|&c| (c + shift) % 6 + 10).collect();
            let truth2: Vec<usize> = truth.iter().map(|&c| 5 - c).collect();
            let other = evaluate(&pred2, &truth2).unwrap();
            prop_assert_eq!(base.acc, other.acc);
            prop_assert_eq!(base.ri, other.ri);
            prop_assert_eq!(base.f_measure, other.f_measure);
        }
    }
}
