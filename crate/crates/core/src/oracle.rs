//! Brute-force reference implementations used only by tests.
//!
//! Each routine here takes a deliberately different route from the
//! production code it checks (enumeration instead of greedy growth,
//! explicit pair loops instead of contingency algebra).

use crate::dataset::Dataset;
use crate::distance::DistanceMatrix;
use crate::eval::PairCounts;

/// The four-point line 0, 1, 2, 10 used in hand-worked examples.
pub fn l4() -> Dataset {
    Dataset::new("l4", vec![vec![0.0], vec![1.0], vec![2.0], vec![10.0]], None).unwrap()
}

/// Minimum total weight over every labelled spanning tree, enumerated through
/// Prüfer sequences (`n^(n-2)` trees).
pub fn min_spanning_tree_weight(dist: &DistanceMatrix) -> f64 {
    let n = dist.n();
    assert!(n >= 2);
    if n == 2 {
        return dist.get(0, 1);
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut best = f64::INFINITY;
    loop {
        best = best.min(prufer_weight(&seq, n, dist));
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == len {
                return best;
            }
            seq[pos] += 1;
            if seq[pos] < n {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

fn prufer_weight(seq: &[usize], n: usize, dist: &DistanceMatrix) -> f64 {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut total = 0.0;
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        total += dist.get(leaf, s);
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    total + dist.get(rest[0], rest[1])
}

/// The greedy max-min rule evaluated from scratch at every step: start at
/// the density maximum, then repeatedly take the candidate whose smallest
/// score to any chosen center is largest. Ties go to the lowest index.
pub fn greedy_maxmin(n: usize, nc: usize, rho: &[f64], score: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let mut first = 0;
    for v in 1..n {
        if rho[v] > rho[first] {
            first = v;
        }
    }
    let mut chosen = vec![first];
    while chosen.len() < nc {
        let mut best: Option<(usize, f64)> = None;
        for v in 0..n {
            if chosen.contains(&v) {
                continue;
            }
            let worst = chosen.iter().map(|&c| score(c, v)).fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(_, b)| worst > b) {
                best = Some((v, worst));
            }
        }
        chosen.push(best.unwrap().0);
    }
    chosen
}

/// Smallest SSE over every split of 1-D points into two non-empty groups.
pub fn best_two_partition_sse(xs: &[f64]) -> f64 {
    let n = xs.len();
    let sse = |group: &[f64]| {
        let mean = group.iter().sum::<f64>() / group.len() as f64;
        group.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
    };
    let mut best = f64::INFINITY;
    for mask in 1..(1u32 << n) - 1 {
        let pick = |side: bool| -> Vec<f64> {
            (0..n)
                .filter(|&i| (mask & (1 << i) != 0) == side)
                .map(|i| xs[i])
                .collect()
        };
        let (a, b) = (pick(true), pick(false));
        best = best.min(sse(&a) + sse(&b));
    }
    best
}

/// Pair counts by visiting every unordered pair.
pub fn pair_counts_bruteforce<P: PartialEq, T: PartialEq>(pred: &[P], truth: &[T]) -> PairCounts {
    let mut c = PairCounts::default();
    for i in 0..pred.len() {
        for j in (i + 1)..pred.len() {
            match (pred[i] == pred[j], truth[i] == truth[j]) {
                (true, true) => c.true_positive += 1,
                (true, false) => c.false_positive += 1,
                (false, true) => c.false_negative += 1,
                (false, false) => c.true_negative += 1,
            }
        }
    }
    c
}

/// Rand index straight from pair enumeration.
pub fn rand_index_bruteforce(pred: &[usize], truth: &[usize]) -> f64 {
    let c = pair_counts_bruteforce(pred, truth);
    (c.true_positive + c.true_negative) as f64
        / (c.true_positive + c.false_positive + c.false_negative + c.true_negative) as f64
}

/// Pair-counting F-measure straight from pair enumeration.
pub fn f_measure_bruteforce(pred: &[usize], truth: &[usize]) -> f64 {
    let c = pair_counts_bruteforce(pred, truth);
    let p = if c.true_positive + c.false_positive == 0 {
        0.0
    } else {
        c.true_positive as f64 / (c.true_positive + c.false_positive) as f64
    };
    let r = if c.true_positive + c.false_negative == 0 {
        0.0
    } else {
        c.true_positive as f64 / (c.true_positive + c.false_negative) as f64
    };
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Best accuracy over every one-to-one matching between cluster ids and
/// class ids (labels must be small non-negative integers, at most 8 distinct).
pub fn accuracy_bruteforce(pred: &[usize], truth: &[usize]) -> f64 {
    let kp = pred.iter().max().map_or(0, |m| m + 1);
    let kt = truth.iter().max().map_or(0, |m| m + 1);
    let m = kp.max(kt);
    assert!(m <= 8, "too many labels for exhaustive matching");
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best = 0usize;
    permute(&mut perm, 0, &mut |perm| {
        let correct = pred.iter().zip(truth).filter(|&(&p, &t)| perm[p] == t).count();
        best = best.max(correct);
    });
    best as f64 / pred.len() as f64
}

fn permute(v: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, visit);
        v.swap(k, i);
    }
}
