//! Minimum spanning tree over the complete Euclidean graph, skeleton points
//! and the density threshold derived from them.
//!
//! The skeleton is found by grouping tree vertices by degree. For each degree
//! class `U_i` we count how many vertices outside the class touch it (each
//! outside vertex counted once, however many class members it touches). The
//! degree `F` with the largest count wins, and every vertex of degree `>= F`
//! is a skeleton point. The threshold is the mean, over skeleton points, of an
//! aggregate (max by default) of the tree-edge weights incident to each one.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MstEdge {
    /// Endpoint already in the tree when the edge was added.
    pub u: usize,
    /// Endpoint the edge brought into the tree.
    pub v: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mst {
    edges: Vec<MstEdge>,
    degree: Vec<usize>,
    max_degree: usize,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Mst {
    /// Builds a tree from an explicit edge list. Used for hand-made trees;
    /// the edges must form a spanning tree over `0..n`.
    pub fn from_edges(n: usize, edges: Vec<MstEdge>) -> Result<Self> {
        if n < 2 || edges.len() != n - 1 {
            return Err(Error::InvalidParameter(format!(
                "a spanning tree on {n} vertices needs {} edges, got {}",
                n.saturating_sub(1),
                edges.len()
            )));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut degree = vec![0; n];
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({}, {}) out of range",
                    e.u, e.v
                )));
            }
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a == b {
                return Err(Error::InvalidParameter("edges contain a cycle".into()));
            }
            parent[a] = b;
            adjacency[e.u].push((e.v, e.weight));
            adjacency[e.v].push((e.u, e.weight));
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let max_degree = degree.iter().copied().max().unwrap_or(0);
        Ok(Self {
            edges,
            degree,
            max_degree,
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.degree.len()
    }

    pub fn edges(&self) -> &[MstEdge] {
        &self.edges
    }

    pub fn degree(&self) -> &[usize] {
        &self.degree
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Tree neighbours of `v` with the connecting edge weight.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Debug dump, one `u v weight` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.edges {
            writeln!(out, "{} {} {}", e.u, e.v, e.weight)?;
        }
        Ok(())
    }
}

/// Dense Prim's algorithm rooted at vertex 0.
///
/// Each step adds the cheapest edge leaving the tree; ties go to the lowest
/// `(tree vertex, outside vertex)` pair so the result is reproducible.
pub fn prim_mst(dist: &DistanceMatrix) -> Result<Mst> {
    let n = dist.n();
    if n < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            found: n,
        });
    }
    let mut in_tree = vec![false; n];
    let mut key = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);

    in_tree[0] = true;
    key[1..].copy_from_slice(&dist.row(0)[1..]);
    for _ in 1..n {
        let mut best: Option<usize> = None;
        for v in (0..n).filter(|&v| !in_tree[v]) {
            best = match best {
                Some(b) if (key[b], parent[b]) <= (key[v], parent[v]) => Some(b),
                _ => Some(v),
            };
        }
        let v = best.expect("an outside vertex remains");
        in_tree[v] = true;
        edges.push(MstEdge {
            u: parent[v],
            v,
            weight: key[v],
        });
        let row = dist.row(v);
        for w in 0..n {
            if in_tree[w] {
                continue;
            }
            if row[w] < key[w] || (row[w] == key[w] && v < parent[w]) {
                key[w] = row[w];
                parent[w] = v;
            }
        }
    }
    Mst::from_edges(n, edges)
}

/// How each skeleton point's incident tree-edge weights are reduced before
/// averaging into the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdMode {
    #[default]
    Max,
    Mean,
    Min,
}

impl ThresholdMode {
    pub const ALL: [ThresholdMode; 3] = [ThresholdMode::Min, ThresholdMode::Mean, ThresholdMode::Max];

    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdMode::Max => "max",
            ThresholdMode::Mean => "mean",
            ThresholdMode::Min => "min",
        }
    }

    fn aggregate(self, weights: impl Iterator<Item = f64>) -> f64 {
        match self {
            ThresholdMode::Max => weights.fold(f64::NEG_INFINITY, f64::max),
            ThresholdMode::Min => weights.fold(f64::INFINITY, f64::min),
            ThresholdMode::Mean => {
                let (sum, count) = weights.fold((0.0, 0usize), |(s, c), w| (s + w, c + 1));
                sum / count as f64
            }
        }
    }
}

impl std::fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ThresholdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "max" => Ok(ThresholdMode::Max),
            "mean" => Ok(ThresholdMode::Mean),
            "min" => Ok(ThresholdMode::Min),
            _ => Err(Error::InvalidParameter(format!("unknown threshold mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonResult {
    /// Degree `i` to the vertices of that degree (`U_i`); only occupied degrees.
    pub degree_sets: BTreeMap<usize, Vec<usize>>,
    /// Degree `i` to the number of outside vertices adjacent to `U_i` (`f_i`).
    pub adjacency_counts: BTreeMap<usize, usize>,
    pub chosen_degree: usize,
    /// Skeleton vertices in ascending order.
    pub skeleton: Vec<usize>,
    /// Largest incident tree-edge weight of each skeleton vertex, aligned with `skeleton`.
    pub max_adjacent_weights: Vec<f64>,
    /// Set by [`SkeletonResult::apply_threshold`].
    pub threshold: Option<f64>,
}

impl SkeletonResult {
    pub fn skeleton_size(&self) -> usize {
        self.skeleton.len()
    }

    /// Computes the threshold for `mode` and stores it.
    pub fn apply_threshold(&mut self, tree: &Mst, mode: ThresholdMode) -> f64 {
        let thr = threshold(tree, self, mode);
        self.threshold = Some(thr);
        thr
    }
}

/// Partitions the tree's vertices by degree and picks the skeleton.
///
/// Ties in `f_i` go to the largest degree.
pub fn skeleton_points(tree: &Mst) -> SkeletonResult {
    let n = tree.n();
    let degree = tree.degree();
    let mut degree_sets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &d) in degree.iter().enumerate() {
        degree_sets.entry(d).or_default().push(v);
    }

    // stamp[w] == i + 1 marks w as already counted for class i
    let mut stamp = vec![0usize; n];
    let mut adjacency_counts = BTreeMap::new();
    for (&i, members) in &degree_sets {
        let mut count = 0;
        for &u in members {
            for &(w, _) in tree.neighbors(u) {
                if degree[w] != i && stamp[w] != i + 1 {
                    stamp[w] = i + 1;
                    count += 1;
                }
            }
        }
        adjacency_counts.insert(i, count);
    }

    let (&chosen_degree, _) = adjacency_counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
        .expect("a tree has at least one degree class");

    let skeleton: Vec<usize> = (0..n).filter(|&v| degree[v] >= chosen_degree).collect();
    let max_adjacent_weights = skeleton
        .iter()
        .map(|&v| ThresholdMode::Max.aggregate(tree.neighbors(v).iter().map(|e| e.1)))
        .collect();

    SkeletonResult {
        degree_sets,
        adjacency_counts,
        chosen_degree,
        skeleton,
        max_adjacent_weights,
        threshold: None,
    }
}

/// Mean over skeleton points of the `mode`-aggregate of their incident
/// tree-edge weights.
pub fn threshold(tree: &Mst, skel: &SkeletonResult, mode: ThresholdMode) -> f64 {
    assert!(
        !skel.skeleton.is_empty(),
        "skeleton cannot be empty for a valid tree"
    );
    let total: f64 = skel
        .skeleton
        .iter()
        .map(|&v| mode.aggregate(tree.neighbors(v).iter().map(|e| e.1)))
        .sum();
    total / skel.skeleton.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use crate::distance::pairwise_distances;
    use crate::oracle;
    use crate::testutil::l4;
    use proptest::prelude::*;

    fn edge(u: usize, v: usize, weight: f64) -> MstEdge {
        MstEdge { u, v, weight }
    }

    #[test]
    fn l4_tree() {
        let t = prim_mst(&pairwise_distances(&l4()).unwrap()).unwrap();
        let pairs: Vec<_> = t.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(t.total_weight(), 10.0);
        assert_eq!(t.degree(), &[1, 2, 2, 1]);
        assert_eq!(t.max_degree(), 2);
    }

    #[test]
    fn two_points() {
        let d = Dataset::new("two", vec![vec![0.0], vec![3.0]], None).unwrap();
        let t = prim_mst(&pairwise_distances(&d).unwrap()).unwrap();
        assert_eq!(t.edges(), &[edge(0, 1, 3.0)]);
        let s = skeleton_points(&t);
        assert_eq!(s.degree_sets[&1], vec![0, 1]);
        // W_1 is empty, so nothing outside the class can touch it
        assert_eq!(s.adjacency_counts[&1], 0);
        assert_eq!(s.chosen_degree, 1);
        assert_eq!(s.skeleton, vec![0, 1]);
    }

    #[test]
    fn l4_skeleton_and_thresholds() {
        let t = prim_mst(&pairwise_distances(&l4()).unwrap()).unwrap();
        let mut s = skeleton_points(&t);
        assert_eq!(s.degree_sets[&1], vec![0, 3]);
        assert_eq!(s.degree_sets[&2], vec![1, 2]);
        assert_eq!(s.adjacency_counts[&1], 2);
        assert_eq!(s.adjacency_counts[&2], 2);
        assert_eq!(s.chosen_degree, 2);
        assert_eq!(s.skeleton, vec![1, 2]);
        assert_eq!(s.max_adjacent_weights, vec![1.0, 8.0]);
        assert_eq!(threshold(&t, &s, ThresholdMode::Max), 4.5);
        assert_eq!(threshold(&t, &s, ThresholdMode::Mean), 2.75);
        assert_eq!(threshold(&t, &s, ThresholdMode::Min), 1.0);
        assert_eq!(s.apply_threshold(&t, ThresholdMode::Max), 4.5);
        assert_eq!(s.threshold, Some(4.5));
    }

    #[test]
    fn star_counts_shared_neighbour_once() {
        // centre 0, leaves 1..=3
        let t = Mst::from_edges(4, vec![edge(0, 1, 1.0), edge(0, 2, 2.0), edge(0, 3, 3.0)]).unwrap();
        let s = skeleton_points(&t);
        assert_eq!(s.degree_sets[&1], vec![1, 2, 3]);
        assert_eq!(s.degree_sets[&3], vec![0]);
        // the centre touches all three leaves but counts once for U_1
        assert_eq!(s.adjacency_counts[&1], 1);
        assert_eq!(s.adjacency_counts[&3], 3);
        assert_eq!(s.chosen_degree, 3);
        assert_eq!(s.skeleton, vec![0]);
        assert_eq!(threshold(&t, &s, ThresholdMode::Max), 3.0);
        assert_eq!(threshold(&t, &s, ThresholdMode::Mean), 2.0);
    }

    #[test]
    fn edge_list_dump() {
        let t = prim_mst(&pairwise_distances(&l4()).unwrap()).unwrap();
        let mut buf = Vec::new();
        t.write_edge_list(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 1 1\n1 2 1\n2 3 8\n");
    }

    #[test]
    fn rejects_non_trees() {
        assert!(Mst::from_edges(3, vec![edge(0, 1, 1.0)]).is_err());
        assert!(Mst::from_edges(3, vec![edge(0, 1, 1.0), edge(1, 0, 1.0)]).is_err());
    }

    fn points_strategy() -> impl Strategy<Value = Dataset> {
        (3usize..=7, 1usize..=3).prop_flat_map(|(n, p)| {
            proptest::collection::vec(proptest::collection::vec(-10.0f64..10.0, p), n)
                .prop_map(|pts| Dataset::new("rand", pts, None).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn prim_matches_enumeration(data in points_strategy()) {
            let dist = pairwise_distances(&data).unwrap();
            let t = prim_mst(&dist).unwrap();
            let best = oracle::min_spanning_tree_weight(&dist);
            prop_assert!((t.total_weight() - best).abs() <= 1e-12);
            prop_assert_eq!(t.degree().iter().sum::<usize>(), 2 * (data.len() - 1));
        }

        #[test]
        fn threshold_modes_ordered(data in points_strategy()) {
            let t = prim_mst(&pairwise_distances(&data).unwrap()).unwrap();
            let s = skeleton_points(&t);
            let lo = threshold(&t, &s, ThresholdMode::Min);
            let mid = threshold(&t, &s, ThresholdMode::Mean);
            let hi = threshold(&t, &s, ThresholdMode::Max);
            prop_assert!(lo <= mid + 1e-12 && mid <= hi + 1e-12);
        }

        #[test]
        fn power_of_two_scaling(data in points_strategy(), exp in -3i32..=3) {
            let c = 2f64.powi(exp);
            let t = prim_mst(&pairwise_distances(&data).unwrap()).unwrap();
            let ts = prim_mst(&pairwise_distances(&data.scaled(c)).unwrap()).unwrap();
            let (s, ss) = (skeleton_points(&t), skeleton_points(&ts));
            prop_assert_eq!(&s.skeleton, &ss.skeleton);
            prop_assert_eq!(threshold(&ts, &ss, ThresholdMode::Max), c * threshold(&t, &s, ThresholdMode::Max));
        }
    }
}
