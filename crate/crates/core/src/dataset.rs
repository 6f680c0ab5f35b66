//! Dataset representation, loaders, the Gaussian-mixture generator and
//! seeded random sampling.
//!
//! All randomness in the crate goes through [`rng_from_seed`], a ChaCha8
//! stream seeded from a `u64`. ChaCha8 output is specified independently of
//! platform and word size, so a given seed reproduces the same sample on
//! every build.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The generator used for every seeded operation in this crate.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points in `p` dimensions, stored row-major, with optional class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    dim: usize,
    coords: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset from one vector per point.
    pub fn new(name: impl Into<String>, points: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidDataset(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(name, dim, coords, labels)
    }

    /// Builds a dataset from row-major coordinates.
    pub fn from_flat(
        name: impl Into<String>,
        dim: usize,
        coords: Vec<f64>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDataset("dimension must be at least 1".into()));
        }
        if coords.is_empty() {
            return Err(Error::Empty("dataset has no points".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidDataset(format!(
                "{} coordinates do not divide into rows of {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite coordinate in point {}",
                pos / dim
            )));
        }
        let n = coords.len() / dim;
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: labels.len(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            dim,
            coords,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false for a constructed dataset; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Labels mapped to dense ids in order of first appearance.
    pub fn label_ids(&self) -> Option<Vec<usize>> {
        let labels = self.labels.as_ref()?;
        let mut ids = HashMap::new();
        Some(
            labels
                .iter()
                .map(|l| {
                    let next = ids.len();
                    *ids.entry(l.as_str()).or_insert(next)
                })
                .collect(),
        )
    }

    /// Number of distinct labels, if labelled.
    pub fn num_classes(&self) -> Option<usize> {
        self.label_ids()
            .map(|ids| ids.iter().copied().max().map_or(0, |m| m + 1))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The sub-dataset induced by `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i].clone()).collect());
        Self {
            name: self.name.clone(),
            dim: self.dim,
            coords,
            labels,
        }
    }

    /// Every coordinate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }

    /// Writes the dataset as CSV with a header row; labels, if any, go last.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (0..self.dim).map(|j| format!("x{j}")).collect();
        if self.labels.is_some() {
            header.push("label".into());
        }
        w.write_record(&header).map_err(csv_write_err)?;
        for (i, p) in self.points().enumerate() {
            let mut rec: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            if let Some(labels) = &self.labels {
                rec.push(labels[i].clone());
            }
            w.write_record(&rec).map_err(csv_write_err)?;
        }
        w.flush().map_err(|e| Error::Io {
            path: "<csv writer>".into(),
            source: e,
        })
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| io_err(path, e))?;
        self.write_csv(file)
    }
}

fn csv_write_err(e: csv::Error) -> Error {
    Error::Io {
        path: "<csv writer>".into(),
        source: e.into(),
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Which CSV column holds the class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    Index(usize),
    Last,
}

impl LabelColumn {
    fn resolve(self, width: usize) -> usize {
        match self {
            LabelColumn::Index(i) => i,
            LabelColumn::Last => width.saturating_sub(1),
        }
    }
}

impl std::str::FromStr for LabelColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("last") {
            return Ok(LabelColumn::Last);
        }
        s.parse().map(LabelColumn::Index).map_err(|_| {
            Error::InvalidParameter(format!("label column {s:?} is neither an index nor \"last\""))
        })
    }
}

/// Loads a comma-delimited file. The first row is treated as a header when
/// none of its fields parses as a number.
pub fn load_csv(path: &Path, label_column: Option<LabelColumn>) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    read_csv(file, label_column).map(|d| d.with_name(dataset_name(path)))
}

pub fn read_csv<R: std::io::Read>(input: R, label_column: Option<LabelColumn>) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let mut width = None;
    let mut label_idx = None;
    let mut coords = Vec::new();
    let mut labels = Vec::new();
    let mut first = true;

    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if first {
            first = false;
            if record.iter().all(|f| f.parse::<f64>().is_err()) {
                width = Some(record.len());
                continue;
            }
        }
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(Error::Parse {
                line,
                message: format!("expected {w} fields, found {}", record.len()),
            });
        }
        let li = *label_idx.get_or_insert_with(|| label_column.map(|c| c.resolve(w)));
        if let Some(li) = li {
            if li >= w {
                return Err(Error::Parse {
                    line,
                    message: format!("label column {li} out of range for {w} fields"),
                });
            }
        }
        for (j, field) in record.iter().enumerate() {
            if Some(j) == li {
                labels.push(field.to_string());
                continue;
            }
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("field {} ({field:?}) is not a number", j + 1),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("field {} is not finite", j + 1),
                });
            }
            coords.push(v);
        }
    }

    let Some(w) = width else {
        return Err(Error::Empty("no rows in CSV input".into()));
    };
    if coords.is_empty() && labels.is_empty() {
        return Err(Error::Empty("CSV input has a header but no data rows".into()));
    }
    let dim = w - usize::from(label_idx.flatten().is_some());
    let labels = label_idx.flatten().map(|_| labels);
    Dataset::from_flat("", dim, coords, labels)
}

/// Loads a LIBSVM / SVMlight file into a dense dataset whose dimension is
/// the largest feature index that appears anywhere in the file.
pub fn load_libsvm(path: &Path) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    read_libsvm(BufReader::new(file)).map(|d| d.with_name(dataset_name(path)))
}

pub fn read_libsvm<R: BufRead>(input: R) -> Result<Dataset> {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut dim = 0;

    for (n, line) in input.lines().enumerate() {
        let lineno = n + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let content = line.split('#').next().unwrap_or_default().trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label = tokens.next().unwrap_or_default().to_string();
        let mut features = Vec::new();
        let mut last = 0;
        for tok in tokens {
            let (idx, val) = tok.split_once(':').ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("token {tok:?} is not index:value"),
            })?;
            let idx: usize = idx.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad feature index in {tok:?}"),
            })?;
            let val: f64 = val.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad feature value in {tok:?}"),
            })?;
            if idx == 0 || idx <= last {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("feature index {idx} is not 1-based strictly increasing"),
                });
            }
            if !val.is_finite() {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("feature {idx} is not finite"),
                });
            }
            last = idx;
            features.push((idx, val));
        }
        dim = dim.max(last);
        rows.push(features);
        labels.push(label);
    }

    if rows.is_empty() {
        return Err(Error::Empty("no rows in LIBSVM input".into()));
    }
    if dim == 0 {
        return Err(Error::InvalidDataset("LIBSVM input has no features".into()));
    }
    let mut coords = vec![0.0; rows.len() * dim];
    for (i, row) in rows.iter().enumerate() {
        for &(idx, val) in row {
            coords[i * dim + idx - 1] = val;
        }
    }
    Dataset::from_flat("", dim, coords, Some(labels))
}

/// One Gaussian component of a [`MixtureSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

/// A Gaussian mixture with a fixed number of draws per component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<MixtureComponent>,
    pub points_per_component: usize,
    pub rng_seed: u64,
}

impl MixtureSpec {
    /// Equal-weight isotropic mixture with variance `variance` on every axis.
    pub fn isotropic(means: &[Vec<f64>], variance: f64, points_per_component: usize, rng_seed: u64) -> Self {
        let k = means.len() as f64;
        let components = means
            .iter()
            .map(|m| MixtureComponent {
                weight: 1.0 / k,
                mean: m.clone(),
                covariance: (0..m.len())
                    .map(|i| {
                        (0..m.len())
                            .map(|j| if i == j { variance } else { 0.0 })
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        Self {
            components,
            points_per_component,
            rng_seed,
        }
    }

    fn validate(&self) -> Result<usize> {
        let first = self
            .components
            .first()
            .ok_or_else(|| Error::InvalidParameter("mixture has no components".into()))?;
        let dim = first.mean.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("component mean is empty".into()));
        }
        if self.points_per_component == 0 {
            return Err(Error::InvalidParameter(
                "points_per_component must be positive".into(),
            ));
        }
        let mut total = 0.0;
        for (c, comp) in self.components.iter().enumerate() {
            if comp.weight.is_nan() || comp.weight <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "component {c} has non-positive weight"
                )));
            }
            total += comp.weight;
            if comp.mean.len() != dim
                || comp.covariance.len() != dim
                || comp.covariance.iter().any(|r| r.len() != dim)
            {
                return Err(Error::InvalidParameter(format!(
                    "component {c} does not match dimension {dim}"
                )));
            }
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        Ok(dim)
    }
}

/// Draws `points_per_component` samples from every component; labels are the
/// component indices.
pub fn generate_mixture(spec: &MixtureSpec) -> Result<Dataset> {
    let dim = spec.validate()?;
    let mut factors = Vec::with_capacity(spec.components.len());
    for (c, comp) in spec.components.iter().enumerate() {
        let cov = DMatrix::from_fn(dim, dim, |i, j| comp.covariance[i][j]);
        let symmetric = (0..dim).all(|i| (0..i).all(|j| cov[(i, j)] == cov[(j, i)]));
        let chol = cov
            .cholesky()
            .filter(|_| symmetric)
            .ok_or(Error::NotPositiveDefinite(c))?;
        factors.push(chol.l());
    }

    let mut rng = rng_from_seed(spec.rng_seed);
    let total = spec.components.len() * spec.points_per_component;
    let mut coords = Vec::with_capacity(total * dim);
    let mut labels = Vec::with_capacity(total);
    let mut z = vec![0.0; dim];
    for (c, (comp, l)) in spec.components.iter().zip(&factors).enumerate() {
        for _ in 0..spec.points_per_component {
            for zi in z.iter_mut() {
                *zi = StandardNormal.sample(&mut rng);
            }
            for i in 0..dim {
                let offset: f64 = (0..=i).map(|j| l[(i, j)] * z[j]).sum();
                coords.push(comp.mean[i] + offset);
            }
            labels.push(c.to_string());
        }
    }
    Dataset::from_flat("mixture", dim, coords, Some(labels))
}

/// `size` distinct indices drawn uniformly without replacement from `0..n`,
/// returned in ascending order.
pub fn random_sample(n: usize, size: usize, rng_seed: u64) -> Result<Vec<usize>> {
    let mut idx = random_sample_unordered(n, size, rng_seed)?;
    idx.sort_unstable();
    Ok(idx)
}

/// Like [`random_sample`] but in draw order.
pub fn random_sample_unordered(n: usize, size: usize, rng_seed: u64) -> Result<Vec<usize>> {
    if size == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    if size > n {
        return Err(Error::InvalidParameter(format!(
            "sample size {size} exceeds population {n}"
        )));
    }
    let mut rng = rng_from_seed(rng_seed);
    Ok(rand::seq::index::sample(&mut rng, n, size).into_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use std::io::Cursor;

    #[test]
    fn csv_label_column_split() {
        let d = read_csv(Cursor::new("0.5,1.2,1\n"), Some(LabelColumn::Index(2))).unwrap();
        assert_eq!(d.point(0), &[0.5, 1.2]);
        assert_eq!(d.labels().unwrap(), &["1".to_string()]);
    }

    #[test]
    fn csv_without_labels() {
        let d = read_csv(Cursor::new("1,2\n3,4\n5,6\n"), None).unwrap();
        assert_eq!((d.len(), d.dim()), (3, 2));
        assert!(d.labels().is_none());
    }

    #[test]
    fn csv_bad_field_names_row() {
        let err = read_csv(Cursor::new("0.5,abc\n"), None).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn csv_header_and_ragged_row() {
        let d = read_csv(Cursor::new("a,b,class\n1,2,x\n3,4,y\n"), Some(LabelColumn::Last)).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.num_classes(), Some(2));

        let err = read_csv(Cursor::new("1,2\n3\n"), None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn csv_empty() {
        assert!(matches!(read_csv(Cursor::new(""), None), Err(Error::Empty(_))));
        assert!(matches!(
            read_csv(Cursor::new("a,b\n"), None),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn csv_round_trip() {
        let d = Dataset::new(
            "rt",
            vec![vec![0.1, -3.25e-7], vec![1.0 / 3.0, 12345.678]],
            Some(vec!["a".into(), "b".into()]),
        )
        .unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let back = read_csv(Cursor::new(buf), Some(LabelColumn::Last)).unwrap();
        assert_eq!(back.coords(), d.coords());
        assert_eq!(back.labels(), d.labels());
    }

    #[test]
    fn libsvm_dense_expansion() {
        let d = read_libsvm(Cursor::new("2 1:0.5 3:-1\n1\n")).unwrap();
        assert_eq!(d.dim(), 3);
        assert_eq!(d.point(0), &[0.5, 0.0, -1.0]);
        assert_eq!(d.point(1), &[0.0, 0.0, 0.0]);
        assert_eq!(d.labels().unwrap(), &["2".to_string(), "1".to_string()]);

        let d = read_libsvm(Cursor::new("1 2:1\n0 4:2\n")).unwrap();
        assert_eq!(d.dim(), 4);
        assert_eq!(d.point(0), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn libsvm_errors() {
        assert!(read_libsvm(Cursor::new("1 3:1 2:1\n")).is_err());
        assert!(read_libsvm(Cursor::new("1 2:1 2:1\n")).is_err());
        assert!(read_libsvm(Cursor::new("1 0:1\n")).is_err());
        assert!(read_libsvm(Cursor::new("1 a:1\n")).is_err());
        assert!(read_libsvm(Cursor::new("1 1:x\n")).is_err());
    }

    fn fig2a(seed: u64) -> MixtureSpec {
        MixtureSpec::isotropic(&[vec![0.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]], 0.01, 20, seed)
    }

    #[test]
    fn mixture_shape_and_determinism() {
        let d = generate_mixture(&fig2a(1)).unwrap();
        assert_eq!((d.len(), d.dim()), (60, 2));
        assert_eq!(d.num_classes(), Some(3));
        assert_eq!(d, generate_mixture(&fig2a(1)).unwrap());
        assert_ne!(d, generate_mixture(&fig2a(2)).unwrap());
    }

    #[test]
    fn mixture_sample_mean() {
        let spec = MixtureSpec::isotropic(&[vec![0.0, 0.0]], 0.01, 10_000, 9);
        let d = generate_mixture(&spec).unwrap();
        for j in 0..2 {
            let mean = d.points().map(|p| p[j]).sum::<f64>() / d.len() as f64;
            assert!(mean.abs() < 0.01, "coordinate {j} mean {mean}");
        }
    }

    #[test]
    fn mixture_rejects_bad_covariance() {
        let mut spec = fig2a(0);
        spec.components[1].covariance = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert!(matches!(
            generate_mixture(&spec),
            Err(Error::NotPositiveDefinite(1))
        ));
        let mut spec = fig2a(0);
        spec.components[0].covariance = vec![vec![1.0, 0.5], vec![0.0, 1.0]];
        assert!(matches!(
            generate_mixture(&spec),
            Err(Error::NotPositiveDefinite(0))
        ));
        let mut spec = fig2a(0);
        spec.components[0].weight = 0.5;
        assert!(generate_mixture(&spec).is_err());
    }

    #[test]
    fn sample_sizes() {
        let s = random_sample(100, 10, 3).unwrap();
        assert_eq!(s.iter().collect::<BTreeSet<_>>().len(), 10);
        assert!(s.iter().all(|&i| i < 100));
        assert_eq!(random_sample(5, 5, 11).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(random_sample(4, 5, 0).is_err());
        assert!(random_sample(4, 0, 0).is_err());
        assert_eq!(
            random_sample(50, 7, 42).unwrap(),
            random_sample(50, 7, 42).unwrap()
        );
    }

    #[test]
    fn sample_coverage() {
        let n = 20;
        let mut seen = vec![false; n];
        for seed in 0..(50 * n as u64) {
            seen[random_sample(n, 1, seed).unwrap()[0]] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn invalid_datasets() {
        assert!(Dataset::new("x", vec![], None).is_err());
        assert!(Dataset::new("x", vec![vec![1.0], vec![1.0, 2.0]], None).is_err());
        assert!(Dataset::new("x", vec![vec![f64::NAN]], None).is_err());
        assert!(Dataset::new("x", vec![vec![1.0]], Some(vec![])).is_err());
    }
}
