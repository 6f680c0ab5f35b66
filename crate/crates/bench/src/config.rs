//! TOML benchmark configuration.
//!
//! See `configs/example.toml` in the repository for an annotated example.

use std::path::{Path, PathBuf};

use aimk_core::dataset::{load_csv, load_libsvm};
use aimk_core::{Dataset, LabelColumn, LloydConfig, SeedMethod, ThresholdMode};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// Repeats used for stochastic seeders when a method entry leaves it out.
pub const DEFAULT_STOCHASTIC_REPEATS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub datasets: Vec<DatasetEntry>,
    #[serde(default)]
    pub methods: Vec<MethodEntry>,
    #[serde(default)]
    pub kmeans: KmeansSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    #[default]
    Csv,
    Libsvm,
}

impl DataFormat {
    /// `.csv` files are CSV, anything else is treated as LIBSVM.
    pub fn infer(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => DataFormat::Csv,
            _ => DataFormat::Libsvm,
        }
    }
}

impl std::str::FromStr for DataFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(DataFormat::Csv),
            "libsvm" | "svm" => Ok(DataFormat::Libsvm),
            _ => Err(BenchError::Invalid(format!("unknown data format {s:?}"))),
        }
    }
}

/// Label column as written in the config: an integer index, `"last"` or
/// `"none"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelSpec {
    Index(usize),
    Named(String),
}

impl Default for LabelSpec {
    fn default() -> Self {
        LabelSpec::Named("last".into())
    }
}

impl LabelSpec {
    pub fn resolve(&self) -> Result<Option<LabelColumn>> {
        match self {
            LabelSpec::Index(i) => Ok(Some(LabelColumn::Index(*i))),
            LabelSpec::Named(s) if s.eq_ignore_ascii_case("none") => Ok(None),
            LabelSpec::Named(s) => Ok(Some(s.parse()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub name: String,
    /// Relative paths are resolved against the config file's directory.
    pub path: PathBuf,
    #[serde(default)]
    pub format: DataFormat,
    /// Ignored for LIBSVM, whose label is always the first token.
    #[serde(default)]
    pub label_column: LabelSpec,
    /// Number of clusters; defaults to the number of distinct labels.
    #[serde(default)]
    pub k: Option<usize>,
}

impl DatasetEntry {
    pub fn load(&self) -> Result<Dataset> {
        let data = load_dataset(&self.path, self.format, self.label_column.resolve()?)?;
        Ok(data.with_name(self.name.clone()))
    }
}

pub fn load_dataset(path: &Path, format: DataFormat, label_column: Option<LabelColumn>) -> Result<Dataset> {
    Ok(match format {
        DataFormat::Csv => load_csv(path, label_column)?,
        DataFormat::Libsvm => load_libsvm(path)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodEntry {
    pub method: SeedMethod,
    /// Only read by the hybrid-distance seeders.
    #[serde(default)]
    pub lambda: f64,
    #[serde(default)]
    pub thr_mode: ThresholdMode,
    #[serde(default)]
    pub repeats: Option<usize>,
    /// Base seed; repeat `i` uses `seed + i`.
    #[serde(default)]
    pub seed: u64,
}

impl MethodEntry {
    pub fn repeats(&self) -> usize {
        self.repeats.unwrap_or(if self.method.is_stochastic() {
            DEFAULT_STOCHASTIC_REPEATS
        } else {
            1
        })
    }

    /// `Some` only for methods that read it.
    pub fn lambda(&self) -> Option<f64> {
        self.method.uses_hybrid_distance().then_some(self.lambda)
    }

    pub fn thr_mode(&self) -> Option<ThresholdMode> {
        self.method.uses_hybrid_distance().then_some(self.thr_mode)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KmeansSection {
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_shift_tol")]
    pub shift_tol: f64,
}

fn default_max_iter() -> usize {
    LloydConfig::default().max_iter
}

fn default_shift_tol() -> f64 {
    LloydConfig::default().shift_tol
}

impl Default for KmeansSection {
    fn default() -> Self {
        Self {
            max_iter: default_max_iter(),
            shift_tol: default_shift_tol(),
        }
    }
}

impl From<KmeansSection> for LloydConfig {
    fn from(k: KmeansSection) -> Self {
        LloydConfig {
            max_iter: k.max_iter,
            shift_tol: k.shift_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "table" => Ok(OutputFormat::Table),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(BenchError::Invalid(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub format: OutputFormat,
    /// Report file; stdout when absent.
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// Record wall-clock time per row. Turn off for byte-identical reports.
    #[serde(default = "default_timing")]
    pub timing: bool,
}

fn default_timing() -> bool {
    true
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            format: OutputFormat::default(),
            path: None,
            timing: true,
        }
    }
}

impl BenchConfig {
    /// Reads, validates and resolves relative paths against the file's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config = Self::from_toml(&text).map_err(|e| match e {
            BenchError::Invalid(message) => BenchError::Config {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for d in &mut config.datasets {
            if d.path.is_relative() {
                d.path = base.join(&d.path);
            }
        }
        if let Some(out) = &mut config.output.path {
            if out.is_relative() && *out != Path::new("-") {
                *out = base.join(&*out);
            }
        }
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| BenchError::Invalid(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(BenchError::Invalid("no methods configured".into()));
        }
        if self.datasets.is_empty() {
            return Err(BenchError::Invalid("no datasets configured".into()));
        }
        for d in &self.datasets {
            d.label_column.resolve()?;
            if d.k.is_some_and(|k| k < 2) {
                return Err(BenchError::Invalid(format!(
                    "dataset {}: k must be at least 2",
                    d.name
                )));
            }
        }
        for (i, m) in self.methods.iter().enumerate() {
            let repeats = m.repeats();
            if repeats == 0 {
                return Err(BenchError::Invalid(format!(
                    "method #{}: repeats must be at least 1",
                    i + 1
                )));
            }
            if !m.method.is_stochastic() && repeats != 1 {
                return Err(BenchError::Invalid(format!(
                    "method #{} ({}) is deterministic and needs repeats = 1",
                    i + 1,
                    m.method
                )));
            }
            if !(0.0..=1.0).contains(&m.lambda) {
                return Err(BenchError::Invalid(format!(
                    "method #{}: lambda {} is outside [0, 1]",
                    i + 1,
                    m.lambda
                )));
            }
        }
        if self.kmeans.max_iter == 0 {
            return Err(BenchError::Invalid("kmeans.max_iter must be at least 1".into()));
        }
        if self.kmeans.shift_tol.is_nan() || self.kmeans.shift_tol < 0.0 {
            return Err(BenchError::Invalid(
                "kmeans.shift_tol must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [[datasets]]
        name = "l4"
        path = "l4.csv"

        [[methods]]
        method = "aimk"
        lambda = 1.0
    "#;

    #[test]
    fn defaults() {
        let c = BenchConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.datasets[0].format, DataFormat::Csv);
        assert_eq!(
            c.datasets[0].label_column.resolve().unwrap(),
            Some(LabelColumn::Last)
        );
        assert_eq!(c.methods[0].repeats(), 1);
        assert_eq!(c.methods[0].thr_mode, ThresholdMode::Max);
        assert_eq!(c.kmeans, KmeansSection::default());
        assert_eq!(c.output.format, OutputFormat::Table);
        assert!(c.output.timing);
    }

    #[test]
    fn stochastic_default_repeats() {
        let c = BenchConfig::from_toml(&format!("{MINIMAL}\n[[methods]]\nmethod = \"forgy\"\n")).unwrap();
        assert_eq!(c.methods[1].repeats(), 10);
        assert_eq!(c.methods[1].lambda(), None);
    }

    #[test]
    fn rejects() {
        let no_methods = "[[datasets]]\nname = \"a\"\npath = \"a.csv\"\n";
        let err = BenchConfig::from_toml(no_methods).unwrap_err();
        assert_eq!(err.to_string(), "no methods configured");

        let bad_tag = format!("{MINIMAL}\n[[methods]]\nmethod = \"bogus\"\n");
        assert!(BenchConfig::from_toml(&bad_tag).is_err());

        let aimk_repeats = MINIMAL.replace("lambda = 1.0", "repeats = 3");
        assert!(BenchConfig::from_toml(&aimk_repeats).is_err());

        let bad_lambda = MINIMAL.replace("lambda = 1.0", "lambda = 1.5");
        assert!(BenchConfig::from_toml(&bad_lambda).is_err());

        let zero = format!("{MINIMAL}\n[[methods]]\nmethod = \"forgy\"\nrepeats = 0\n");
        assert!(BenchConfig::from_toml(&zero).is_err());

        let label = MINIMAL.replace("path = \"l4.csv\"", "path = \"l4.csv\"\nlabel_column = \"first\"");
        assert!(BenchConfig::from_toml(&label).is_err());
    }

    #[test]
    fn label_specs() {
        assert_eq!(
            LabelSpec::Index(2).resolve().unwrap(),
            Some(LabelColumn::Index(2))
        );
        assert_eq!(LabelSpec::Named("NONE".into()).resolve().unwrap(), None);
    }
}
