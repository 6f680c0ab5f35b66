use std::collections::BTreeMap;
use std::time::Instant;

use aimk_core::eval::evaluate;
use aimk_core::seeding::seed;
use aimk_core::{lloyd, AimkModel, Dataset, LloydConfig, SeedMethod, SeedSet, ThresholdMode};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{BenchConfig, MethodEntry};
use crate::error::{BenchError, Result};

/// One (dataset, method, lambda, thr_mode) combination. Scores are means over
/// the repeats, with population standard deviations alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub method: SeedMethod,
    pub lambda: Option<f64>,
    pub thr_mode: Option<ThresholdMode>,
    pub n: usize,
    pub k: usize,
    pub repeats: usize,
    pub acc: f64,
    pub acc_std: f64,
    pub ri: f64,
    pub ri_std: f64,
    pub f_measure: f64,
    pub f_std: f64,
    pub sse: f64,
    pub iterations: f64,
    /// Lloyd steps that raised SSE, summed over repeats.
    pub sse_increases: usize,
    /// Mean distance evaluations spent on seeding per repeat.
    pub distance_evals: f64,
    /// Mean wall time per repeat in milliseconds, seeding plus Lloyd.
    pub wall_ms: Option<f64>,
    /// Center indices of the first repeat, space separated.
    pub seeds: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<ReportRow>,
}

impl BenchReport {
    pub fn total_sse_increases(&self) -> usize {
        self.rows.iter().map(|r| r.sse_increases).sum()
    }
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

struct LoadedDataset {
    data: Dataset,
    truth: Vec<String>,
    k: usize,
}

struct CachedModel {
    model: AimkModel,
    fit_ms: f64,
}

fn load_all(config: &BenchConfig) -> Result<Vec<LoadedDataset>> {
    let mut loaded = Vec::new();
    for entry in &config.datasets {
        let data = match entry.load() {
            Ok(d) => d,
            Err(e) => {
                log::warn!("skipping dataset {}: {e}", entry.name);
                continue;
            }
        };
        let Some(truth) = data.labels().map(<[String]>::to_vec) else {
            log::warn!("skipping dataset {}: no labels", entry.name);
            continue;
        };
        let k = entry.k.or(data.num_classes()).unwrap_or(0);
        if k < 2 || k > data.len() {
            log::warn!(
                "skipping dataset {}: cannot form {k} clusters from {} points",
                entry.name,
                data.len()
            );
            continue;
        }
        loaded.push(LoadedDataset { data, truth, k });
    }
    if loaded.is_empty() {
        return Err(BenchError::AllDatasetsSkipped);
    }
    Ok(loaded)
}

/// Runs every (dataset, method) pair and returns rows in config order.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let datasets = load_all(config)?;
    let lloyd_cfg = LloydConfig::from(config.kmeans);
    let timing = config.output.timing;

    // one AIMK model per (dataset, thr_mode), shared by every lambda
    let mut keys: Vec<(usize, ThresholdMode)> = Vec::new();
    for d in 0..datasets.len() {
        for m in config.methods.iter().filter(|m| m.method == SeedMethod::Aimk) {
            if !keys.contains(&(d, m.thr_mode)) {
                keys.push((d, m.thr_mode));
            }
        }
    }
    let fitted: Vec<Result<CachedModel>> = keys
        .par_iter()
        .map(|&(d, mode)| {
            let start = Instant::now();
            let model = AimkModel::fit(&datasets[d].data, mode)?;
            Ok(CachedModel {
                model,
                fit_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect();
    let mut models = BTreeMap::new();
    for (key, m) in keys.into_iter().zip(fitted) {
        models.insert(key, m?);
    }

    let jobs: Vec<(usize, &MethodEntry)> = (0..datasets.len())
        .flat_map(|d| config.methods.iter().map(move |m| (d, m)))
        .collect();
    let rows: Vec<Result<ReportRow>> = jobs
        .par_iter()
        .map(|&(d, method)| {
            let model = models.get(&(d, method.thr_mode));
            run_combination(&datasets[d], method, model, &lloyd_cfg, timing)
        })
        .collect();
    Ok(BenchReport {
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

fn run_combination(
    ds: &LoadedDataset,
    entry: &MethodEntry,
    model: Option<&CachedModel>,
    lloyd_cfg: &LloydConfig,
    timing: bool,
) -> Result<ReportRow> {
    let repeats = entry.repeats();
    let mut acc = Vec::with_capacity(repeats);
    let mut ri = Vec::with_capacity(repeats);
    let mut f = Vec::with_capacity(repeats);
    let mut sse = Vec::with_capacity(repeats);
    let mut iterations = Vec::with_capacity(repeats);
    let mut evals = Vec::with_capacity(repeats);
    let mut sse_increases = 0;
    let mut first_seeds = String::new();
    let mut elapsed_ms = 0.0;

    for i in 0..repeats {
        let start = Instant::now();
        let seeds: SeedSet = match (entry.method, model) {
            (SeedMethod::Aimk, Some(cached)) => {
                elapsed_ms += cached.fit_ms;
                cached.model.select(ds.k, entry.lambda)?
            }
            _ => seed(
                &ds.data,
                entry.method,
                ds.k,
                entry.lambda,
                entry.thr_mode,
                entry.seed.wrapping_add(i as u64),
            )?,
        };
        let result = lloyd(&ds.data, &seeds, lloyd_cfg)?;
        let report = evaluate(&result.assignments, &ds.truth)?;
        elapsed_ms += start.elapsed().as_secs_f64() * 1e3;

        if i == 0 {
            first_seeds = seeds
                .center_indices
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" ");
        }
        acc.push(report.acc);
        ri.push(report.ri);
        f.push(report.f_measure);
        sse.push(result.sse);
        iterations.push(result.iterations as f64);
        evals.push(seeds.distance_evaluations as f64);
        sse_increases += result.sse_increases;
    }

    let (acc, acc_std) = mean_std(&acc);
    let (ri, ri_std) = mean_std(&ri);
    let (f_measure, f_std) = mean_std(&f);
    Ok(ReportRow {
        dataset: ds.data.name().to_string(),
        method: entry.method,
        lambda: entry.lambda(),
        thr_mode: entry.thr_mode(),
        n: ds.data.len(),
        k: ds.k,
        repeats,
        acc,
        acc_std,
        ri,
        ri_std,
        f_measure,
        f_std,
        sse: mean_std(&sse).0,
        iterations: mean_std(&iterations).0,
        sse_increases,
        distance_evals: mean_std(&evals).0,
        wall_ms: timing.then_some(elapsed_ms / repeats as f64),
        seeds: first_seeds,
    })
}
