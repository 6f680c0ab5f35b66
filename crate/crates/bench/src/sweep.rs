//! Lambda and threshold-mode sweeps for a single dataset.

use std::fmt;

use aimk_core::eval::evaluate;
use aimk_core::{lloyd, AimkModel, Dataset, LloydConfig, ThresholdMode};

use crate::error::{BenchError, Result};

pub const SWEEP_LAMBDAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub acc: f64,
    pub ri: f64,
    pub f_measure: f64,
}

impl Scores {
    fn get(&self, index: usize) -> f64 {
        [self.acc, self.ri, self.f_measure][index]
    }
}

pub const INDEX_NAMES: [&str; 3] = ["ACC", "RI", "F"];

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSweep {
    pub dataset: String,
    pub k: usize,
    pub thr_mode: ThresholdMode,
    pub threshold: f64,
    /// Aligned with [`SWEEP_LAMBDAS`].
    pub scores: Vec<Scores>,
    pub seeds: Vec<Vec<usize>>,
}

impl LambdaSweep {
    /// Positions in [`SWEEP_LAMBDAS`] attaining the maximum of index
    /// `index` (0 = ACC, 1 = RI, 2 = F).
    pub fn argmax(&self, index: usize) -> Vec<usize> {
        let best = self.best(index);
        (0..self.scores.len())
            .filter(|&i| self.scores[i].get(index) == best)
            .collect()
    }

    pub fn best(&self, index: usize) -> f64 {
        self.scores
            .iter()
            .map(|s| s.get(index))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Best of the two endpoint lambdas.
    pub fn best_endpoint(&self, index: usize) -> f64 {
        let last = self.scores.len() - 1;
        self.scores[0].get(index).max(self.scores[last].get(index))
    }

    /// Whether an endpoint lambda attains the maximum of `index`.
    pub fn endpoint_attains_max(&self, index: usize) -> bool {
        self.best_endpoint(index) == self.best(index)
    }
}

impl fmt::Display for LambdaSweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} (k={}, thr_mode={}, thr={:.6})",
            self.dataset, self.k, self.thr_mode, self.threshold
        )?;
        write!(f, "{:<6}", "lambda")?;
        for l in SWEEP_LAMBDAS {
            write!(f, "  {l:>8}")?;
        }
        writeln!(f)?;
        for (index, name) in INDEX_NAMES.iter().enumerate() {
            let marks = self.argmax(index);
            write!(f, "{name:<6}")?;
            for (i, s) in self.scores.iter().enumerate() {
                let mark = if marks.contains(&i) { "*" } else { " " };
                write!(f, "  {:>7.4}{mark}", s.get(index))?;
            }
            if !self.endpoint_attains_max(index) {
                write!(f, "  interior maximum")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn labels(data: &Dataset) -> Result<&[String]> {
    data.labels()
        .ok_or_else(|| BenchError::MissingLabels(data.name().to_string()))
}

fn score(
    data: &Dataset,
    truth: &[String],
    model: &AimkModel,
    k: usize,
    lambda: f64,
    cfg: &LloydConfig,
) -> Result<(Scores, Vec<usize>)> {
    let seeds = model.select(k, lambda)?;
    let result = lloyd(data, &seeds, cfg)?;
    let report = evaluate(&result.assignments, truth)?;
    Ok((
        Scores {
            acc: report.acc,
            ri: report.ri,
            f_measure: report.f_measure,
        },
        seeds.center_indices,
    ))
}

/// AIMK at each lambda in [`SWEEP_LAMBDAS`], all sharing one threshold.
pub fn sweep_lambda(
    data: &Dataset,
    k: usize,
    thr_mode: ThresholdMode,
    cfg: &LloydConfig,
) -> Result<LambdaSweep> {
    let truth = labels(data)?;
    let model = AimkModel::fit(data, thr_mode)?;
    let mut scores = Vec::with_capacity(SWEEP_LAMBDAS.len());
    let mut seeds = Vec::with_capacity(SWEEP_LAMBDAS.len());
    for lambda in SWEEP_LAMBDAS {
        let (s, c) = score(data, truth, &model, k, lambda, cfg)?;
        scores.push(s);
        seeds.push(c);
    }
    Ok(LambdaSweep {
        dataset: data.name().to_string(),
        k,
        thr_mode,
        threshold: model.threshold(),
        scores,
        seeds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCell {
    pub thr_mode: ThresholdMode,
    pub lambda: f64,
    pub threshold: f64,
    pub acc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSweep {
    pub dataset: String,
    pub k: usize,
    /// Rows ordered min, mean, max; lambda 0 before lambda 1 within a row.
    pub cells: Vec<ThresholdCell>,
}

impl ThresholdSweep {
    pub fn acc(&self, thr_mode: ThresholdMode, lambda: f64) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.thr_mode == thr_mode && c.lambda == lambda)
            .map(|c| c.acc)
    }
}

impl fmt::Display for ThresholdSweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (k={}), ACC at lambda 0 / lambda 1", self.dataset, self.k)?;
        for pair in self.cells.chunks(2) {
            writeln!(
                f,
                "{:<5} thr={:<12.6} {:.4} / {:.4}",
                pair[0].thr_mode, pair[0].threshold, pair[0].acc, pair[1].acc
            )?;
        }
        Ok(())
    }
}

/// ACC over every threshold mode at lambda 0 and 1.
pub fn sweep_threshold(data: &Dataset, k: usize, cfg: &LloydConfig) -> Result<ThresholdSweep> {
    let truth = labels(data)?;
    let mut cells = Vec::with_capacity(6);
    for thr_mode in ThresholdMode::ALL {
        let model = AimkModel::fit(data, thr_mode)?;
        for lambda in [0.0, 1.0] {
            let (s, _) = score(data, truth, &model, k, lambda, cfg)?;
            cells.push(ThresholdCell {
                thr_mode,
                lambda,
                threshold: model.threshold(),
                acc: s.acc,
            });
        }
    }
    Ok(ThresholdSweep {
        dataset: data.name().to_string(),
        k,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l4() -> Dataset {
        let labels = ["a", "a", "a", "b"].iter().map(|s| s.to_string()).collect();
        Dataset::new(
            "l4",
            vec![vec![0.0], vec![1.0], vec![2.0], vec![10.0]],
            Some(labels),
        )
        .unwrap()
    }

    #[test]
    fn lambda_sweep_shape() {
        let s = sweep_lambda(&l4(), 2, ThresholdMode::Max, &LloydConfig::default()).unwrap();
        assert_eq!(s.scores.len(), 5);
        assert_eq!(s.threshold, 4.5);
        assert_eq!(s.seeds[0], vec![1, 0]);
        assert_eq!(s.seeds[4], vec![1, 3]);
        assert_eq!(s.scores[4].acc, 1.0);
        assert!(s.endpoint_attains_max(0));
        assert!(s.to_string().lines().count() == 5);
    }

    #[test]
    fn threshold_grid() {
        let s = sweep_threshold(&l4(), 2, &LloydConfig::default()).unwrap();
        assert_eq!(s.cells.len(), 6);
        assert_eq!(s.acc(ThresholdMode::Max, 1.0), Some(1.0));
        let thr: Vec<f64> = s.cells.iter().step_by(2).map(|c| c.threshold).collect();
        assert_eq!(thr, vec![1.0, 2.75, 4.5]);
    }

    #[test]
    fn needs_labels() {
        let d = Dataset::new("x", vec![vec![0.0], vec![1.0], vec![5.0]], None).unwrap();
        assert!(matches!(
            sweep_lambda(&d, 2, ThresholdMode::Max, &LloydConfig::default()),
            Err(BenchError::MissingLabels(_))
        ));
        assert!(sweep_threshold(&d, 2, &LloydConfig::default()).is_err());
    }
}
