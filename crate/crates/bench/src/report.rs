//! Report writers (aligned table, CSV, JSON Lines) and the matching readers.
//!
//! CSV and JSON print floats with Rust's shortest round-trip formatting, so
//! parsing a written report gives back the same numbers bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::config::OutputFormat;
use crate::error::{BenchError, Result};
use crate::runner::{BenchReport, ReportRow};

pub fn write_report<W: Write>(report: &BenchReport, format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Table => write_table(report, out),
        OutputFormat::Csv => write_csv(report, out),
        OutputFormat::Json => write_json(report, out),
    }
}

/// Writes to `path`, or stdout when `path` is `None` or `-`.
pub fn emit_report(report: &BenchReport, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    match path.filter(|p| *p != Path::new("-")) {
        Some(p) => {
            let file = File::create(p).map_err(|source| BenchError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            let mut out = BufWriter::new(file);
            write_report(report, format, &mut out)?;
            out.flush()?;
            Ok(())
        }
        None => write_report(report, format, std::io::stdout().lock()),
    }
}

pub fn write_csv<W: Write>(report: &BenchReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if report.rows.is_empty() {
        w.write_record(HEADER)?;
    }
    for row in &report.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv_report<R: Read>(input: R) -> Result<BenchReport> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<std::result::Result<_, _>>()?;
    Ok(BenchReport { rows })
}

/// One JSON object per line.
pub fn write_json<W: Write>(report: &BenchReport, mut out: W) -> Result<()> {
    for row in &report.rows {
        serde_json::to_writer(&mut out, row)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_json_report<R: Read>(input: R) -> Result<BenchReport> {
    let mut rows = Vec::new();
    for line in BufReader::new(input).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            rows.push(serde_json::from_str(&line)?);
        }
    }
    Ok(BenchReport { rows })
}

const HEADER: [&str; 19] = [
    "dataset",
    "method",
    "lambda",
    "thr_mode",
    "n",
    "k",
    "repeats",
    "acc",
    "acc_std",
    "ri",
    "ri_std",
    "f_measure",
    "f_std",
    "sse",
    "iterations",
    "sse_increases",
    "distance_evals",
    "wall_ms",
    "seeds",
];

fn score(mean: f64, std: f64, repeats: usize) -> String {
    if repeats > 1 {
        format!("{mean:.4}±{std:.4}")
    } else {
        format!("{mean:.4}")
    }
}

fn table_cells(row: &ReportRow) -> Vec<String> {
    vec![
        row.dataset.clone(),
        row.method.to_string(),
        row.lambda.map_or("-".into(), |l| l.to_string()),
        row.thr_mode.map_or("-".into(), |t| t.to_string()),
        row.n.to_string(),
        row.k.to_string(),
        row.repeats.to_string(),
        score(row.acc, row.acc_std, row.repeats),
        score(row.ri, row.ri_std, row.repeats),
        score(row.f_measure, row.f_std, row.repeats),
        format!("{:.4e}", row.sse),
        format!("{:.0}", row.distance_evals),
        row.wall_ms.map_or("-".into(), |t| format!("{t:.2}")),
    ]
}

pub fn write_table<W: Write>(report: &BenchReport, mut out: W) -> Result<()> {
    let header: Vec<String> = [
        "dataset",
        "method",
        "lambda",
        "thr",
        "n",
        "k",
        "runs",
        "ACC",
        "RI",
        "F",
        "SSE",
        "dist_evals",
        "ms",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let body: Vec<Vec<String>> = report.rows.iter().map(table_cells).collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for cells in &body {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.chars().count());
        }
    }
    for cells in std::iter::once(&header).chain(&body) {
        let line: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| {
                let pad = w - c.chars().count();
                // text columns left-aligned, numbers right-aligned
                if i < 4 {
                    format!("{c}{}", " ".repeat(pad))
                } else {
                    format!("{}{c}", " ".repeat(pad))
                }
            })
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use aimk_core::{SeedMethod, ThresholdMode};

    fn sample() -> BenchReport {
        let base = ReportRow {
            dataset: "wine".into(),
            method: SeedMethod::Aimk,
            lambda: Some(0.25),
            thr_mode: Some(ThresholdMode::Mean),
            n: 178,
            k: 3,
            repeats: 1,
            acc: 0.702247191011236,
            acc_std: 0.0,
            ri: 1.0 / 3.0,
            ri_std: 0.0,
            f_measure: 0.1 + 0.2,
            f_std: 0.0,
            sse: 2370689.686782968,
            iterations: 7.0,
            sse_increases: 0,
            distance_evals: 15753.0,
            wall_ms: None,
            seeds: "12 7 150".into(),
        };
        let forgy = ReportRow {
            method: SeedMethod::Forgy,
            lambda: None,
            thr_mode: None,
            repeats: 10,
            acc_std: 0.0123456789,
            wall_ms: Some(1.5e-3),
            seeds: String::new(),
            ..base.clone()
        };
        BenchReport {
            rows: vec![base, forgy],
        }
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        write_csv(&sample(), &mut buf).unwrap();
        assert_eq!(read_csv_report(&buf[..]).unwrap(), sample());
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), HEADER.join(","));
    }

    #[test]
    fn json_round_trip() {
        let mut buf = Vec::new();
        write_json(&sample(), &mut buf).unwrap();
        assert_eq!(String::from_utf8_lossy(&buf).lines().count(), 2);
        assert_eq!(read_json_report(&buf[..]).unwrap(), sample());
    }

    #[test]
    fn table_layout() {
        let mut buf = Vec::new();
        write_table(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("dataset"));
        assert!(lines[1].contains("0.7022"));
        assert!(lines[2].contains("±0.0123"));
    }
}
