use std::fs;

use aimk_bench::config::{DataFormat, DatasetEntry, LabelSpec, MethodEntry, OutputSection};
use aimk_bench::{run_benchmark, BenchConfig, BenchError, OutputFormat};
use aimk_core::{SeedMethod, ThresholdMode};

fn entry(method: SeedMethod, lambda: f64, repeats: Option<usize>) -> MethodEntry {
    MethodEntry {
        method,
        lambda,
        thr_mode: ThresholdMode::Max,
        repeats,
        seed: 0,
    }
}

fn config(dir: &std::path::Path, methods: Vec<MethodEntry>) -> BenchConfig {
    fs::write(dir.join("l4.csv"), "0,a\n1,a\n2,a\n10,b\n").unwrap();
    BenchConfig {
        datasets: vec![DatasetEntry {
            name: "l4".into(),
            path: dir.join("l4.csv"),
            format: DataFormat::Csv,
            label_column: LabelSpec::default(),
            k: None,
        }],
        methods,
        kmeans: Default::default(),
        output: OutputSection {
            format: OutputFormat::Csv,
            path: None,
            timing: false,
        },
    }
}

#[test]
fn l4_two_lambdas() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        vec![
            entry(SeedMethod::Aimk, 0.0, None),
            entry(SeedMethod::Aimk, 1.0, None),
        ],
    );
    let report = run_benchmark(&cfg).unwrap();
    assert_eq!(report.rows.len(), 2);
    let r = &report.rows[1];
    assert_eq!((r.lambda, r.thr_mode), (Some(1.0), Some(ThresholdMode::Max)));
    assert_eq!(r.seeds, "1 3");
    assert_eq!(r.acc, 1.0);
    assert_eq!(r.ri, 1.0);
    assert_eq!(r.distance_evals, 6.0);
    assert_eq!(r.wall_ms, None);
    assert_eq!(report.rows[0].seeds, "1 0");
}

#[test]
fn stochastic_repeats_are_averaged() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), vec![entry(SeedMethod::Forgy, 0.0, None)]);
    let report = run_benchmark(&cfg).unwrap();
    let r = &report.rows[0];
    assert_eq!(r.repeats, 10);
    assert_eq!(r.lambda, None);
    assert!(r.acc_std >= 0.0);
    assert!((0.0..=1.0).contains(&r.acc));
    assert_eq!(report.total_sse_increases(), 0);
}

#[test]
fn unreadable_datasets_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), vec![entry(SeedMethod::Aimk, 1.0, None)]);
    let mut missing = cfg.datasets[0].clone();
    missing.name = "missing".into();
    missing.path = dir.path().join("missing.csv");
    cfg.datasets.insert(0, missing.clone());
    let report = run_benchmark(&cfg).unwrap();
    assert_eq!(report.rows.len(), 1);
    assert_eq!(report.rows[0].dataset, "l4");

    cfg.datasets = vec![missing];
    assert!(matches!(run_benchmark(&cfg), Err(BenchError::AllDatasetsSkipped)));
}

#[test]
fn unlabelled_dataset_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), vec![entry(SeedMethod::Aimk, 1.0, None)]);
    fs::write(dir.path().join("plain.csv"), "0\n1\n2\n10\n").unwrap();
    cfg.datasets[0].path = dir.path().join("plain.csv");
    cfg.datasets[0].label_column = LabelSpec::Named("none".into());
    assert!(matches!(run_benchmark(&cfg), Err(BenchError::AllDatasetsSkipped)));
}

#[test]
fn empty_methods_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), vec![]);
    assert_eq!(
        run_benchmark(&cfg).unwrap_err().to_string(),
        "no methods configured"
    );
}

#[test]
fn relative_paths_follow_config_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("conf")).unwrap();
    fs::write(dir.path().join("l4.csv"), "0,a\n1,a\n2,a\n10,b\n").unwrap();
    let path = dir.path().join("conf/b.toml");
    fs::write(
        &path,
        "[[datasets]]\nname = \"l4\"\npath = \"../l4.csv\"\nk = 2\n\n[[methods]]\nmethod = \"maximin\"\nrepeats = 3\n",
    )
    .unwrap();
    let cfg = BenchConfig::from_path(&path).unwrap();
    let report = run_benchmark(&cfg).unwrap();
    assert_eq!(report.rows[0].repeats, 3);
    assert_eq!(report.rows[0].k, 2);
}
