//! Configuration-driven benchmark harness for the `aimk-core` seeders.
//!
//! A run loads every configured dataset, seeds with each configured method,
//! refines with Lloyd's algorithm and scores the result against the ground
//! truth labels. Rows come back in config order whatever the thread
//! scheduling.

pub mod config;
pub mod error;
pub mod report;
pub mod runner;
pub mod sweep;

pub use config::{BenchConfig, OutputFormat};
pub use error::{BenchError, Result};
pub use runner::{run_benchmark, BenchReport, ReportRow};
pub use sweep::{sweep_lambda, sweep_threshold, LambdaSweep, ThresholdSweep};
