use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aimk_bench::config::{load_dataset, DataFormat};
use aimk_bench::report::emit_report;
use aimk_bench::{
    run_benchmark, sweep_lambda, sweep_threshold, BenchConfig, BenchError, OutputFormat, Result,
};
use aimk_core::dataset::generate_mixture;
use aimk_core::seeding::seed;
use aimk_core::{Dataset, LabelColumn, LloydConfig, MixtureSpec, SeedMethod, ThresholdMode};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "aimk", version, about = "K-means seeding benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every dataset/method combination in a TOML config.
    Bench {
        config: PathBuf,
        /// Override the configured output format.
        #[arg(long)]
        format: Option<OutputFormat>,
        /// Override the configured output path.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the chosen center indices.
    Seeds {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "aimk")]
        method: SeedMethod,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long, default_value = "max")]
        thr_mode: ThresholdMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// ACC/RI/F for AIMK at lambda 0, 0.25, 0.5, 0.75 and 1.
    SweepLambda {
        #[command(flatten)]
        data: DataArgs,
        /// Defaults to the number of distinct labels.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "max")]
        thr_mode: ThresholdMode,
    },
    /// ACC for every threshold mode at lambda 0 and 1.
    SweepThr {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Sample a Gaussian mixture described in TOML and write it as CSV.
    GenMixture {
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct DataArgs {
    dataset: PathBuf,
    /// csv or libsvm; inferred from the extension when absent.
    #[arg(long)]
    format: Option<DataFormat>,
    /// CSV label column: an index, "last" or "none".
    #[arg(long, default_value = "last")]
    label_column: String,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        let format = self.format.unwrap_or_else(|| DataFormat::infer(&self.dataset));
        let label = if self.label_column.eq_ignore_ascii_case("none") {
            None
        } else {
            Some(self.label_column.parse::<LabelColumn>()?)
        };
        load_dataset(&self.dataset, format, label)
    }
}

fn resolve_k(data: &Dataset, k: Option<usize>) -> Result<usize> {
    k.or(data.num_classes())
        .ok_or_else(|| BenchError::Invalid("--k is required for unlabelled data".into()))
}

fn read_mixture_spec(path: &Path) -> Result<MixtureSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| BenchError::Config {
        path: path.to_path_buf(),
        message: e.message().to_string(),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bench {
            config,
            format,
            output,
        } => {
            let config = BenchConfig::from_path(&config)?;
            let report = run_benchmark(&config)?;
            let format = format.unwrap_or(config.output.format);
            let path = output.or(config.output.path);
            emit_report(&report, format, path.as_deref())
        }
        Command::Seeds {
            data,
            method,
            k,
            lambda,
            thr_mode,
            seed: rng_seed,
        } => {
            let data = data.load()?;
            let seeds = seed(&data, method, k, lambda, thr_mode, rng_seed)?;
            let idx: Vec<String> = seeds.center_indices.iter().map(usize::to_string).collect();
            println!("{}", idx.join(" "));
            Ok(())
        }
        Command::SweepLambda { data, k, thr_mode } => {
            let data = data.load()?;
            let k = resolve_k(&data, k)?;
            print!("{}", sweep_lambda(&data, k, thr_mode, &LloydConfig::default())?);
            Ok(())
        }
        Command::SweepThr { data, k } => {
            let data = data.load()?;
            let k = resolve_k(&data, k)?;
            print!("{}", sweep_threshold(&data, k, &LloydConfig::default())?);
            Ok(())
        }
        Command::GenMixture { spec, output } => {
            let data = generate_mixture(&read_mixture_spec(&spec)?)?;
            data.save_csv(&output)?;
            log::info!("wrote {} points to {}", data.len(), output.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
