//! Command-line front end for exact halfspace depth: query evaluation,
//! synthetic data generation and a timing grid.

pub mod algorithm;
pub mod bench;
pub mod error;
pub mod generate;
pub mod io;

use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use halfspace_depth::Tolerance;

use crate::algorithm::{evaluate, Algorithm, Settings};
use crate::bench::{run_bench, write_rows, BenchConfig};
use crate::error::CliError;
use crate::io::{read_matrix, sink, write_records, DepthRecord, Format};

#[derive(Debug, Parser)]
#[command(name = "hdepth", version, about = "Exact Tukey halfspace depth")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Depth of each query row with respect to a dataset
    Depth(DepthArgs),
    /// Write standard-normal datasets and diagonal query files
    Gen(GenArgs),
    /// Time algorithms over a grid of dimensions, sizes and query offsets
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Relative tolerance for sign tests
    #[arg(long, default_value_t = Tolerance::DEFAULT_EPS)]
    pub tolerance: f64,

    /// Worker threads
    #[arg(long, default_value_t = 1)]
    pub threads: usize,

    /// Random directions tried by random-upper
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,

    /// Seed for random-upper
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Run the oracle even when it would enumerate more than 1e9 terms
    #[arg(long)]
    pub force_oracle: bool,
}

impl Common {
    fn settings(&self) -> Result<Settings, CliError> {
        if self.threads == 0 {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        Ok(Settings {
            tol: Tolerance::new(self.tolerance).map_err(|e| CliError::Usage(e.to_string()))?,
            threads: self.threads,
            trials: self.trials,
            seed: self.seed,
            force_oracle: self.force_oracle,
            budget: None,
        })
    }
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,

    /// Dataset CSV, one observation per row
    #[arg(long)]
    pub data: PathBuf,

    /// Query CSV with the same number of columns
    #[arg(long)]
    pub queries: PathBuf,

    /// Output file; `.csv` writes CSV, anything else JSON. Defaults to
    /// JSON on stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub dims: Vec<usize>,

    /// Strictly increasing sample sizes
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,

    /// Query offsets written to queries_p{p}.csv
    #[arg(long, value_delimiter = ',', default_values_t = generate::DEFAULT_ALPHAS)]
    pub alphas: Vec<f64>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [3])]
    pub dims: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_values_t = [40, 80, 160])]
    pub sizes: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_values_t = generate::DEFAULT_ALPHAS)]
    pub alphas: Vec<f64>,

    #[arg(long, default_value_t = 3)]
    pub reps: usize,

    /// Seconds allowed for a single run before the cell is skipped
    #[arg(long, default_value_t = 60.0)]
    pub budget: f64,

    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algorithm::Rcom, Algorithm::Adia])]
    pub algorithms: Vec<Algorithm>,

    /// Use this dataset instead of synthetic samples
    #[arg(long)]
    pub data: Option<PathBuf>,

    /// Output CSV; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub common: Common,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Depth(args) => cmd_depth(&args),
        Command::Gen(args) => {
            generate::generate(&args.out, &args.dims, &args.sizes, &args.alphas, args.seed)?;
            Ok(())
        }
        Command::Bench(args) => cmd_bench(&args),
    }
}

pub fn depth_records(args: &DepthArgs) -> Result<Vec<DepthRecord>, CliError> {
    let settings = args.common.settings()?;
    let data = read_matrix(&args.data)?;
    let queries = read_matrix(&args.queries)?;
    if queries.dim != data.dim {
        return Err(CliError::Usage(format!(
            "queries have {} columns but the data has {}",
            queries.dim, data.dim
        )));
    }
    queries
        .rows
        .iter()
        .enumerate()
        .map(|(query, z)| {
            let out = evaluate(args.algorithm, &data.rows, z, &settings)
                .map_err(|source| CliError::Depth { query, source })?;
            Ok(DepthRecord {
                query_index: query,
                algorithm: args.algorithm.name().into(),
                numerator: out.numerator,
                n: out.n,
                depth: out.numerator as f64 / out.n as f64,
                fraction: format!("{}/{}", out.numerator, out.n),
                witness_direction: out.witness_direction,
                witness_combination: out.witness_combination,
                elapsed_ns: out.elapsed.as_nanos() as u64,
            })
        })
        .collect()
}

fn cmd_depth(args: &DepthArgs) -> Result<(), CliError> {
    let records = depth_records(args)?;
    let mut out = sink(args.out.as_ref())?;
    write_records(&mut *out, &records, Format::for_path(args.out.as_deref()))
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    if !(args.budget.is_finite() && args.budget >= 0.0) {
        return Err(CliError::Usage("budget must be a nonnegative number of seconds".into()));
    }
    let data = match &args.data {
        Some(path) => Some(read_matrix(path)?.rows),
        None => None,
    };
    let cfg = BenchConfig {
        dims: args.dims.clone(),
        sizes: args.sizes.clone(),
        alphas: args.alphas.clone(),
        reps: args.reps,
        budget: Duration::from_secs_f64(args.budget),
        algorithms: args.algorithms.clone(),
        seed: args.common.seed,
        settings: args.common.settings()?,
        data,
    };
    let rows = run_bench(&cfg)?;
    let mut out = sink(args.out.as_ref())?;
    write_rows(&mut *out, &rows)?;
    if rows.iter().all(|r| r.status != "ok") {
        return Err(CliError::AllSkipped);
    }
    Ok(())
}
