//! Timing grid over dimension, sample size, query offset and algorithm.

use std::collections::HashSet;
use std::io::Write;
use std::time::Duration;

use halfspace_depth::DepthError;
use serde::{Deserialize, Serialize};

use crate::algorithm::{evaluate, Algorithm, Settings};
use crate::error::CliError;
use crate::generate::{check_grid, normal_sample};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub dims: Vec<usize>,
    pub sizes: Vec<usize>,
    pub alphas: Vec<f64>,
    pub reps: usize,
    /// Time limit for a single run; a cell whose run exceeds it is skipped,
    /// and so are the larger sizes of the same series.
    pub budget: Duration,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub settings: Settings,
    /// User-supplied data replacing the synthetic samples.
    pub data: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub p: usize,
    pub n: usize,
    pub alpha: f64,
    pub algorithm: String,
    /// `ok`, `skipped` (budget or size guard), `unsupported` (dimension) or
    /// `error` (input rejected).
    pub status: String,
    pub numerator: Option<usize>,
    pub reps: usize,
    pub min_ns: Option<u64>,
    pub mean_ns: Option<u64>,
    pub max_ns: Option<u64>,
    /// `yes`/`no` against the first exact result of the same cell; `-` when
    /// there is nothing to compare.
    pub agree: String,
}

pub const TIMING_COLUMNS: [&str; 3] = ["min_ns", "mean_ns", "max_ns"];

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, CliError> {
    if cfg.reps == 0 {
        return Err(CliError::Usage("reps must be at least 1".into()));
    }
    if cfg.algorithms.is_empty() || cfg.alphas.is_empty() {
        return Err(CliError::Usage("algorithms and alphas must be nonempty".into()));
    }
    let cells: Vec<(usize, Vec<usize>)> = match &cfg.data {
        Some(rows) => {
            let p = rows.first().map_or(0, Vec::len);
            vec![(p, vec![rows.len()])]
        }
        None => {
            check_grid(&cfg.dims, &cfg.sizes)?;
            cfg.dims.iter().map(|&p| (p, cfg.sizes.clone())).collect()
        }
    };
    let settings = Settings {
        budget: Some(cfg.budget),
        ..cfg.settings.clone()
    };

    let mut rows = Vec::new();
    for (p, sizes) in cells {
        // (alpha index, algorithm) series that ran out of budget
        let mut exhausted: HashSet<(usize, Algorithm)> = HashSet::new();
        for n in sizes {
            let data = match &cfg.data {
                Some(d) => d.clone(),
                None => normal_sample(cfg.seed, p, n),
            };
            for (ai, &alpha) in cfg.alphas.iter().enumerate() {
                let z = vec![alpha; p];
                let start = rows.len();
                for &alg in &cfg.algorithms {
                    let mut row = BenchRow {
                        p,
                        n,
                        alpha,
                        algorithm: alg.name().into(),
                        status: "ok".into(),
                        numerator: None,
                        reps: 0,
                        min_ns: None,
                        mean_ns: None,
                        max_ns: None,
                        agree: "-".into(),
                    };
                    if !alg.supports(p) {
                        row.status = "unsupported".into();
                    } else if exhausted.contains(&(ai, alg)) {
                        row.status = "skipped".into();
                    } else {
                        measure(&mut row, alg, &data, &z, cfg.reps, &settings);
                        if row.status == "skipped" {
                            exhausted.insert((ai, alg));
                        }
                    }
                    rows.push(row);
                }
                mark_agreement(&mut rows[start..], &cfg.algorithms);
            }
        }
    }
    Ok(rows)
}

fn measure(row: &mut BenchRow, alg: Algorithm, data: &[Vec<f64>], z: &[f64], reps: usize, settings: &Settings) {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        match evaluate(alg, data, z, settings) {
            Ok(out) => {
                row.numerator = Some(out.numerator);
                times.push(out.elapsed.as_nanos() as u64);
            }
            Err(DepthError::BudgetExceeded | DepthError::OracleTooLarge { .. }) => {
                row.status = "skipped".into();
                row.numerator = None;
                return;
            }
            Err(_) => {
                row.status = "error".into();
                row.numerator = None;
                return;
            }
        }
    }
    row.reps = times.len();
    row.min_ns = times.iter().min().copied();
    row.max_ns = times.iter().max().copied();
    row.mean_ns = Some(times.iter().sum::<u64>() / times.len() as u64);
}

fn mark_agreement(rows: &mut [BenchRow], algorithms: &[Algorithm]) {
    let exact = |r: &BenchRow, alg: &Algorithm| r.status == "ok" && alg.is_exact();
    let reference = rows
        .iter()
        .zip(algorithms)
        .find(|(r, a)| exact(r, a))
        .and_then(|(r, _)| r.numerator);
    let Some(reference) = reference else {
        return;
    };
    for (row, alg) in rows.iter_mut().zip(algorithms) {
        if exact(row, alg) {
            row.agree = if row.numerator == Some(reference) { "yes" } else { "no" }.into();
        }
    }
}

pub fn write_rows(out: &mut dyn Write, rows: &[BenchRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record([
            "p", "n", "alpha", "algorithm", "status", "numerator", "reps", "min_ns", "mean_ns", "max_ns", "agree",
        ])?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))
}
