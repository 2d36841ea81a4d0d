//! Seeded standard-normal datasets and diagonal queries.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::CliError;
use crate::io::write_matrix;

pub const DEFAULT_ALPHAS: [f64; 4] = [0.0, 0.4, 0.8, 1.2];

/// `n` draws from the `p`-variate standard normal. Each `(p, n)` cell reads
/// its own ChaCha stream, so cells do not depend on each other.
pub fn normal_sample(seed: u64, p: usize, n: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((p as u64) << 32) | n as u64);
    (0..n)
        .map(|_| (0..p).map(|_| rng.sample(StandardNormal)).collect())
        .collect()
}

/// Queries `alpha * (1, ..., 1)`.
pub fn diagonal_queries(p: usize, alphas: &[f64]) -> Vec<Vec<f64>> {
    alphas.iter().map(|&a| vec![a; p]).collect()
}

pub fn data_file(dir: &Path, p: usize, n: usize) -> PathBuf {
    dir.join(format!("normal_p{p}_n{n}.csv"))
}

pub fn query_file(dir: &Path, p: usize) -> PathBuf {
    dir.join(format!("queries_p{p}.csv"))
}

/// Writes one data file per `(p, n)` and one query file per `p`. Returns the
/// paths written, in order.
pub fn generate(dir: &Path, dims: &[usize], sizes: &[usize], alphas: &[f64], seed: u64) -> Result<Vec<PathBuf>, CliError> {
    check_grid(dims, sizes)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for &p in dims {
        for &n in sizes {
            let path = data_file(dir, p, n);
            write_matrix(&path, &normal_sample(seed, p, n))?;
            written.push(path);
        }
        let path = query_file(dir, p);
        write_matrix(&path, &diagonal_queries(p, alphas))?;
        written.push(path);
    }
    Ok(written)
}

pub fn check_grid(dims: &[usize], sizes: &[usize]) -> Result<(), CliError> {
    if dims.is_empty() || sizes.is_empty() {
        return Err(CliError::Usage("dims and sizes must be nonempty".into()));
    }
    if let Some(p) = dims.iter().find(|&&p| p < 2) {
        return Err(CliError::Usage(format!("dimension {p} is below 2")));
    }
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage("sizes must be strictly increasing".into()));
    }
    if sizes[0] == 0 {
        return Err(CliError::Usage("sizes must be positive".into()));
    }
    Ok(())
}
