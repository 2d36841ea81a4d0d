use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::combination::{binomial, next_combination, unrank};
use crate::error::{DepthError, Result};
use crate::geometry::Tolerance;

/// Exact depth of a query point as a count over `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthResult {
    /// `n * D(z)`: the smallest number of observations in a closed halfspace
    /// whose boundary passes through `z`.
    pub numerator: usize,
    /// Number of observations, including any equal to `z`.
    pub n: usize,
    /// Original row indices of the combination attaining the minimum.
    pub witness_combination: Vec<usize>,
    /// Unit `u` with `#{i : u . (X_i - z) <= 0} == numerator`.
    pub witness_direction: Vec<f64>,
}

impl DepthResult {
    pub fn depth(&self) -> f64 {
        self.numerator as f64 / self.n as f64
    }
}

impl fmt::Display for DepthResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.n)
    }
}

/// Knobs shared by the exhaustive algorithms.
#[derive(Debug, Clone)]
pub struct DepthOptions {
    pub tol: Tolerance,
    /// Worker threads; `1` runs on the calling thread.
    pub threads: usize,
    /// Give up with [`DepthError::BudgetExceeded`] after this instant.
    pub deadline: Option<Instant>,
}

impl Default for DepthOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            threads: 1,
            deadline: None,
        }
    }
}

impl DepthOptions {
    pub fn with_tol(tol: Tolerance) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub(crate) fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(DepthError::BudgetExceeded),
            _ => Ok(()),
        }
    }

    pub(crate) fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        if self.threads <= 1 {
            return Ok(job());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| DepthError::InvalidInput(format!("cannot start worker threads: {e}")))?;
        Ok(pool.install(job))
    }
}

/// Minimum of `value` over every k-subset of `{0..m}`, with the rank of the
/// lexicographically first minimizer. With several threads the rank space is
/// cut into contiguous chunks; errors and ties resolve exactly as in a serial
/// scan.
pub(crate) fn min_over_combinations<S, F>(
    m: usize,
    k: usize,
    opts: &DepthOptions,
    make_state: impl Fn() -> S + Sync,
    value: F,
) -> Result<(usize, u128)>
where
    F: Fn(&mut S, &[usize]) -> Result<usize> + Sync,
{
    let total = binomial(m, k);
    if total == 0 {
        return Err(DepthError::Degenerate(format!("no {k}-subsets of {m} observations")));
    }
    let scan = |start: u128, count: u128| -> Result<(usize, u128)> {
        if count == 0 {
            return Ok((usize::MAX, start));
        }
        let mut state = make_state();
        let mut combo = unrank(start, m, k);
        let mut best = (usize::MAX, start);
        for offset in 0..count {
            if offset % 64 == 0 {
                opts.check_deadline()?;
            }
            let v = value(&mut state, &combo)?;
            if v < best.0 {
                best = (v, start + offset);
            }
            if offset + 1 < count {
                next_combination(&mut combo, m);
            }
        }
        Ok(best)
    };
    if opts.threads <= 1 {
        return scan(0, total);
    }
    let chunks = (opts.threads as u128 * 8).min(total);
    let size = total.div_ceil(chunks);
    let chunks = chunks as usize;
    let outcomes: Vec<Result<(usize, u128)>> = opts.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c as u128 * size;
                scan(start, size.min(total.saturating_sub(start)))
            })
            .collect()
    })?;
    let mut best = (usize::MAX, 0);
    for outcome in outcomes {
        let (v, r) = outcome?;
        if v < best.0 {
            best = (v, r);
        }
    }
    Ok(best)
}
