use std::time::{Duration, Instant};

use clap::ValueEnum;
use halfspace_depth::{
    depth_adia_with, depth_critical_with, depth_random_upper, depth_rcom_with, planar, DepthError, DepthOptions,
    PointCloud, Tolerance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Algorithm {
    /// All (p-2)-point projections (p >= 3)
    Rcom,
    /// Adaptive search over projections (p >= 3)
    Adia,
    /// Enumeration of all critical hyperplanes (slow reference)
    Oracle,
    /// Angular sweep (p = 2)
    Bivariate,
    /// Upper bound from random directions
    RandomUpper,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Rcom => "rcom",
            Self::Adia => "adia",
            Self::Oracle => "oracle",
            Self::Bivariate => "bivariate",
            Self::RandomUpper => "random-upper",
        }
    }

    pub fn is_exact(self) -> bool {
        self != Self::RandomUpper
    }

    /// Whether the algorithm accepts data of dimension `p`.
    pub fn supports(self, p: usize) -> bool {
        match self {
            Self::Rcom | Self::Adia => p >= 3,
            Self::Bivariate => p == 2,
            Self::Oracle | Self::RandomUpper => p >= 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub tol: Tolerance,
    pub threads: usize,
    pub trials: usize,
    pub seed: u64,
    pub force_oracle: bool,
    /// Per-query time limit.
    pub budget: Option<Duration>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            threads: 1,
            trials: 10_000,
            seed: 0,
            force_oracle: false,
            budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub numerator: usize,
    pub n: usize,
    pub witness_direction: Option<Vec<f64>>,
    pub witness_combination: Option<Vec<usize>>,
    pub elapsed: Duration,
}

/// Depth of `z` in `data` with one algorithm, timed from centering to result.
pub fn evaluate(alg: Algorithm, data: &[Vec<f64>], z: &[f64], settings: &Settings) -> Result<Outcome, DepthError> {
    let p = z.len();
    if !alg.supports(p) {
        let need = if alg == Algorithm::Bivariate { "p = 2" } else { "p >= 3" };
        return Err(DepthError::InvalidInput(format!("{} needs {need}, data has p = {p}", alg.name())));
    }
    let start = Instant::now();
    let opts = DepthOptions {
        tol: settings.tol,
        threads: settings.threads,
        deadline: settings.budget.map(|b| start + b),
    };
    let cloud = PointCloud::center_at(data, z, settings.tol)?;
    let result = match alg {
        Algorithm::Rcom => depth_rcom_with(&cloud, &opts)?,
        Algorithm::Adia => depth_adia_with(&cloud, &opts)?,
        Algorithm::Oracle => depth_critical_with(&cloud, &opts, settings.force_oracle)?,
        Algorithm::Bivariate => planar(&cloud, settings.tol)?,
        Algorithm::RandomUpper => {
            let numerator = depth_random_upper(&cloud, settings.trials, settings.seed)?;
            return Ok(Outcome {
                numerator,
                n: cloud.total(),
                witness_direction: None,
                witness_combination: None,
                elapsed: start.elapsed(),
            });
        }
    };
    let elapsed = start.elapsed();
    Ok(Outcome {
        numerator: result.numerator,
        n: result.n,
        witness_direction: Some(result.witness_direction),
        witness_combination: Some(result.witness_combination),
        elapsed,
    })
}
