use thiserror::Error;

/// Failure modes shared by every depth algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DepthError {
    /// Malformed input: wrong shape, non-finite coordinates, bad parameters.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The input is well formed but the requested computation is undefined
    /// for it (all points at the query point, too few observations, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Some observations together with the query point violate general
    /// position. Indices refer to rows of the original data set.
    #[error("general position violated by observations {indices:?}: {detail}")]
    GeneralPosition { indices: Vec<usize>, detail: String },

    /// The brute-force oracle refuses inputs above its work limit.
    #[error("oracle work estimate {work} exceeds limit {limit}")]
    OracleTooLarge { work: u128, limit: u128 },

    /// A caller-supplied deadline passed before the computation finished.
    #[error("time budget exceeded")]
    BudgetExceeded,
}

pub type Result<T, E = DepthError> = std::result::Result<T, E>;
