//! Exact Tukey (halfspace) depth of a query point with respect to a sample
//! in `R^p`.
//!
//! The depth of `z` is the smallest fraction of observations contained in a
//! closed halfspace whose boundary passes through `z`. Three exact methods
//! are provided:
//!
//! * [`depth2_origin`]: an `O(n log n)` angular sweep in the plane,
//! * [`depth_rcom`]: exhaustive reduction to planar problems for `p >= 3`,
//! * [`depth_adia`]: an adaptive search that usually touches far fewer of
//!   those planar problems.
//!
//! [`depth_critical`] enumerates all candidate hyperplanes and serves as the
//! reference. All exact methods assume the sample plus query point are in
//! general position and report [`DepthError::GeneralPosition`] when they
//! run into a violation.
//!
//! ```
//! use halfspace_depth::{depth_rcom, PointCloud, Tolerance};
//!
//! let x = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
//! let cloud = PointCloud::center_at(&x, &[0.0; 3], Tolerance::default()).unwrap();
//! let r = depth_rcom(&cloud, Tolerance::default()).unwrap();
//! assert_eq!(r.to_string(), "1/4");
//! ```

mod adia;
mod bivariate;
mod combination;
mod error;
mod geometry;
mod oracle;
mod rcom;
mod result;
mod subspace;

pub use adia::{
    depth_adia, depth_adia_traced, depth_adia_with, initial_scan, AdiaSearch, AdiaStats, FrontierEntry,
    FrontierRegistry, VisitedEntry,
};
pub use bivariate::{depth2_origin, sweep_brute_check, BivariateDepth};
pub use combination::{binomial, next_combination, unrank, Combination, Combinations};
pub use error::{DepthError, Result};
pub use geometry::{complement_basis, project2, ComplementBasis, PointCloud, Sign, Tolerance};
pub use oracle::{
    depth_critical, depth_critical_with, depth_random_upper, oracle_work, subspace_depth, CriticalDirection,
    ORACLE_WORK_LIMIT,
};
pub use rcom::{depth_rcom, depth_rcom_with};
pub use result::{DepthOptions, DepthResult};
pub use subspace::{span_depth, SpanDepth};

/// Depth of `z` with respect to the rows of `x`, using the planar sweep for
/// `p = 2` and the adaptive search otherwise.
pub fn depth(x: &[impl AsRef<[f64]>], z: &[f64], opts: &DepthOptions) -> Result<DepthResult> {
    let cloud = PointCloud::center_at(x, z, opts.tol)?;
    if cloud.dim() == 2 {
        return planar(&cloud, opts.tol);
    }
    depth_adia_with(&cloud, opts)
}

/// Planar sweep wrapped as a [`DepthResult`].
pub fn planar(cloud: &PointCloud, tol: Tolerance) -> Result<DepthResult> {
    if cloud.dim() != 2 {
        return Err(DepthError::InvalidInput(format!("planar sweep needs p = 2, got {}", cloud.dim())));
    }
    let y: Vec<[f64; 2]> = (0..cloud.len()).map(|i| [cloud.row(i)[0], cloud.row(i)[1]]).collect();
    let d = depth2_origin(&y, tol)?;
    if let Some((a, b)) = d.collinear {
        return Err(DepthError::GeneralPosition {
            indices: cloud.source_indices(&[a.min(b), a.max(b)]),
            detail: "observations lie on a common line through the query point".into(),
        });
    }
    let [u0, u1] = d.witness_direction;
    Ok(DepthResult {
        numerator: d.numerator + cloud.zero_count(),
        n: cloud.total(),
        witness_combination: cloud.source_indices(&d.witnesses[..d.witnesses.len().min(1)]),
        witness_direction: vec![u0, u1],
    })
}
