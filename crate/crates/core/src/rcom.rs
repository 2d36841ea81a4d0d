//! Exhaustive depth for `p >= 3`: the minimum over every `(p - 2)`-point
//! span of its planar depth, minus the `p - 2` members.

use crate::combination::unrank;
use crate::error::Result;
use crate::geometry::{PointCloud, Tolerance};
use crate::result::{min_over_combinations, DepthOptions, DepthResult};
use crate::subspace::{check_high_dim, SpanEvaluator};

pub fn depth_rcom(cloud: &PointCloud, tol: Tolerance) -> Result<DepthResult> {
    depth_rcom_with(cloud, &DepthOptions::with_tol(tol))
}

pub fn depth_rcom_with(cloud: &PointCloud, opts: &DepthOptions) -> Result<DepthResult> {
    check_high_dim(cloud)?;
    let arity = cloud.dim() - 2;
    let (value, rank) = min_over_combinations(
        cloud.len(),
        arity,
        opts,
        || SpanEvaluator::new(cloud, opts.tol),
        |eval, combo| Ok(eval.eval(combo, false)?.numerator),
    )?;
    let combo = unrank(rank, cloud.len(), arity);
    let witness_direction = SpanEvaluator::new(cloud, opts.tol).witness_direction(&combo)?;
    Ok(DepthResult {
        numerator: value - arity + cloud.zero_count(),
        n: cloud.total(),
        witness_combination: cloud.source_indices(&combo),
        witness_direction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DepthError;

    const SIMPLEX: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];

    #[test]
    fn regular_simplex_has_depth_one_quarter() {
        let cloud = PointCloud::from_centered(&SIMPLEX, Tolerance::default()).unwrap();
        let r = depth_rcom(&cloud, Tolerance::default()).unwrap();
        assert_eq!((r.numerator, r.n), (1, 4));
        assert_eq!(r.depth(), 0.25);
        assert_eq!(cloud.count_closed(&r.witness_direction, Tolerance::default()), 1);
    }

    #[test]
    fn far_query_has_depth_zero() {
        let pts: Vec<Vec<f64>> = (0..12)
            .map(|i| {
                let t = i as f64;
                vec![t.sin(), (1.3 * t).cos(), (0.7 * t).sin() * 0.5]
            })
            .collect();
        let cloud = PointCloud::center_at(&pts, &[100.0, 100.0, 100.0], Tolerance::default()).unwrap();
        let r = depth_rcom(&cloud, Tolerance::default()).unwrap();
        assert_eq!(r.numerator, 0);
        assert_eq!(cloud.count_closed(&r.witness_direction, Tolerance::default()), 0);
    }

    #[test]
    fn too_few_points() {
        let cloud = PointCloud::from_centered(&SIMPLEX[..3], Tolerance::default()).unwrap();
        assert!(matches!(depth_rcom(&cloud, Tolerance::default()), Err(DepthError::Degenerate(_))));
        let flat = PointCloud::from_centered(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], Tolerance::default()).unwrap();
        assert!(matches!(depth_rcom(&flat, Tolerance::default()), Err(DepthError::InvalidInput(_))));
    }

    #[test]
    fn query_at_a_data_point_counts_it() {
        let mut pts = SIMPLEX.map(|r| r.to_vec()).to_vec();
        pts.push(vec![0.0, 0.0, 0.0]);
        let cloud = PointCloud::from_centered(&pts, Tolerance::default()).unwrap();
        let r = depth_rcom(&cloud, Tolerance::default()).unwrap();
        assert_eq!((r.numerator, r.n), (2, 5));
    }

    #[test]
    fn threaded_scan_matches_serial() {
        let pts: Vec<Vec<f64>> = (0..30)
            .map(|i| {
                let t = i as f64 * 0.37;
                vec![t.sin() * 2.0, (2.1 * t).cos(), (0.3 * t).sin() + 0.1 * t.cos(), (1.7 * t).sin()]
            })
            .collect();
        let cloud = PointCloud::center_at(&pts, &[0.1, 0.0, 0.05, 0.0], Tolerance::default()).unwrap();
        let serial = depth_rcom(&cloud, Tolerance::default()).unwrap();
        let opts = DepthOptions {
            threads: 4,
            ..DepthOptions::default()
        };
        assert_eq!(depth_rcom_with(&cloud, &opts).unwrap(), serial);
    }
}
