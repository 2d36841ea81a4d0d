//! Reference depth by exhaustive enumeration of critical directions.
//!
//! Every hyperplane through the origin and `p - 1` observations is tried;
//! the depth is the smaller of its two strict sides, minimized over all such
//! hyperplanes. Cost is `O(n^p)`, so this is a test and verification tool.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::combination::{binomial, unrank};
use crate::error::{DepthError, Result};
use crate::geometry::{dot, exclude_members, span_of, PointCloud, Sign, Tolerance};
use crate::result::{min_over_combinations, DepthOptions, DepthResult};
use crate::subspace::general_position;

/// Refuse enumerations with `C(n, p - 1) * n` above this unless forced.
pub const ORACLE_WORK_LIMIT: u128 = 1_000_000_000;

/// A hyperplane normal through the origin and `p - 1` observations.
#[derive(Debug, Clone)]
pub struct CriticalDirection {
    pub u: Vec<f64>,
    pub combo: Vec<usize>,
    /// Rows strictly on the negative / positive side of `u`.
    pub below: usize,
    pub above: usize,
}

impl CriticalDirection {
    /// Normal of the hyperplane spanned by `combo` (stored row indices) with
    /// the side counts. Fails if any other row lies on that hyperplane.
    pub fn new(cloud: &PointCloud, combo: &[usize], tol: Tolerance) -> Result<Self> {
        let span = span_of(cloud, combo, tol)?;
        let u = span.complement(cloud.dim(), 1).pop().expect("one normal");
        let (mut below, mut above) = (0, 0);
        for i in 0..cloud.len() {
            match tol.sign(dot(&u, cloud.dir(i)), 1.0) {
                Sign::Negative => below += 1,
                Sign::Positive => above += 1,
                Sign::Zero if combo.contains(&i) => {}
                Sign::Zero => {
                    let mut rows = combo.to_vec();
                    rows.push(i);
                    return Err(general_position(
                        cloud,
                        rows,
                        "observations lie on a common hyperplane through the query point",
                    ));
                }
            }
        }
        Ok(Self {
            u,
            combo: combo.to_vec(),
            below,
            above,
        })
    }

    #[inline]
    pub fn min_side(&self) -> usize {
        self.below.min(self.above)
    }
}

/// Work estimate `C(m, p - 1) * m` used by the size guard.
pub fn oracle_work(m: usize, p: usize) -> u128 {
    binomial(m, p.saturating_sub(1)).saturating_mul(m as u128)
}

pub fn depth_critical(cloud: &PointCloud, tol: Tolerance) -> Result<DepthResult> {
    depth_critical_with(cloud, &DepthOptions::with_tol(tol), false)
}

/// As [`depth_critical`]; `force` lifts the [`ORACLE_WORK_LIMIT`] guard.
pub fn depth_critical_with(cloud: &PointCloud, opts: &DepthOptions, force: bool) -> Result<DepthResult> {
    let p = cloud.dim();
    let m = cloud.len();
    if cloud.total() < p || m < p - 1 {
        return Err(DepthError::Degenerate(format!(
            "need at least p = {p} observations with p - 1 away from the query point"
        )));
    }
    let work = oracle_work(m, p);
    if !force && work > ORACLE_WORK_LIMIT {
        return Err(DepthError::OracleTooLarge {
            work,
            limit: ORACLE_WORK_LIMIT,
        });
    }
    let (value, rank) = min_over_combinations(
        m,
        p - 1,
        opts,
        || (),
        |_, combo| Ok(CriticalDirection::new(cloud, combo, opts.tol)?.min_side()),
    )?;
    let combo = unrank(rank, m, p - 1);
    let critical = CriticalDirection::new(cloud, &combo, opts.tol)?;
    let u: Vec<f64> = if critical.below <= critical.above {
        critical.u.clone()
    } else {
        critical.u.iter().map(|v| -v).collect()
    };
    let span = span_of(cloud, &combo, opts.tol)?;
    Ok(DepthResult {
        numerator: value + cloud.zero_count(),
        n: cloud.total(),
        witness_combination: cloud.source_indices(&combo),
        witness_direction: exclude_members(cloud, &u, &span, &combo),
    })
}

/// Upper bound on the depth numerator from `trials` random directions.
pub fn depth_random_upper(cloud: &PointCloud, trials: usize, seed: u64) -> Result<usize> {
    if trials == 0 {
        return Err(DepthError::InvalidInput("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = vec![0.0; cloud.dim()];
    let mut best = usize::MAX;
    for _ in 0..trials {
        u.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
        let count = (0..cloud.len()).filter(|&i| dot(&u, cloud.dir(i)) <= 0.0).count();
        best = best.min(count);
    }
    Ok(best + cloud.zero_count())
}

/// `n * D(S_I)` for a combination of any arity `1..=p-1`, counted over the
/// stored rows: project onto the complement of `S_I` and take the depth of
/// the origin there by enumeration (or directly in one dimension).
pub fn subspace_depth(cloud: &PointCloud, combo: &[usize], tol: Tolerance) -> Result<usize> {
    let p = cloud.dim();
    let r = combo.len();
    if r == 0 || r >= p || combo.iter().any(|&i| i >= cloud.len()) {
        return Err(DepthError::InvalidInput(format!(
            "subspace depth needs 1..={} valid row indices, got {r}",
            p - 1
        )));
    }
    let span = span_of(cloud, combo, tol)?;
    let basis = span.complement(p, p - r);
    let projected: Vec<Vec<f64>> = (0..cloud.len())
        .map(|i| basis.iter().map(|e| dot(e, cloud.dir(i))).collect())
        .collect();
    let zero = |y: &[f64]| dot(y, y).sqrt() <= tol.eps();
    if let Some(stray) = (0..cloud.len()).find(|i| !combo.contains(i) && zero(&projected[*i])) {
        let mut rows = combo.to_vec();
        rows.push(stray);
        return Err(general_position(cloud, rows, "an observation lies in the span of the others"));
    }
    if p - r == 1 {
        let below = projected.iter().filter(|y| tol.sign(y[0], 1.0) == Sign::Negative).count();
        let above = projected.iter().filter(|y| tol.sign(y[0], 1.0) == Sign::Positive).count();
        return Ok(below.min(above) + r);
    }
    let inner = PointCloud::from_centered(&projected, tol)?;
    Ok(depth_critical_with(&inner, &DepthOptions::with_tol(tol), true)?.numerator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivariate::{depth2_origin, sweep_brute_check};

    const SIMPLEX: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];

    fn normal_rows(seed: u64, n: usize, p: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| (0..p).map(|_| rng.sample(StandardNormal)).collect())
            .collect()
    }

    #[test]
    fn planar_triangle() {
        let y = [[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]];
        let cloud = PointCloud::from_centered(&y, Tolerance::default()).unwrap();
        let r = depth_critical(&cloud, Tolerance::default()).unwrap();
        assert_eq!(r.numerator, 1);
        assert_eq!(r.numerator, sweep_brute_check(&y, Tolerance::default()));
        assert_eq!(cloud.count_closed(&r.witness_direction, Tolerance::default()), 1);
    }

    #[test]
    fn simplex_enumerates_six_hyperplanes() {
        let cloud = PointCloud::from_centered(&SIMPLEX, Tolerance::default()).unwrap();
        assert_eq!(binomial(4, 2), 6);
        let r = depth_critical(&cloud, Tolerance::default()).unwrap();
        assert_eq!((r.numerator, r.n), (1, 4));
    }

    #[test]
    fn outside_hull_is_zero() {
        let rows = normal_rows(1, 15, 3);
        let cloud = PointCloud::center_at(&rows, &[50.0, -50.0, 50.0], Tolerance::default()).unwrap();
        assert_eq!(depth_critical(&cloud, Tolerance::default()).unwrap().numerator, 0);
    }

    #[test]
    fn agrees_with_planar_sweep() {
        for seed in 0..100 {
            let rows = normal_rows(seed, 3 + seed as usize % 40, 2);
            let cloud = PointCloud::center_at(&rows, &[0.3, -0.2], Tolerance::default()).unwrap();
            let y: Vec<[f64; 2]> = (0..cloud.len()).map(|i| [cloud.row(i)[0], cloud.row(i)[1]]).collect();
            let oracle = depth_critical(&cloud, Tolerance::default()).unwrap();
            assert_eq!(oracle.numerator, depth2_origin(&y, Tolerance::default()).unwrap().numerator);
        }
    }

    #[test]
    fn refuses_large_inputs_unless_forced() {
        let rows = normal_rows(2, 300, 4);
        let cloud = PointCloud::from_centered(&rows, Tolerance::default()).unwrap();
        assert!(oracle_work(300, 4) > ORACLE_WORK_LIMIT);
        assert!(matches!(
            depth_critical(&cloud, Tolerance::default()),
            Err(DepthError::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn detects_points_on_a_common_plane() {
        let mut rows = normal_rows(3, 8, 3);
        rows.push(vec![1.0, 2.0, 0.0]);
        rows.push(vec![-2.0, 0.5, 0.0]);
        rows.push(vec![0.3, -1.0, 0.0]);
        let cloud = PointCloud::from_centered(&rows, Tolerance::default()).unwrap();
        match depth_critical(&cloud, Tolerance::default()) {
            Err(DepthError::GeneralPosition { indices, .. }) => assert_eq!(indices, vec![8, 9, 10]),
            other => panic!("expected general-position error, got {other:?}"),
        }
    }

    #[test]
    fn random_upper_bounds_the_exact_depth() {
        let cloud = PointCloud::from_centered(&SIMPLEX, Tolerance::default()).unwrap();
        assert!(depth_random_upper(&cloud, 1, 4).unwrap() >= 1);
        assert_eq!(depth_random_upper(&cloud, 5000, 4).unwrap(), 1);
        assert_eq!(depth_random_upper(&cloud, 7, 99).unwrap(), depth_random_upper(&cloud, 7, 99).unwrap());
        assert!(depth_random_upper(&cloud, 0, 1).is_err());
        for seed in 0..20 {
            let rows = normal_rows(seed, 20, 3);
            let cloud = PointCloud::center_at(&rows, &[0.4; 3], Tolerance::default()).unwrap();
            let exact = depth_critical(&cloud, Tolerance::default()).unwrap().numerator;
            assert!(depth_random_upper(&cloud, 50, seed).unwrap() >= exact);
        }
    }

    #[test]
    fn subspace_depth_of_hyperplane_combination() {
        let cloud = PointCloud::from_centered(&SIMPLEX, Tolerance::default()).unwrap();
        // r = p - 1: the two members plus the smaller strict side
        assert_eq!(subspace_depth(&cloud, &[0, 1], Tolerance::default()).unwrap(), 3);
        assert_eq!(subspace_depth(&cloud, &[0], Tolerance::default()).unwrap(), 2);
    }
}
