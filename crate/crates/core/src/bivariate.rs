//! Exact halfplane depth of the origin in the plane by a circular sweep.
//!
//! A direction `u` rotating through half a turn changes the side of point
//! `y_i` exactly when `u` becomes normal to `y_i`. Sorting those normal
//! angles (folded into `[0, pi)`) once and toggling the side bits in that
//! order visits every open arc of directions, and each arc yields the closed
//! counts of both `u` and `-u`. Points sharing a folded angle are toggled as
//! one block and the count is read only between blocks, so the result is
//! exact even when several points lie on a common line through the origin.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{DepthError, Result};
use crate::geometry::{Sign, Tolerance};

/// Result of a planar depth computation for the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateDepth {
    /// `min_u #{i : u . y_i <= 0}`, points at the origin included.
    pub numerator: usize,
    /// Total number of points.
    pub n: usize,
    /// Number of points away from the origin.
    pub m: usize,
    /// Sorted indices `i` such that the line through the origin and `y_i`
    /// bounds an arc of minimizing directions.
    pub witnesses: Vec<usize>,
    /// A unit direction `u` attaining the minimum.
    pub witness_direction: [f64; 2],
    /// Two nonzero points on a common line through the origin, if any.
    pub collinear: Option<(usize, usize)>,
}

impl BivariateDepth {
    pub fn depth(&self) -> f64 {
        self.numerator as f64 / self.n as f64
    }
}

/// Exact depth of the origin with respect to `points`.
///
/// Points with norm at most `eps` times the largest norm count as the origin.
pub fn depth2_origin(points: &[[f64; 2]], tol: Tolerance) -> Result<BivariateDepth> {
    if points.is_empty() {
        return Err(DepthError::Degenerate("no points".into()));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(DepthError::InvalidInput("non-finite coordinates".into()));
    }
    let threshold = tol.eps() * max_norm(points);
    Ok(Sweeper::default().run(points, threshold, tol.eps(), true))
}

fn max_norm(points: &[[f64; 2]]) -> f64 {
    points.iter().map(|y| y[0].hypot(y[1])).fold(0.0, f64::max)
}

/// Reusable buffers for repeated sweeps.
#[derive(Debug, Default)]
pub(crate) struct Sweeper {
    keys: Vec<(f64, usize)>,
    side: Vec<bool>,
    starts: Vec<usize>,
    region_s1: Vec<usize>,
}

impl Sweeper {
    /// `zero_threshold` is absolute; `angle_eps` (radians) merges folded
    /// angles into one block.
    pub fn run(&mut self, points: &[[f64; 2]], zero_threshold: f64, angle_eps: f64, want_witnesses: bool) -> BivariateDepth {
        let n = points.len();
        self.keys.clear();
        for (i, y) in points.iter().enumerate() {
            if y[0].hypot(y[1]) <= zero_threshold {
                continue;
            }
            let mut a = (y[1].atan2(y[0]) + FRAC_PI_2).rem_euclid(PI);
            if a >= PI {
                a -= PI;
            }
            self.keys.push((a, i));
        }
        let m = self.keys.len();
        if m == 0 {
            return BivariateDepth {
                numerator: n,
                n,
                m,
                witnesses: Vec::new(),
                witness_direction: [1.0, 0.0],
                collinear: None,
            };
        }
        self.keys.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        self.group(angle_eps);
        if self.starts.len() > 1 && self.keys[0].0 + PI - self.keys[m - 1].0 <= angle_eps {
            // the last block wraps around to the first one
            let moved = m - self.starts[self.starts.len() - 1];
            self.keys.rotate_right(moved);
            for key in &mut self.keys[..moved] {
                key.0 -= PI;
            }
            self.group(angle_eps);
        }
        let blocks = self.starts.len();
        let block_end = |k: usize, starts: &[usize]| if k + 1 < starts.len() { starts[k + 1] } else { m };
        let angle_of = |k: usize, keys: &[(f64, usize)], starts: &[usize]| keys[starts[k]].0;

        // start strictly inside the gap that precedes the first block
        let first = angle_of(0, &self.keys, &self.starts);
        let start = if blocks == 1 {
            first - FRAC_PI_2
        } else {
            0.5 * (angle_of(blocks - 1, &self.keys, &self.starts) - PI + first)
        };
        let (us, uc) = start.sin_cos();
        self.side.clear();
        let mut s1 = 0;
        for &(_, i) in &self.keys {
            let positive = uc * points[i][0] + us * points[i][1] > 0.0;
            s1 += positive as usize;
            self.side.push(positive);
        }

        let mut best = usize::MAX;
        self.region_s1.clear();
        for k in 0..blocks {
            for pos in self.starts[k]..block_end(k, &self.starts) {
                if self.side[pos] {
                    s1 -= 1;
                } else {
                    s1 += 1;
                }
                self.side[pos] = !self.side[pos];
            }
            best = best.min(s1.min(m - s1));
            self.region_s1.push(s1);
        }

        let collinear = (0..blocks)
            .find(|&k| block_end(k, &self.starts) - self.starts[k] > 1)
            .map(|k| {
                let s = self.starts[k];
                (self.keys[s].1, self.keys[s + 1].1)
            });

        let mut witnesses = Vec::new();
        let mut witness_direction = None;
        for k in 0..blocks {
            let s1 = self.region_s1[k];
            if s1.min(m - s1) != best {
                continue;
            }
            let next = (k + 1) % blocks;
            if witness_direction.is_none() {
                let lo = angle_of(k, &self.keys, &self.starts);
                let hi = if next == 0 {
                    angle_of(0, &self.keys, &self.starts) + PI
                } else {
                    angle_of(next, &self.keys, &self.starts)
                };
                let (s, c) = (0.5 * (lo + hi)).sin_cos();
                // m - s1 points lie strictly on the negative side of (c, s)
                witness_direction = Some(if m - s1 <= s1 { [c, s] } else { [-c, -s] });
                if !want_witnesses {
                    break;
                }
            }
            for b in [k, next] {
                witnesses.extend(self.keys[self.starts[b]..block_end(b, &self.starts)].iter().map(|key| key.1));
            }
        }
        witnesses.sort_unstable();
        witnesses.dedup();

        BivariateDepth {
            numerator: best + (n - m),
            n,
            m,
            witnesses,
            witness_direction: witness_direction.expect("at least one region"),
            collinear,
        }
    }

    fn group(&mut self, angle_eps: f64) {
        self.starts.clear();
        self.starts.push(0);
        for k in 1..self.keys.len() {
            if self.keys[k].0 - self.keys[k - 1].0 > angle_eps {
                self.starts.push(k);
            }
        }
    }
}

/// Quadratic reference: evaluates the closed count at every critical angle,
/// its antipode and every midpoint between consecutive critical angles.
pub fn sweep_brute_check(points: &[[f64; 2]], tol: Tolerance) -> usize {
    let n = points.len();
    let threshold = tol.eps() * max_norm(points);
    let nonzero: Vec<[f64; 2]> = points
        .iter()
        .filter(|y| y[0].hypot(y[1]) > threshold)
        .map(|y| {
            let r = y[0].hypot(y[1]);
            [y[0] / r, y[1] / r]
        })
        .collect();
    let zeros = n - nonzero.len();
    if nonzero.is_empty() {
        return n;
    }
    let two_pi = 2.0 * PI;
    let mut critical: Vec<f64> = nonzero
        .iter()
        .flat_map(|y| {
            let a = y[1].atan2(y[0]);
            [(a + FRAC_PI_2).rem_euclid(two_pi), (a - FRAC_PI_2).rem_euclid(two_pi)]
        })
        .collect();
    critical.sort_by(f64::total_cmp);
    let mut candidates = critical.clone();
    for w in critical.windows(2) {
        candidates.push(0.5 * (w[0] + w[1]));
    }
    candidates.push(0.5 * (critical[critical.len() - 1] + critical[0] + two_pi));

    candidates
        .iter()
        .map(|&t| {
            let (s, c) = t.sin_cos();
            zeros
                + nonzero
                    .iter()
                    .filter(|y| tol.sign(c * y[0] + s * y[1], 1.0) != Sign::Positive)
                    .count()
        })
        .min()
        .expect("nonempty candidate set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn depth(points: &[[f64; 2]]) -> BivariateDepth {
        depth2_origin(points, Tolerance::default()).unwrap()
    }

    fn closed_count(points: &[[f64; 2]], u: [f64; 2], skip: Option<usize>) -> usize {
        points
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .filter(|(_, y)| Tolerance::default().sign(u[0] * y[0] + u[1] * y[1], y[0].hypot(y[1])) != Sign::Positive)
            .count()
    }

    #[test]
    fn points_on_one_side() {
        let d = depth(&[[1.0, 0.0], [2.0, 1.0], [1.0, 3.0]]);
        assert_eq!(d.numerator, 0);
        assert_eq!(d.m, 3);
    }

    #[test]
    fn triangle_around_origin() {
        let y = [[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]];
        assert_eq!(sweep_brute_check(&y, Tolerance::default()), 1);
        assert_eq!(depth(&y).numerator, 1);
    }

    #[test]
    fn origin_plus_antipodal_pair() {
        let y = [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0]];
        let d = depth(&y);
        assert_eq!((d.m, d.numerator), (2, 2));
        assert_eq!(d.collinear, Some((1, 2)));
        assert_eq!(sweep_brute_check(&y, Tolerance::default()), 2);
    }

    #[test]
    fn axis_cross() {
        let y = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
        assert_eq!(sweep_brute_check(&y, Tolerance::default()), 2);
        assert_eq!(depth(&y).numerator, 2);
    }

    #[test]
    fn brute_small_cases() {
        let tol = Tolerance::default();
        assert_eq!(sweep_brute_check(&[[1.0, 0.0]], tol), 0);
        assert_eq!(sweep_brute_check(&[[1.0, 0.0], [-1.0, 0.0]], tol), 1);
        assert_eq!(depth(&[[1.0, 0.0], [-1.0, 0.0]]).numerator, 1);
    }

    #[test]
    fn point_on_initial_axis() {
        // (0, 1) is normal to u = (1, 0); the sweep must not double-flip it
        let y = [[0.0, 1.0], [1.0, -1.0], [-1.0, -1.0]];
        assert_eq!(depth(&y).numerator, sweep_brute_check(&y, Tolerance::default()));
        assert_eq!(depth(&y).numerator, 1);
    }

    #[test]
    fn all_points_at_origin() {
        let d = depth(&[[0.0, 0.0], [0.0, 0.0]]);
        assert_eq!((d.numerator, d.m), (2, 0));
        assert!(d.witnesses.is_empty());
        assert!(depth2_origin(&[], Tolerance::default()).is_err());
    }

    #[test]
    fn fifty_normal_points_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let y: Vec<[f64; 2]> = (0..50).map(|_| [rng.sample(StandardNormal), rng.sample(StandardNormal)]).collect();
        assert_eq!(depth(&y).numerator, sweep_brute_check(&y, Tolerance::default()));
    }

    #[test]
    fn witnesses_are_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let n = rng.random_range(1..60);
            let shift: f64 = rng.random_range(-1.5..1.5);
            let y: Vec<[f64; 2]> = (0..n)
                .map(|_| [rng.sample::<f64, _>(StandardNormal) + shift, rng.sample(StandardNormal)])
                .collect();
            let d = depth(&y);
            assert!(!d.witnesses.is_empty());
            assert_eq!(closed_count(&y, d.witness_direction, None), d.numerator);
            for &w in &d.witnesses {
                let r = y[w][0].hypot(y[w][1]);
                let normal = [-y[w][1] / r, y[w][0] / r];
                let best = closed_count(&y, normal, Some(w)).min(closed_count(&y, [-normal[0], -normal[1]], Some(w)));
                assert_eq!(best, d.numerator, "witness {w}");
            }
        }
    }

    fn arb_cloud() -> impl Strategy<Value = Vec<[f64; 2]>> {
        let point = prop_oneof![
            4 => (-5i32..=5, -5i32..=5).prop_map(|(a, b)| [a as f64, b as f64]),
            4 => (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| [a, b]),
            1 => Just([0.0, 0.0]),
        ];
        prop::collection::vec(point, 1..80)
    }

    proptest! {
        #[test]
        fn sweep_equals_brute_force(y in arb_cloud()) {
            prop_assert_eq!(depth(&y).numerator, sweep_brute_check(&y, Tolerance::default()));
        }

        #[test]
        fn rotation_invariant(y in arb_cloud(), angle in 0.0f64..(2.0 * PI)) {
            let (s, c) = angle.sin_cos();
            let rotated: Vec<[f64; 2]> = y.iter().map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]]).collect();
            prop_assert_eq!(depth(&y).numerator, depth(&rotated).numerator);
        }

        #[test]
        fn at_most_half_without_zeros(y in arb_cloud()) {
            let d = depth(&y);
            if d.m == d.n {
                prop_assert!(d.numerator <= d.m.div_ceil(2));
            }
            prop_assert!(d.numerator <= d.n);
        }
    }
}
