//! Linear-algebra substrate shared by all depth algorithms.
//!
//! Everything here works on a [`PointCloud`]: the observations translated so
//! that the query point sits at the origin. Depth of the origin only depends
//! on the direction of each row, so the cloud also keeps unit-length copies
//! of its rows and the algorithms run on those. Sign decisions go through a
//! [`Tolerance`] band instead of exact predicates; a value inside the band is
//! treated as lying on the hyperplane.

use crate::error::{DepthError, Result};

/// Relative tolerance for sign classification of dot products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

/// Three-way outcome of a tolerance-aware sign test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-12;

    pub fn new(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(DepthError::InvalidInput(format!(
                "tolerance must be a finite nonnegative number, got {eps}"
            )));
        }
        Ok(Self { eps })
    }

    #[inline]
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Classifies `value` against the band `[-eps * scale, eps * scale]`.
    #[inline]
    pub fn sign(&self, value: f64, scale: f64) -> Sign {
        let band = self.eps * scale;
        if value < -band {
            Sign::Negative
        } else if value > band {
            Sign::Positive
        } else {
            Sign::Zero
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps: Self::DEFAULT_EPS,
        }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Observations centered at the query point, with coincident rows removed.
///
/// Rows are stored row-major. `source` maps every stored row back to its
/// index in the caller's data so that witnesses and errors can name the
/// original observations.
#[derive(Debug, Clone)]
pub struct PointCloud {
    coords: Vec<f64>,
    dirs: Vec<f64>,
    dim: usize,
    source: Vec<usize>,
    zero_count: usize,
}

impl PointCloud {
    /// Translates `raw` so that `z` becomes the origin.
    ///
    /// Rows that coincide with `z` (relative to the tolerance) are dropped and
    /// counted in [`zero_count`](Self::zero_count); every closed halfspace
    /// through `z` contains them, so algorithms add them back to the final
    /// numerator.
    pub fn center_at<R: AsRef<[f64]>>(raw: &[R], z: &[f64], tol: Tolerance) -> Result<Self> {
        let dim = z.len();
        if dim < 2 {
            return Err(DepthError::InvalidInput(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        if raw.is_empty() {
            return Err(DepthError::InvalidInput("no observations".into()));
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(DepthError::InvalidInput("query point has non-finite coordinates".into()));
        }
        let z_norm = norm(z);

        let mut coords = Vec::with_capacity(raw.len() * dim);
        let mut dirs = Vec::with_capacity(raw.len() * dim);
        let mut source = Vec::with_capacity(raw.len());
        let mut zero_count = 0;
        let mut shifted = vec![0.0; dim];
        for (i, row) in raw.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(DepthError::InvalidInput(format!(
                    "observation {i} has {} coordinates, expected {dim}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(DepthError::InvalidInput(format!(
                    "observation {i} has non-finite coordinates"
                )));
            }
            for (s, (x, c)) in shifted.iter_mut().zip(row.iter().zip(z)) {
                *s = x - c;
            }
            let len = norm(&shifted);
            if !len.is_finite() {
                return Err(DepthError::InvalidInput(format!(
                    "observation {i} overflows after centering"
                )));
            }
            let scale = 1.0_f64.max(norm(row) + z_norm);
            if len <= tol.eps() * scale {
                zero_count += 1;
                continue;
            }
            coords.extend_from_slice(&shifted);
            dirs.extend(shifted.iter().map(|v| v / len));
            source.push(i);
        }
        if source.is_empty() {
            return Err(DepthError::Degenerate(
                "every observation coincides with the query point".into(),
            ));
        }
        Ok(Self {
            coords,
            dirs,
            dim,
            source,
            zero_count,
        })
    }

    /// Builds a cloud from rows that are already centered at the origin.
    pub fn from_centered<R: AsRef<[f64]>>(rows: &[R], tol: Tolerance) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        Self::center_at(rows, &vec![0.0; dim.max(2)], tol)
    }

    /// Number of stored (nonzero) rows.
    #[inline]
    pub fn len(&self) -> usize {
        self.source.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    /// Total number of observations, including those removed as coincident.
    #[inline]
    pub fn total(&self) -> usize {
        self.source.len() + self.zero_count
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    /// Centered coordinates `X_i - z` of stored row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Unit direction of stored row `i`.
    #[inline]
    pub fn dir(&self, i: usize) -> &[f64] {
        &self.dirs[i * self.dim..(i + 1) * self.dim]
    }

    /// Index of stored row `i` in the caller's original data.
    #[inline]
    pub fn source_index(&self, i: usize) -> usize {
        self.source[i]
    }

    pub fn source_indices(&self, rows: &[usize]) -> Vec<usize> {
        rows.iter().map(|&i| self.source[i]).collect()
    }

    /// `#{i : u . x_i <= 0}` with tolerance signs, coincident points included.
    pub fn count_closed(&self, u: &[f64], tol: Tolerance) -> usize {
        let scale = norm(u);
        let inside = (0..self.len())
            .filter(|&i| tol.sign(dot(u, self.dir(i)), scale) != Sign::Positive)
            .count();
        inside + self.zero_count
    }
}

/// Orthonormal basis of the span of a few cloud rows, built by iterated
/// Gram-Schmidt. `coeffs[j][l]` is the component of input row `j` along
/// `basis[l]` (lower triangular).
#[derive(Debug, Clone)]
pub(crate) struct SpanBasis {
    pub basis: Vec<Vec<f64>>,
    coeffs: Vec<Vec<f64>>,
}

/// Returned when the rows handed to [`SpanBasis::new`] are dependent.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RankDeficient {
    /// Position (within the input rows) of the first dependent row.
    pub row: usize,
}

/// Removes from `w` its components along every vector in `basis`, twice.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
        }
    }
}

impl SpanBasis {
    pub fn new<'a>(rows: impl IntoIterator<Item = &'a [f64]>, tol: Tolerance) -> Result<Self, RankDeficient> {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut coeffs = Vec::new();
        for (j, row) in rows.into_iter().enumerate() {
            let scale = norm(row);
            let mut w = row.to_vec();
            orthogonalize(&mut w, &basis);
            let residual = norm(&w);
            // rounding alone leaves ~1e-16 of a dependent row behind
            if residual <= tol.eps().max(64.0 * f64::EPSILON) * scale {
                return Err(RankDeficient { row: j });
            }
            let mut c: Vec<f64> = basis.iter().map(|q| dot(q, row)).collect();
            c.push(residual);
            coeffs.push(c);
            w.iter_mut().for_each(|v| *v /= residual);
            basis.push(w);
        }
        Ok(Self { basis, coeffs })
    }

    /// Orthonormal vectors completing the span to `count` extra dimensions.
    ///
    /// Candidates are the standard basis vectors; at each step the one with
    /// the largest residual against the current basis is orthogonalized and
    /// kept.
    pub fn complement(&self, dim: usize, count: usize) -> Vec<Vec<f64>> {
        let mut all = self.basis.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let best = (0..dim)
                .map(|k| {
                    let along: f64 = all.iter().map(|q| q[k] * q[k]).sum();
                    (k, 1.0 - along)
                })
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
                .map(|(k, _)| k)
                .expect("dimension is at least one");
            let mut w = vec![0.0; dim];
            w[best] = 1.0;
            orthogonalize(&mut w, &all);
            let len = norm(&w);
            w.iter_mut().for_each(|v| *v /= len);
            all.push(w.clone());
            out.push(w);
        }
        out
    }

    /// A vector `v` in the span with `v . row_j = 1` for every input row.
    pub fn dual_ones(&self, dim: usize) -> Vec<f64> {
        let k = self.basis.len();
        let mut c = vec![0.0; k];
        for j in 0..k {
            let partial: f64 = (0..j).map(|l| self.coeffs[j][l] * c[l]).sum();
            c[j] = (1.0 - partial) / self.coeffs[j][j];
        }
        let mut v = vec![0.0; dim];
        for (q, cl) in self.basis.iter().zip(&c) {
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi += cl * qi;
            }
        }
        v
    }
}

/// Two orthonormal vectors spanning the orthogonal complement of a
/// `(p - 2)`-point span.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementBasis {
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
}

/// Orthonormal basis of the complement of `span{x_i : i in combo}`.
///
/// `combo` indexes stored rows and must hold exactly `p - 2` of them.
pub fn complement_basis(cloud: &PointCloud, combo: &[usize], tol: Tolerance) -> Result<ComplementBasis> {
    let p = cloud.dim();
    if p < 3 || combo.len() != p - 2 {
        return Err(DepthError::InvalidInput(format!(
            "complement basis needs p >= 3 and p - 2 rows, got p = {p} and {} rows",
            combo.len()
        )));
    }
    if let Some(&bad) = combo.iter().find(|&&i| i >= cloud.len()) {
        return Err(DepthError::InvalidInput(format!("row index {bad} out of range")));
    }
    let span = span_of(cloud, combo, tol)?;
    let mut comp = span.complement(p, 2);
    let e2 = comp.pop().expect("two vectors");
    let e1 = comp.pop().expect("two vectors");
    Ok(ComplementBasis { e1, e2 })
}

/// Span of the unit directions of `combo`, reporting dependence as a
/// general-position violation.
pub(crate) fn span_of(cloud: &PointCloud, combo: &[usize], tol: Tolerance) -> Result<SpanBasis> {
    SpanBasis::new(combo.iter().map(|&i| cloud.dir(i)), tol).map_err(|e| DepthError::GeneralPosition {
        indices: cloud.source_indices(&combo[..=e.row]),
        detail: "observations are linearly dependent together with the query point".into(),
    })
}

/// Coordinates of every centered row in the plane spanned by `basis`.
pub fn project2(cloud: &PointCloud, basis: &ComplementBasis) -> Vec<[f64; 2]> {
    (0..cloud.len())
        .map(|i| {
            let x = cloud.row(i);
            [dot(&basis.e1, x), dot(&basis.e2, x)]
        })
        .collect()
}

/// Same as [`project2`] but on unit directions, into a reusable buffer.
pub(crate) fn project_dirs(cloud: &PointCloud, e1: &[f64], e2: &[f64], out: &mut Vec<[f64; 2]>) {
    out.clear();
    out.extend((0..cloud.len()).map(|i| {
        let x = cloud.dir(i);
        [dot(e1, x), dot(e2, x)]
    }));
}

/// Turns a hyperplane normal `u` (with `u . x_j = 0` for every member) into a
/// direction whose closed halfspace `{w . x <= 0}` keeps the points strictly
/// on the negative side of `u` and drops the members.
pub(crate) fn exclude_members(cloud: &PointCloud, u: &[f64], span: &SpanBasis, members: &[usize]) -> Vec<f64> {
    let p = cloud.dim();
    let v = span.dual_ones(p);
    let mut step = f64::INFINITY;
    for i in 0..cloud.len() {
        if members.contains(&i) {
            continue;
        }
        let x = cloud.dir(i);
        let a = dot(u, x).abs();
        let b = dot(&v, x).abs();
        if b > 0.0 {
            step = step.min(0.5 * a / b);
        }
    }
    let v_norm = norm(&v);
    if v_norm > 0.0 {
        step = step.min(0.5 / v_norm);
    }
    if !step.is_finite() {
        step = 0.0;
    }
    let mut w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + step * b).collect();
    let len = norm(&w);
    w.iter_mut().for_each(|x| *x /= len);
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn normal_rows(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| (0..p).map(|_| rng.sample(StandardNormal)).collect())
            .collect()
    }

    #[test]
    fn center_removes_coincident_points() {
        let cloud = PointCloud::center_at(&[[1.0, 1.0], [2.0, 2.0]], &[1.0, 1.0], Tolerance::default()).unwrap();
        assert_eq!(cloud.len(), 1);
        assert_eq!(cloud.zero_count(), 1);
        assert_eq!(cloud.total(), 2);
        assert_eq!(cloud.row(0), &[1.0, 1.0]);
        assert_eq!(cloud.source_index(0), 1);
    }

    #[test]
    fn center_identity_shift() {
        let cloud = PointCloud::center_at(&[[3.0, 4.0]], &[0.0, 0.0], Tolerance::default()).unwrap();
        assert_eq!(cloud.row(0), &[3.0, 4.0]);
        assert_eq!(cloud.zero_count(), 0);
        assert!((cloud.dir(0)[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn center_shift_matches_direct_subtraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let raw = normal_rows(&mut rng, 10, 3);
        let z = [0.4; 3];
        let cloud = PointCloud::center_at(&raw, &z, Tolerance::default()).unwrap();
        assert_eq!(cloud.len(), 10);
        assert_eq!(cloud.zero_count(), 0);
        for (i, r) in raw.iter().enumerate() {
            for (got, v) in cloud.row(i).iter().zip(r) {
                assert_eq!(*got, v - 0.4);
            }
        }
    }

    #[test]
    fn center_rejects_bad_input() {
        let tol = Tolerance::default();
        assert!(matches!(
            PointCloud::center_at(&[[1.0, f64::NAN]], &[0.0, 0.0], tol),
            Err(DepthError::InvalidInput(_))
        ));
        assert!(matches!(
            PointCloud::center_at(&[[1.0, 1.0]], &[1.0, 1.0], tol),
            Err(DepthError::Degenerate(_))
        ));
        assert!(matches!(
            PointCloud::center_at(&[vec![1.0, 1.0, 2.0]], &[0.0, 0.0], tol),
            Err(DepthError::InvalidInput(_))
        ));
        assert!(PointCloud::center_at(&[[1.0]], &[0.0], tol).is_err());
        assert!(Tolerance::new(-1.0).is_err());
    }

    fn check_basis(cloud: &PointCloud, combo: &[usize], b: &ComplementBasis) {
        assert!((norm(&b.e1) - 1.0).abs() < 1e-12);
        assert!((norm(&b.e2) - 1.0).abs() < 1e-12);
        assert!(dot(&b.e1, &b.e2).abs() < 1e-12);
        for &j in combo {
            assert!(dot(&b.e1, cloud.row(j)).abs() < 1e-12 * norm(cloud.row(j)).max(1.0));
            assert!(dot(&b.e2, cloud.row(j)).abs() < 1e-12 * norm(cloud.row(j)).max(1.0));
        }
    }

    #[test]
    fn complement_of_axis() {
        let cloud = PointCloud::from_centered(&[[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]], Tolerance::default()).unwrap();
        let b = complement_basis(&cloud, &[0], Tolerance::default()).unwrap();
        assert_eq!(b.e1[0], 0.0);
        assert_eq!(b.e2[0], 0.0);
        check_basis(&cloud, &[0], &b);
    }

    #[test]
    fn complement_of_coordinate_plane_in_four_dims() {
        let rows = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]];
        let cloud = PointCloud::from_centered(&rows, Tolerance::default()).unwrap();
        let b = complement_basis(&cloud, &[0, 1], Tolerance::default()).unwrap();
        for e in [&b.e1, &b.e2] {
            assert_eq!(e[0], 0.0);
            assert_eq!(e[1], 0.0);
        }
        check_basis(&cloud, &[0, 1], &b);
    }

    #[test]
    fn complement_of_diagonal() {
        let cloud = PointCloud::from_centered(&[[1.0, 1.0, 1.0]], Tolerance::default()).unwrap();
        let b = complement_basis(&cloud, &[0], Tolerance::default()).unwrap();
        check_basis(&cloud, &[0], &b);
    }

    #[test]
    fn complement_reports_dependent_rows() {
        let rows = [[1.0, 2.0, 0.0, 1.0], [2.0, 4.0, 0.0, 2.0], [0.0, 0.0, 1.0, 0.0]];
        let cloud = PointCloud::from_centered(&rows, Tolerance::default()).unwrap();
        match complement_basis(&cloud, &[0, 1], Tolerance::default()) {
            Err(DepthError::GeneralPosition { indices, .. }) => assert_eq!(indices, vec![0, 1]),
            other => panic!("expected general-position error, got {other:?}"),
        }
    }

    #[test]
    fn projection_of_basis_vector_and_member() {
        let rows = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let cloud = PointCloud::from_centered(&rows, Tolerance::default()).unwrap();
        let basis = ComplementBasis {
            e1: vec![0.0, 1.0, 0.0],
            e2: vec![0.0, 0.0, 1.0],
        };
        let y = project2(&cloud, &basis);
        assert_eq!(y[1], [1.0, 0.0]);
        assert_eq!(y[0], [0.0, 0.0]);
    }

    #[test]
    fn projection_contracts_and_annihilates_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rows = normal_rows(&mut rng, 25, 4);
        let cloud = PointCloud::from_centered(&rows, Tolerance::default()).unwrap();
        let combo = [3, 17];
        let b = complement_basis(&cloud, &combo, Tolerance::default()).unwrap();
        check_basis(&cloud, &combo, &b);
        let y = project2(&cloud, &b);
        for (i, yi) in y.iter().enumerate() {
            let len = (yi[0] * yi[0] + yi[1] * yi[1]).sqrt();
            assert!(len <= norm(cloud.row(i)) * (1.0 + 1e-12));
            if combo.contains(&i) {
                assert!(len < 1e-12);
            }
        }
    }

    #[test]
    fn dual_vector_hits_every_row_with_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows = normal_rows(&mut rng, 4, 5);
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let span = SpanBasis::new(refs.iter().copied(), Tolerance::default()).unwrap();
        let v = span.dual_ones(5);
        for r in &rows {
            assert!((dot(&v, r) - 1.0).abs() < 1e-10);
        }
    }
}
