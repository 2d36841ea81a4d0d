//! Depth of a `(p - 2)`-point span: project onto its 2-D complement and run
//! the planar sweep. Shared by the exhaustive and adaptive algorithms.

use crate::bivariate::Sweeper;
use crate::error::{DepthError, Result};
use crate::geometry::{exclude_members, project_dirs, span_of, PointCloud, Tolerance};

/// Depth of `span{x_i : i in I}` for one combination `I` of arity `p - 2`.
#[derive(Debug, Clone)]
pub struct SpanDepth {
    /// `n * D(S_I)` over the stored rows; the members of `I` are counted.
    pub numerator: usize,
    /// Rows `w` such that the hyperplane through the origin, `I` and `x_w`
    /// bounds a minimizing halfspace.
    pub witnesses: Vec<usize>,
    /// Unit normal in the complement of `S_I` attaining the minimum.
    pub direction: Vec<f64>,
}

pub(crate) struct SpanEvaluator<'a> {
    cloud: &'a PointCloud,
    tol: Tolerance,
    sweeper: Sweeper,
    projected: Vec<[f64; 2]>,
}

impl<'a> SpanEvaluator<'a> {
    pub fn new(cloud: &'a PointCloud, tol: Tolerance) -> Self {
        Self {
            cloud,
            tol,
            sweeper: Sweeper::default(),
            projected: Vec::with_capacity(cloud.len()),
        }
    }

    pub fn eval(&mut self, combo: &[usize], want_witnesses: bool) -> Result<SpanDepth> {
        let cloud = self.cloud;
        let p = cloud.dim();
        debug_assert_eq!(combo.len(), p - 2);
        let span = span_of(cloud, combo, self.tol)?;
        let comp = span.complement(p, 2);
        let (e1, e2) = (&comp[0], &comp[1]);
        project_dirs(cloud, e1, e2, &mut self.projected);
        // rows are unit vectors, so thresholds are absolute
        let eps = self.tol.eps();
        let d = self.sweeper.run(&self.projected, eps, eps, want_witnesses);

        if d.n - d.m != combo.len() {
            let stray = (0..cloud.len())
                .find(|i| !combo.contains(i) && self.projected[*i][0].hypot(self.projected[*i][1]) <= eps)
                .expect("a non-member projects onto the origin");
            let mut rows = combo.to_vec();
            rows.push(stray);
            return Err(general_position(cloud, rows, "an observation lies in the span of the others"));
        }
        if let Some((a, b)) = d.collinear {
            let mut rows = combo.to_vec();
            rows.extend([a, b]);
            return Err(general_position(
                cloud,
                rows,
                "observations lie on a common hyperplane through the query point",
            ));
        }

        let [c1, c2] = d.witness_direction;
        let direction = e1.iter().zip(e2).map(|(a, b)| c1 * a + c2 * b).collect();
        Ok(SpanDepth {
            numerator: d.numerator,
            witnesses: d.witnesses,
            direction,
        })
    }

    /// Direction whose closed halfspace holds `numerator - (p - 2)` rows,
    /// obtained by tilting the minimizing normal of `S_I` off the members.
    pub fn witness_direction(&mut self, combo: &[usize]) -> Result<Vec<f64>> {
        let d = self.eval(combo, false)?;
        let span = span_of(self.cloud, combo, self.tol)?;
        Ok(exclude_members(self.cloud, &d.direction, &span, combo))
    }
}

pub(crate) fn general_position(cloud: &PointCloud, mut rows: Vec<usize>, detail: &str) -> DepthError {
    rows.sort_unstable();
    rows.dedup();
    DepthError::GeneralPosition {
        indices: cloud.source_indices(&rows),
        detail: detail.into(),
    }
}

/// Shape requirements of the `p >= 3` algorithms.
pub(crate) fn check_high_dim(cloud: &PointCloud) -> Result<()> {
    let p = cloud.dim();
    if p < 3 {
        return Err(DepthError::InvalidInput(format!("dimension must be at least 3, got {p}")));
    }
    if cloud.total() <= p {
        return Err(DepthError::Degenerate(format!(
            "need more observations than dimensions, got n = {} for p = {p}",
            cloud.total()
        )));
    }
    if cloud.len() < p - 1 {
        return Err(DepthError::Degenerate(format!(
            "only {} observations differ from the query point",
            cloud.len()
        )));
    }
    Ok(())
}

/// Depth of `S_I` for a single combination, as a public entry point.
pub fn span_depth(cloud: &PointCloud, combo: &[usize], tol: Tolerance) -> Result<SpanDepth> {
    let p = cloud.dim();
    if p < 3 || combo.len() != p - 2 || combo.iter().any(|&i| i >= cloud.len()) {
        return Err(DepthError::InvalidInput(format!(
            "span depth needs p - 2 = {} valid row indices",
            p.saturating_sub(2)
        )));
    }
    SpanEvaluator::new(cloud, tol).eval(combo, true)
}
