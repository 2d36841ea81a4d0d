//! Adaptive iterative depth for `p >= 3`.
//!
//! Instead of visiting every `(p - 2)`-point span, the search starts from a
//! cheap guess and repeatedly replaces one member of a `(p - 1)`-point
//! combination by a witness of the remaining span. Each such move can only
//! lower the span depth, so the walk descends toward the outer layers of the
//! data. Combinations whose stored depth exceeds the best value found so far
//! are dropped from the frontier. Once the frontier is empty, the points on
//! or beyond the surviving hyperplanes are swept exhaustively.
//!
//! All depths inside the search are span numerators over the stored rows
//! (the `p - 2` members included); the query depth is that minus `p - 2`.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use rayon::prelude::*;

use crate::combination::{next_combination, Combination};
use crate::error::{DepthError, Result};
use crate::geometry::{dot, norm, PointCloud, Sign, SpanBasis, Tolerance};
use crate::oracle::CriticalDirection;
use crate::result::{DepthOptions, DepthResult};
use crate::subspace::{check_high_dim, general_position, SpanEvaluator};

/// Counters and traces collected during one run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdiaStats {
    /// Initial (p - 2)-point span picked by the scan over data directions.
    pub seed_span: Vec<usize>,
    /// Incumbent values in order; starts with the seed span depth.
    pub incumbent_trace: Vec<usize>,
    /// Combinations popped and expanded (resumed pops not counted twice).
    pub expansions: usize,
    /// Span depths computed (cache misses).
    pub span_evaluations: usize,
    /// Distinct (p - 1)-combinations ever stored.
    pub visited: usize,
    /// Stored combinations dropped by pruning.
    pub pruned: usize,
    /// Points in the final envelope sweep, and spans it evaluated.
    pub envelope_points: usize,
    pub envelope_spans: usize,
    /// Direction cells examined by the certification pass, and leaves whose
    /// spans it evaluated.
    pub certify_cells: usize,
    pub certify_leaves: usize,
    /// Parent/child depth comparisons made during expansion, and how many
    /// found a child deeper than its parent.
    pub descent_checks: usize,
    pub descent_violations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VisitedEntry {
    /// Depth numerator of the (p - 2)-point span this combination grew from.
    pub value: usize,
    /// Cleared when pruned; inactive entries stay for deduplication only.
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierEntry {
    pub combo: Combination,
    /// Next sub-combination position to expand.
    pub resume: usize,
}

/// Visited map, LIFO frontier and incumbent of the search.
#[derive(Debug, Clone)]
pub struct FrontierRegistry {
    visited: HashMap<Combination, VisitedEntry>,
    frontier: Vec<FrontierEntry>,
    incumbent: usize,
}

impl FrontierRegistry {
    pub fn new(initial_bound: usize) -> Self {
        Self {
            visited: HashMap::new(),
            frontier: Vec::new(),
            incumbent: initial_bound,
        }
    }

    pub fn incumbent(&self) -> usize {
        self.incumbent
    }

    /// Lowers the incumbent; returns whether it changed.
    pub fn lower_incumbent(&mut self, value: usize) -> bool {
        if value < self.incumbent {
            self.incumbent = value;
            true
        } else {
            false
        }
    }

    /// Stores `combo` unless already known. Returns whether it was new.
    pub fn insert(&mut self, combo: Combination, value: usize) -> bool {
        use std::collections::hash_map::Entry;
        match self.visited.entry(combo) {
            Entry::Occupied(_) => false,
            Entry::Vacant(v) => {
                v.insert(VisitedEntry { value, active: true });
                true
            }
        }
    }

    pub fn push(&mut self, combo: Combination, resume: usize) {
        debug_assert!(self.visited.contains_key(&combo));
        self.frontier.push(FrontierEntry { combo, resume });
    }

    pub fn pop(&mut self) -> Option<FrontierEntry> {
        self.frontier.pop()
    }

    pub fn get(&self, combo: &Combination) -> Option<VisitedEntry> {
        self.visited.get(combo).copied()
    }

    pub fn frontier(&self) -> &[FrontierEntry] {
        &self.frontier
    }

    pub fn visited_len(&self) -> usize {
        self.visited.len()
    }

    /// Drops every combination whose stored value exceeds the incumbent:
    /// removed from the frontier and marked inactive. Returns how many
    /// entries were newly deactivated.
    pub fn prune(&mut self) -> usize {
        let bound = self.incumbent;
        let visited = &self.visited;
        self.frontier.retain(|e| visited[&e.combo].value <= bound);
        let mut dropped = 0;
        for entry in self.visited.values_mut() {
            if entry.active && entry.value > bound {
                entry.active = false;
                dropped += 1;
            }
        }
        dropped
    }

    /// Active combinations in sorted order.
    pub fn active(&self) -> Vec<Combination> {
        let mut out: Vec<Combination> = self
            .visited
            .iter()
            .filter(|(_, e)| e.active)
            .map(|(c, _)| c.clone())
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Continue,
    /// The incumbent reached `p - 2`: no span can do better.
    Bottom,
}

type Cached = Rc<(usize, Vec<usize>)>;

/// State of one adaptive search over a cloud.
pub struct AdiaSearch<'a> {
    cloud: &'a PointCloud,
    opts: DepthOptions,
    eval: SpanEvaluator<'a>,
    cache: HashMap<Vec<usize>, Cached>,
    pool: Option<rayon::ThreadPool>,
    best_span: Vec<usize>,
    pub registry: FrontierRegistry,
    pub stats: AdiaStats,
}

impl<'a> AdiaSearch<'a> {
    pub fn new(cloud: &'a PointCloud, opts: &DepthOptions) -> Result<Self> {
        check_high_dim(cloud)?;
        let pool = if opts.threads > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(opts.threads)
                    .build()
                    .map_err(|e| DepthError::InvalidInput(format!("cannot start worker threads: {e}")))?,
            )
        } else {
            None
        };
        Ok(Self {
            cloud,
            opts: opts.clone(),
            eval: SpanEvaluator::new(cloud, opts.tol),
            cache: HashMap::new(),
            pool,
            best_span: Vec::new(),
            registry: FrontierRegistry::new(cloud.len()),
            stats: AdiaStats::default(),
        })
    }

    #[inline]
    fn arity(&self) -> usize {
        self.cloud.dim() - 2
    }

    /// Span numerator and witnesses of `span`, memoized.
    fn span(&mut self, span: &[usize]) -> Result<Cached> {
        if let Some(hit) = self.cache.get(span) {
            return Ok(hit.clone());
        }
        let d = self.eval.eval(span, true)?;
        self.stats.span_evaluations += 1;
        let entry = Rc::new((d.numerator, d.witnesses));
        self.cache.insert(span.to_vec(), entry.clone());
        Ok(entry)
    }

    /// Evaluates the uncached spans among `spans` on the worker pool.
    fn prefetch(&mut self, spans: &[Combination]) -> Result<()> {
        let Some(pool) = &self.pool else {
            return Ok(());
        };
        let missing: Vec<&Combination> = spans.iter().filter(|s| !self.cache.contains_key(s.indices())).collect();
        if missing.len() < 2 {
            return Ok(());
        }
        let (cloud, tol) = (self.cloud, self.opts.tol);
        let computed: Vec<Result<(usize, Vec<usize>)>> = pool.install(|| {
            missing
                .par_iter()
                .map(|s| {
                    let d = SpanEvaluator::new(cloud, tol).eval(s.indices(), true)?;
                    Ok((d.numerator, d.witnesses))
                })
                .collect()
        });
        for (s, d) in missing.into_iter().zip(computed) {
            self.stats.span_evaluations += 1;
            self.cache.insert(s.indices().to_vec(), Rc::new(d?));
        }
        Ok(())
    }

    fn record(&mut self, value: usize, span: &[usize]) -> bool {
        if self.registry.lower_incumbent(value) {
            self.best_span = span.to_vec();
            self.stats.incumbent_trace.push(value);
            true
        } else {
            false
        }
    }

    /// Picks the seed: the data direction whose closed halfspace holds the
    /// fewest points, the `p - 2` points just beyond its boundary, and a
    /// witness completing them to a `(p - 1)`-combination. Returns the seed
    /// span depth and the seed combination.
    pub fn initial_scan(&mut self) -> Result<(usize, Combination)> {
        let cloud = self.cloud;
        let tol = self.opts.tol;
        let m = cloud.len();

        let mut best = (usize::MAX, 0, 1.0);
        for j in 0..m {
            let xj = cloud.dir(j);
            let (mut neg, mut pos) = (0, 0);
            for i in 0..m {
                match tol.sign(dot(xj, cloud.dir(i)), 1.0) {
                    Sign::Negative => neg += 1,
                    Sign::Positive => pos += 1,
                    Sign::Zero => {
                        neg += 1;
                        pos += 1;
                    }
                }
            }
            // u = x_j counts the non-positive side, u = -x_j the non-negative one
            if neg < best.0 {
                best = (neg, j, 1.0);
            }
            if pos < best.0 {
                best = (pos, j, -1.0);
            }
        }
        let (_, j, s) = best;
        let u: Vec<f64> = cloud.dir(j).iter().map(|v| s * v).collect();
        let mut proj: Vec<(f64, usize)> = (0..m).map(|i| (dot(&u, cloud.row(i)), i)).collect();
        proj.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let arity = self.arity();
        let nonneg: Vec<usize> = proj
            .iter()
            .filter(|(v, i)| tol.sign(*v, norm(cloud.row(*i))) != Sign::Negative)
            .map(|&(_, i)| i)
            .collect();
        let mut span: Vec<usize> = if nonneg.len() >= arity {
            nonneg[..arity].to_vec()
        } else {
            proj.sort_unstable_by(|a, b| a.0.abs().total_cmp(&b.0.abs()).then(a.1.cmp(&b.1)));
            proj[..arity].iter().map(|&(_, i)| i).collect()
        };
        span.sort_unstable();

        let d = self.span(&span)?;
        let witness = *d.1.first().ok_or_else(|| {
            DepthError::Degenerate("seed span leaves no observation outside it".into())
        })?;
        self.stats.seed_span = span.clone();
        Ok((d.0, Combination::from_sorted(span).with(witness)))
    }

    /// Expands one popped combination: evaluates each of its `(p - 2)`-point
    /// sub-spans, stores the witness-completed children and lowers the
    /// incumbent. On improvement the rest of the combination is re-queued
    /// and pruning runs before anything else is expanded.
    fn expand(&mut self, entry: FrontierEntry) -> Result<Step> {
        let FrontierEntry { combo, resume } = entry;
        let parent_value = match self.registry.get(&combo) {
            Some(e) if e.active => e.value,
            _ => return Ok(Step::Continue),
        };
        if resume == 0 {
            self.stats.expansions += 1;
        }
        let subs: Vec<Combination> = (resume..combo.arity()).map(|pos| combo.without(pos)).collect();
        self.prefetch(&subs)?;

        let mut children: Vec<(usize, Combination)> = Vec::new();
        for (offset, sub) in subs.iter().enumerate() {
            let d = self.span(sub.indices())?;
            let value = d.0;
            self.stats.descent_checks += 1;
            if value > parent_value {
                self.stats.descent_violations += 1;
                debug_assert!(
                    false,
                    "span {sub} has depth {value} above its parent {combo} ({parent_value})"
                );
            }
            for &w in &d.1 {
                let child = sub.with(w);
                if self.registry.insert(child.clone(), value) {
                    self.stats.visited += 1;
                    children.push((value, child));
                }
            }
            if self.record(value, sub.indices()) {
                let next = resume + offset + 1;
                if next < combo.arity() {
                    self.registry.push(combo.clone(), next);
                }
                self.push_children(children);
                self.stats.pruned += self.registry.prune();
                if value == self.arity() {
                    return Ok(Step::Bottom);
                }
                return Ok(Step::Continue);
            }
        }
        self.push_children(children);
        Ok(Step::Continue)
    }

    fn push_children(&mut self, mut children: Vec<(usize, Combination)>) {
        // lowest value ends up on top of the stack
        children.sort_unstable_by(|a, b| b.cmp(a));
        for (_, c) in children {
            self.registry.push(c, 0);
        }
    }

    /// Exhaustive pass over the points lying on, or on the smaller side of,
    /// the hyperplanes of the surviving combinations.
    fn final_sweep(&mut self) -> Result<()> {
        let cloud = self.cloud;
        let tol = self.opts.tol;
        let mut envelope = BTreeSet::new();
        for combo in self.registry.active() {
            let cd = CriticalDirection::new(cloud, combo.indices(), tol)?;
            envelope.extend(combo.indices().iter().copied());
            for i in 0..cloud.len() {
                let side = tol.sign(dot(&cd.u, cloud.dir(i)), 1.0);
                if (side == Sign::Negative && cd.below <= cd.above) || (side == Sign::Positive && cd.above <= cd.below) {
                    envelope.insert(i);
                }
            }
        }
        let points: Vec<usize> = envelope.into_iter().collect();
        self.stats.envelope_points = points.len();
        let arity = self.arity();
        if points.len() < arity {
            return Ok(());
        }
        let mut pick: Vec<usize> = (0..arity).collect();
        let mut span = vec![0; arity];
        loop {
            if self.stats.envelope_spans.is_multiple_of(64) {
                self.opts.check_deadline()?;
            }
            for (s, &k) in span.iter_mut().zip(&pick) {
                *s = points[k];
            }
            self.stats.envelope_spans += 1;
            let value = match self.cache.get(span.as_slice()) {
                Some(hit) => hit.0,
                None => {
                    self.stats.span_evaluations += 1;
                    self.eval.eval(&span, false)?.numerator
                }
            };
            if self.record(value, &span.clone()) && value == arity {
                return Ok(());
            }
            if !next_combination(&mut pick, points.len()) {
                return Ok(());
            }
        }
    }

    /// Proves that no hyperplane beats the incumbent, or finds one that does.
    ///
    /// Directions are covered by the faces of the cube `[-1, 1]^p`, each
    /// split recursively into boxes. Over a box `v . x` is linear in `v`, so
    /// every point is either on the nonpositive side for the whole box, on
    /// the positive side, or undecided. The first kind bound the closed count
    /// of every direction in the box from below; boxes whose bound reaches
    /// the incumbent are dropped. A hyperplane with fewer points strictly on
    /// one side has its members undecided in the box holding its normal, so
    /// once few points are undecided their spans are evaluated directly.
    fn certify(&mut self) -> Result<()> {
        let cloud = self.cloud;
        let p = cloud.dim();
        let arity = self.arity();
        let leaf = 2 * (p - 1);
        let mut stack: Vec<Cell> = Vec::new();
        for axis in 0..p {
            for sign in [1.0, -1.0] {
                let root = Cell {
                    axis,
                    sign,
                    lo: vec![-1.0; p - 1],
                    hi: vec![1.0; p - 1],
                    level: 0,
                    below: 0,
                    open: (0..cloud.len()).collect(),
                };
                stack.push(root.refine(cloud));
            }
        }
        let mut combo = vec![0; arity];
        while let Some(cell) = stack.pop() {
            if self.stats.certify_cells.is_multiple_of(64) {
                self.opts.check_deadline()?;
            }
            self.stats.certify_cells += 1;
            if cell.below + arity >= self.registry.incumbent() {
                continue;
            }
            if cell.open.len() <= leaf || cell.level >= CERTIFY_MAX_LEVEL {
                self.stats.certify_leaves += 1;
                if cell.open.len() < arity {
                    continue;
                }
                let mut pick: Vec<usize> = (0..arity).collect();
                loop {
                    for (c, &k) in combo.iter_mut().zip(&pick) {
                        *c = cell.open[k];
                    }
                    let value = match self.cache.get(combo.as_slice()) {
                        Some(hit) => hit.0,
                        None => self.span(&combo.clone())?.0,
                    };
                    if self.record(value, &combo.clone()) && value == arity {
                        return Ok(());
                    }
                    if !next_combination(&mut pick, cell.open.len()) {
                        break;
                    }
                }
                continue;
            }
            let mut children = cell.split(cloud);
            // lowest bound on top
            children.sort_by_key(|c| std::cmp::Reverse(c.below));
            stack.extend(children);
        }
        Ok(())
    }

    /// Runs the whole search.
    pub fn run(mut self) -> Result<(DepthResult, AdiaStats)> {
        preflight(self.cloud, self.opts.tol)?;
        let (seed_value, seed) = self.initial_scan()?;
        let seed_span = self.stats.seed_span.clone();
        self.record(seed_value, &seed_span);
        let mut step = if seed_value == self.arity() {
            Step::Bottom
        } else {
            Step::Continue
        };
        if step == Step::Continue {
            self.registry.insert(seed.clone(), seed_value);
            self.stats.visited += 1;
            self.registry.push(seed, 0);
            while let Some(entry) = self.registry.pop() {
                self.opts.check_deadline()?;
                step = self.expand(entry)?;
                if step == Step::Bottom {
                    break;
                }
            }
        }
        if step == Step::Continue {
            self.final_sweep()?;
        }
        if self.registry.incumbent() > self.arity() {
            self.certify()?;
        }

        let arity = self.arity();
        let best = self.registry.incumbent();
        let span = self.best_span.clone();
        let witness_direction = self.eval.witness_direction(&span)?;
        let result = DepthResult {
            numerator: best - arity + self.cloud.zero_count(),
            n: self.cloud.total(),
            witness_combination: self.cloud.source_indices(&span),
            witness_direction,
        };
        Ok((result, self.stats))
    }
}

/// Subdivision depth after which a box is treated as a leaf regardless of
/// how many points remain undecided.
const CERTIFY_MAX_LEVEL: usize = 40;

/// Box on one face of the cube `[-1, 1]^p`: coordinate `axis` fixed at
/// `sign`, the others ranging over `[lo, hi]`.
struct Cell {
    axis: usize,
    sign: f64,
    lo: Vec<f64>,
    hi: Vec<f64>,
    level: usize,
    /// Rows with `v . x <= 0` for every `v` in the box.
    below: usize,
    /// Rows whose sign changes over the box.
    open: Vec<usize>,
}

impl Cell {
    /// Classifies the undecided rows of the parent against this box.
    fn refine(mut self, cloud: &PointCloud) -> Self {
        let margin = 1e-12;
        let mut open = Vec::with_capacity(self.open.len());
        for &i in &self.open {
            let x = cloud.dir(i);
            let mut mid = self.sign * x[self.axis];
            let mut spread = 0.0;
            let others = (0..x.len()).filter(|&k| k != self.axis);
            for ((k, lo), hi) in others.zip(&self.lo).zip(&self.hi) {
                mid += 0.5 * (lo + hi) * x[k];
                spread += 0.5 * (hi - lo) * x[k].abs();
            }
            if mid + spread < -margin {
                self.below += 1;
            } else if mid - spread <= margin {
                open.push(i);
            }
        }
        self.open = open;
        self
    }

    fn split(&self, cloud: &PointCloud) -> Vec<Cell> {
        let d = self.lo.len();
        (0..1usize << d)
            .map(|mask| {
                let mut lo = self.lo.clone();
                let mut hi = self.hi.clone();
                for k in 0..d {
                    let mid = 0.5 * (self.lo[k] + self.hi[k]);
                    if mask >> k & 1 == 0 {
                        hi[k] = mid;
                    } else {
                        lo[k] = mid;
                    }
                }
                Cell {
                    axis: self.axis,
                    sign: self.sign,
                    lo,
                    hi,
                    level: self.level + 1,
                    below: self.below,
                    open: self.open.clone(),
                }
                .refine(cloud)
            })
            .collect()
    }
}

/// Cheap whole-cloud checks for degeneracies the search might never touch:
/// all rows inside one hyperplane, and two rows on a common line through the
/// query point.
fn preflight(cloud: &PointCloud, tol: Tolerance) -> Result<()> {
    let p = cloud.dim();
    let mut independent: Vec<usize> = Vec::with_capacity(p);
    for i in 0..cloud.len() {
        let mut trial = independent.clone();
        trial.push(i);
        if SpanBasis::new(trial.iter().map(|&k| cloud.dir(k)), tol).is_ok() {
            independent = trial;
            if independent.len() == p {
                break;
            }
        }
    }
    if independent.len() < p {
        return Err(general_position(
            cloud,
            (0..cloud.len().min(p)).collect(),
            "all observations lie on a common hyperplane through the query point",
        ));
    }

    // canonical sign: first clearly nonzero coordinate positive
    let mut keys: Vec<(Vec<f64>, usize)> = (0..cloud.len())
        .map(|i| {
            let d = cloud.dir(i);
            let lead = d.iter().copied().find(|v| v.abs() > 0.5 / (p as f64).sqrt()).unwrap_or(1.0);
            let s = lead.signum();
            (d.iter().map(|v| s * v).collect(), i)
        })
        .collect();
    keys.sort_unstable_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for w in keys.windows(2) {
        let gap: f64 = w[0].0.iter().zip(&w[1].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if gap <= tol.eps().max(64.0 * f64::EPSILON) {
            return Err(general_position(
                cloud,
                vec![w[0].1, w[1].1],
                "observations lie on a common line through the query point",
            ));
        }
    }
    Ok(())
}

pub fn depth_adia(cloud: &PointCloud, tol: Tolerance) -> Result<DepthResult> {
    depth_adia_with(cloud, &DepthOptions::with_tol(tol))
}

pub fn depth_adia_with(cloud: &PointCloud, opts: &DepthOptions) -> Result<DepthResult> {
    Ok(AdiaSearch::new(cloud, opts)?.run()?.0)
}

/// Like [`depth_adia_with`], also returning the search statistics.
pub fn depth_adia_traced(cloud: &PointCloud, opts: &DepthOptions) -> Result<(DepthResult, AdiaStats)> {
    AdiaSearch::new(cloud, opts)?.run()
}

/// Step-2 scan on its own: seed span depth and seed combination.
pub fn initial_scan(cloud: &PointCloud, tol: Tolerance) -> Result<(usize, Combination)> {
    AdiaSearch::new(cloud, &DepthOptions::with_tol(tol))?.initial_scan()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcom::depth_rcom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    const SIMPLEX: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];

    fn cloud(seed: u64, n: usize, p: usize, alpha: f64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        PointCloud::center_at(&rows, &vec![alpha; p], Tolerance::default()).unwrap()
    }

    fn combo(v: &[usize]) -> Combination {
        Combination::new(v.to_vec(), 100).unwrap()
    }

    #[test]
    fn simplex() {
        let c = PointCloud::from_centered(&SIMPLEX, Tolerance::default()).unwrap();
        let r = depth_adia(&c, Tolerance::default()).unwrap();
        assert_eq!((r.numerator, r.n), (1, 4));
        let (d0, seed) = initial_scan(&c, Tolerance::default()).unwrap();
        assert!(d0 > r.numerator);
        assert_eq!(seed.arity(), 2);
    }

    #[test]
    fn too_few_points() {
        let c = PointCloud::from_centered(&SIMPLEX[..3], Tolerance::default()).unwrap();
        assert!(matches!(depth_adia(&c, Tolerance::default()), Err(DepthError::Degenerate(_))));
    }

    #[test]
    fn matches_exhaustive_search() {
        for seed in 0..60 {
            let p = 3 + (seed as usize % 2);
            let alpha = [0.0, 0.4, 0.8, 1.2][seed as usize % 4];
            let c = cloud(seed, 12 + seed as usize % 25, p, alpha);
            let (adia, stats) = depth_adia_traced(&c, &DepthOptions::default()).unwrap();
            let exhaustive = depth_rcom(&c, Tolerance::default()).unwrap();
            assert_eq!(adia.numerator, exhaustive.numerator, "seed {seed}");
            assert_eq!(c.count_closed(&adia.witness_direction, Tolerance::default()), adia.numerator);
            assert_eq!(stats.descent_violations, 0);
            assert!(stats.incumbent_trace.windows(2).all(|w| w[1] < w[0]));
            assert_eq!(*stats.incumbent_trace.last().unwrap(), adia.numerator + p - 2);
            assert!(stats.incumbent_trace[0] >= adia.numerator + p - 2);
        }
    }

    #[test]
    fn seed_bounds_the_final_depth() {
        let c = cloud(77, 20, 3, 0.0);
        let (d0, _) = initial_scan(&c, Tolerance::default()).unwrap();
        let r = depth_adia(&c, Tolerance::default()).unwrap();
        assert!(d0 > r.numerator);
    }

    #[test]
    fn outside_the_hull_stops_early() {
        let c = cloud(5, 60, 3, 8.0);
        let (r, stats) = depth_adia_traced(&c, &DepthOptions::default()).unwrap();
        assert_eq!(r.numerator, 0);
        assert_eq!(stats.envelope_spans, 0);
    }

    #[test]
    fn prune_removes_exactly_the_entries_above_the_bound() {
        let mut reg = FrontierRegistry::new(10);
        for (c, v) in [(&[0, 1][..], 4), (&[0, 2], 6), (&[1, 2], 5), (&[2, 3], 7)] {
            assert!(reg.insert(combo(c), v));
            reg.push(combo(c), 0);
        }
        assert!(!reg.insert(combo(&[0, 1]), 1));
        assert_eq!(reg.prune(), 0);
        assert_eq!(reg.frontier().len(), 4);

        assert!(reg.lower_incumbent(5));
        assert!(!reg.lower_incumbent(6));
        assert_eq!(reg.prune(), 2);
        let left: Vec<_> = reg.frontier().iter().map(|e| e.combo.clone()).collect();
        assert_eq!(left, vec![combo(&[0, 1]), combo(&[1, 2])]);
        assert!(!reg.get(&combo(&[0, 2])).unwrap().active);
        assert_eq!(reg.active(), vec![combo(&[0, 1]), combo(&[1, 2])]);
        assert_eq!(reg.visited_len(), 4);

        reg.lower_incumbent(0);
        reg.prune();
        assert!(reg.frontier().is_empty());
        assert!(reg.pop().is_none());
    }

    #[test]
    fn expanding_a_fully_visited_combination_adds_nothing() {
        let c = cloud(8, 14, 3, 0.2);
        let mut search = AdiaSearch::new(&c, &DepthOptions::default()).unwrap();
        let (value, seed) = search.initial_scan().unwrap();
        search.registry.insert(seed.clone(), value);
        // no improvement possible, so the whole combination is expanded at once
        search.registry.lower_incumbent(0);
        search.expand(FrontierEntry { combo: seed.clone(), resume: 0 }).unwrap();
        let visited = search.registry.visited_len();
        while search.registry.pop().is_some() {}
        search.expand(FrontierEntry { combo: seed, resume: 0 }).unwrap();
        assert_eq!(search.registry.visited_len(), visited);
        assert!(search.registry.frontier().is_empty());
    }

    #[test]
    fn threaded_matches_serial() {
        let c = cloud(21, 30, 4, 0.4);
        let serial = depth_adia(&c, Tolerance::default()).unwrap();
        let opts = DepthOptions {
            threads: 3,
            ..DepthOptions::default()
        };
        assert_eq!(depth_adia_with(&c, &opts).unwrap(), serial);
    }

    #[test]
    fn flat_cloud_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rows: Vec<Vec<f64>> = (0..15)
            .map(|_| vec![rng.sample(StandardNormal), rng.sample(StandardNormal), 0.0])
            .collect();
        let c = PointCloud::from_centered(&rows, Tolerance::default()).unwrap();
        assert!(matches!(depth_adia(&c, Tolerance::default()), Err(DepthError::GeneralPosition { .. })));
    }

    #[test]
    fn collinear_pair_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut rows: Vec<Vec<f64>> = (0..15)
            .map(|_| (0..3).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        rows.push(rows[3].iter().map(|v| -2.5 * v).collect());
        let c = PointCloud::from_centered(&rows, Tolerance::default()).unwrap();
        match depth_adia(&c, Tolerance::default()) {
            Err(DepthError::GeneralPosition { indices, .. }) => assert_eq!(indices, vec![3, 15]),
            other => panic!("expected general-position error, got {other:?}"),
        }
    }
}
