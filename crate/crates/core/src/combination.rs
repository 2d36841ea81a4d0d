//! k-subsets of `{0..n}` in lexicographic order.

use std::fmt;

/// Strictly increasing tuple of distinct point indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Combination(Vec<usize>);

impl Combination {
    /// Sorts and checks `indices`; `None` if any index repeats or is `>= n`.
    pub fn new(mut indices: Vec<usize>, n: usize) -> Option<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) || indices.last().is_some_and(|&i| i >= n) {
            return None;
        }
        Some(Self(indices))
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self(indices)
    }

    /// `self` with `extra` inserted; `extra` must not be a member.
    pub(crate) fn with(&self, extra: usize) -> Self {
        let pos = self.0.partition_point(|&i| i < extra);
        debug_assert!(self.0.get(pos) != Some(&extra));
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0[..pos]);
        v.push(extra);
        v.extend_from_slice(&self.0[pos..]);
        Self(v)
    }

    /// `self` with the element at `position` removed.
    pub(crate) fn without(&self, position: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(position);
        Self(v)
    }

    #[inline]
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Advances `c` to its lexicographic successor among k-subsets of `{0..n}`.
/// Returns `false` (leaving `c` untouched) when `c` is the last subset.
pub fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The k-subset of `{0..n}` at lexicographic position `rank`.
pub fn unrank(mut rank: u128, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot - 1;
        loop {
            let block = binomial(n - next - 1, remaining);
            if rank < block {
                break;
            }
            rank -= block;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Iterator over every k-subset of `{0..n}` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    current: Vec<usize>,
    n: usize,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            current: (0..k).collect(),
            n,
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Combination;

    fn next(&mut self) -> Option<Combination> {
        if self.done {
            return None;
        }
        let out = Combination(self.current.clone());
        self.done = !next_combination(&mut self.current, self.n);
        Some(out)
    }
}
