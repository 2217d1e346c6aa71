//! Distances between interval sets, polybarcodes and symmetry barcodes.
//!
//! Infinite values use `f64::INFINITY`: `x + inf = inf`, `max(x, inf) = inf`,
//! and `|inf - inf| = 0` for endpoints that are unbounded on the same side.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum IntervalError {
    Unordered { index: usize },
    Overlapping { index: usize },
    Nan,
}

impl fmt::Display for IntervalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalError::Unordered { index } => write!(f, "component {index} has a > b"),
            IntervalError::Overlapping { index } => {
                write!(f, "component {index} is not strictly after its predecessor")
            }
            IntervalError::Nan => write!(f, "interval endpoint is NaN"),
        }
    }
}

impl core::error::Error for IntervalError {}

/// Sorted disjoint closed intervals; the ends may be infinite.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    components: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn new(components: Vec<(f64, f64)>) -> Result<Self, IntervalError> {
        for (i, &(a, b)) in components.iter().enumerate() {
            if a.is_nan() || b.is_nan() {
                return Err(IntervalError::Nan);
            }
            if a > b {
                return Err(IntervalError::Unordered { index: i });
            }
            if i > 0 && components[i - 1].1 >= a {
                return Err(IntervalError::Overlapping { index: i });
            }
        }
        Ok(IntervalSet { components })
    }

    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn single(a: f64, b: f64) -> Result<Self, IntervalError> {
        Self::new(vec![(a, b)])
    }

    /// Maximal runs of consecutive indices mapped through `grid` to closed intervals.
    pub fn from_indices(indices: &[usize], grid: &[f64]) -> Self {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for &i in indices {
            match runs.last_mut() {
                Some(r) if r.1 + 1 == i => r.1 = i,
                _ => runs.push((i, i)),
            }
        }
        IntervalSet { components: runs.into_iter().map(|(a, b)| (grid[a], grid[b])).collect() }
    }

    pub fn components(&self) -> &[(f64, f64)] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.components.iter().any(|&(a, b)| a <= t && t <= b)
    }

    /// Replaces a right end equal to `last` by `+inf`.
    pub fn extended_right(&self, last: f64) -> Self {
        let mut c = self.components.clone();
        if let Some(x) = c.last_mut() {
            if x.1 == last {
                x.1 = f64::INFINITY;
            }
        }
        IntervalSet { components: c }
    }

    pub fn measure(&self) -> f64 {
        self.components.iter().map(|&(a, b)| b - a).sum()
    }
}

fn gap(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        libm::fabs(x - y)
    }
}

/// Lebesgue measure of the symmetric difference.
pub fn d_sym_diff(a: &IntervalSet, b: &IntervalSet) -> f64 {
    let mut cuts: Vec<f64> = a
        .components
        .iter()
        .chain(&b.components)
        .flat_map(|&(x, y)| [x, y])
        .filter(|v| v.is_finite())
        .collect();
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup();
    let differs = |t: f64| a.contains(t) != b.contains(t);
    if cuts.is_empty() {
        // only unbounded components or nothing at all
        return if differs(0.0) { f64::INFINITY } else { 0.0 };
    }
    if differs(cuts[0] - 1.0) || differs(cuts[cuts.len() - 1] + 1.0) {
        return f64::INFINITY;
    }
    cuts.windows(2)
        .filter(|w| differs(0.5 * (w[0] + w[1])))
        .map(|w| w[1] - w[0])
        .sum()
}

/// True when some matched pair differs in boundedness on either side.
fn mixed_boundedness(a: &IntervalSet, b: &IntervalSet) -> bool {
    a.components.iter().zip(&b.components).any(|(x, y)| {
        x.0.is_finite() != y.0.is_finite() || x.1.is_finite() != y.1.is_finite()
    })
}

/// Expansion distance: infinite on component-count mismatch.
pub fn d_expansion(a: &IntervalSet, b: &IntervalSet) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.components
        .iter()
        .zip(&b.components)
        .map(|(x, y)| gap(x.0, y.0).max(gap(x.1, y.1)))
        .fold(0.0, f64::max)
}

/// Left-expansion distance; infinite on count mismatch or mixed boundedness.
pub fn d_left(a: &IntervalSet, b: &IntervalSet) -> f64 {
    if a.len() != b.len() || mixed_boundedness(a, b) {
        return f64::INFINITY;
    }
    a.components.iter().zip(&b.components).map(|(x, y)| gap(x.0, y.0)).fold(0.0, f64::max)
}

/// Mean per-component symmetric difference; infinite on count mismatch.
pub fn d_match_sym(a: &IntervalSet, b: &IntervalSet) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    if a.is_empty() {
        return 0.0;
    }
    let total: f64 = a
        .components
        .iter()
        .zip(&b.components)
        .map(|(x, y)| d_sym_diff(&IntervalSet { components: vec![*x] }, &IntervalSet { components: vec![*y] }))
        .sum();
    total / a.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyMetric {
    SymDiff,
    Expansion,
    Left,
    Interleaving,
}

/// Distance between two keyed families of interval sets.
///
/// `pairs` lists each key once with its set on both sides (missing keys are empty).
/// The interleaving distance is evaluated through the left-expansion distance.
pub fn keyed_distance(pairs: &[(IntervalSet, IntervalSet)], metric: PolyMetric) -> f64 {
    match metric {
        PolyMetric::SymDiff => pairs.iter().map(|(a, b)| d_sym_diff(a, b)).sum(),
        PolyMetric::Expansion => pairs.iter().map(|(a, b)| d_expansion(a, b)).fold(0.0, f64::max),
        PolyMetric::Left | PolyMetric::Interleaving => {
            pairs.iter().map(|(a, b)| d_left(a, b)).fold(0.0, f64::max)
        }
    }
}

/// Bottleneck distance between persistence diagrams given as `(birth, death)`.
///
/// Infinite bars match only infinite bars; a different number of them gives infinity.
pub fn bottleneck(x: &[(f64, f64)], y: &[(f64, f64)]) -> f64 {
    let (xi, xf): (Vec<(f64, f64)>, Vec<(f64, f64)>) = x.iter().partition(|b| b.1.is_infinite());
    let (yi, yf): (Vec<(f64, f64)>, Vec<(f64, f64)>) = y.iter().partition(|b| b.1.is_infinite());
    if xi.len() != yi.len() {
        return f64::INFINITY;
    }
    let mut bx: Vec<f64> = xi.iter().map(|b| b.0).collect();
    let mut by: Vec<f64> = yi.iter().map(|b| b.0).collect();
    bx.sort_by(|a, b| a.total_cmp(b));
    by.sort_by(|a, b| a.total_cmp(b));
    let inf_part = bx.iter().zip(&by).map(|(a, b)| gap(*a, *b)).fold(0.0, f64::max);
    inf_part.max(finite_bottleneck(&xf, &yf))
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    libm::fabs(a.0 - b.0).max(libm::fabs(a.1 - b.1))
}

fn half(a: (f64, f64)) -> f64 {
    0.5 * (a.1 - a.0)
}

fn finite_bottleneck(x: &[(f64, f64)], y: &[(f64, f64)]) -> f64 {
    let mut radii: Vec<f64> = vec![0.0];
    radii.extend(x.iter().map(|&a| half(a)));
    radii.extend(y.iter().map(|&b| half(b)));
    for &a in x {
        for &b in y {
            radii.push(linf(a, b));
        }
    }
    radii.sort_by(|a, b| a.total_cmp(b));
    radii.dedup();
    let (mut lo, mut hi) = (0usize, radii.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(x, y, radii[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    radii[lo]
}

/// Perfect matching on `x ∪ diag(y)` against `y ∪ diag(x)` using edges of length `<= r`.
fn feasible(x: &[(f64, f64)], y: &[(f64, f64)], r: f64) -> bool {
    let (n, m) = (x.len(), y.len());
    let size = n + m;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for i in 0..n {
        for j in 0..m {
            if linf(x[i], y[j]) <= r {
                adj[i].push(j);
            }
        }
        if half(x[i]) <= r {
            adj[i].push(m + i);
        }
    }
    for j in 0..m {
        let left = n + j;
        if half(y[j]) <= r {
            adj[left].push(j);
        }
        for i in 0..n {
            adj[left].push(m + i);
        }
    }
    let mut owner: Vec<Option<usize>> = vec![None; size];
    for u in 0..size {
        let mut seen = vec![false; size];
        if !augment(u, &adj, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(u: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        let free = match owner[v] {
            None => true,
            Some(w) => augment(w, adj, owner, seen),
        };
        if free {
            owner[v] = Some(u);
            return true;
        }
    }
    false
}
