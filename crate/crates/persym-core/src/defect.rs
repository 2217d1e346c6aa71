//! Symmetry defect and measure, candidate sampling, approximate groups and probe persistence.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use nalgebra::DMatrix;

use crate::assignment;
use crate::geometry::{
    apply, centroid, dist, dot, householder, power_costs, rodrigues, wasserstein,
    Configuration, Descriptor, GeometryError, Isometry, Matching,
};

#[derive(Debug, Clone, PartialEq)]
pub enum DefectError {
    Geometry(GeometryError),
    TooFewPoints,
    ZeroNorm,
    InvalidSampling,
    TooFewCandidates,
}

impl fmt::Display for DefectError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefectError::Geometry(e) => write!(f, "{e}"),
            DefectError::TooFewPoints => write!(f, "at least two points are needed"),
            DefectError::ZeroNorm => write!(f, "configuration has zero norm"),
            DefectError::InvalidSampling => write!(f, "invalid candidate sampling parameters"),
            DefectError::TooFewCandidates => write!(f, "at least two candidates are needed"),
        }
    }
}

impl core::error::Error for DefectError {}

impl From<GeometryError> for DefectError {
    fn from(e: GeometryError) -> Self {
        DefectError::Geometry(e)
    }
}

fn images(x: &Configuration, pi: &Isometry) -> Result<Vec<Vec<f64>>, DefectError> {
    Ok(apply(pi, x)?.points().to_vec())
}

/// `W_p(X, pi(X))`.
pub fn standard_defect(x: &Configuration, pi: &Isometry, p: f64) -> Result<f64, DefectError> {
    let y = apply(pi, x)?;
    Ok(wasserstein(x, &y, p)?.0)
}

/// Minimum p-cost over bijections `X -> pi(X)` other than `x -> pi(x)`.
///
/// The matching sends `pi(x_i)` to `x_{permutation[i]}`; the canonical one is the identity.
pub fn defect(x: &Configuration, pi: &Isometry, p: f64) -> Result<(f64, Matching), DefectError> {
    let n = x.len();
    if n < 2 {
        return Err(DefectError::TooFewPoints);
    }
    let img = images(x, pi)?;
    let cost = power_costs(&img, x.points(), p);
    let id: Vec<usize> = (0..n).collect();
    let (perm, c) = assignment::solve_excluding(&cost, n, &id).ok_or(DefectError::TooFewPoints)?;
    let c = c.max(0.0);
    Ok((libm::pow(c, 1.0 / p), Matching { permutation: perm, cost: c }))
}

fn sq_sum(points: &[Vec<f64>]) -> f64 {
    points.iter().map(|p| dot(p, p)).sum()
}

/// Maximum normalized correlation `sum pi(x_i) . x_gamma(i)` over `gamma != id`.
pub fn measure(x: &Configuration, pi: &Isometry) -> Result<(f64, Matching), DefectError> {
    let n = x.len();
    if n < 2 {
        return Err(DefectError::TooFewPoints);
    }
    let img = images(x, pi)?;
    let denom = libm::sqrt(sq_sum(x.points())) * libm::sqrt(sq_sum(&img));
    if denom <= 0.0 {
        return Err(DefectError::ZeroNorm);
    }
    let mut cost = Vec::with_capacity(n * n);
    for a in &img {
        for b in x.points() {
            cost.push(-dot(a, b));
        }
    }
    let id: Vec<usize> = (0..n).collect();
    let (perm, c) = assignment::solve_excluding(&cost, n, &id).ok_or(DefectError::TooFewPoints)?;
    Ok((-c / denom, Matching { permutation: perm, cost: -c }))
}

/// `defect(X, pi, 2) / sqrt(|X| |pi X|)` with squared norms taken about the centroid of `X`.
pub fn normalized_defect(x: &Configuration, pi: &Isometry) -> Result<f64, DefectError> {
    let (d, _) = defect(x, pi, 2.0)?;
    let c = centroid(x);
    let shift = |v: &Vec<f64>| -> Vec<f64> { v.iter().zip(&c).map(|(a, b)| a - b).collect() };
    let nx = sq_sum(&x.points().iter().map(shift).collect::<Vec<_>>());
    let npx = sq_sum(&images(x, pi)?.iter().map(shift).collect::<Vec<_>>());
    let denom = libm::sqrt(nx * npx);
    if denom <= 0.0 {
        return Err(DefectError::ZeroNorm);
    }
    Ok(d / denom)
}

/// Both sides of `defect(X,pi,2)^2 = |pi X|^2 + |X|^2 - 2 max_{gamma != id} sum pi(x) . gamma(x)`.
pub fn expansion_identity(x: &Configuration, pi: &Isometry) -> Result<(f64, f64), DefectError> {
    let (d, _) = defect(x, pi, 2.0)?;
    let (_, m) = measure(x, pi)?;
    let rhs = sq_sum(&images(x, pi)?) + sq_sum(x.points()) - 2.0 * m.cost;
    Ok((d * d, rhs))
}

/// `(sum |pi(x) - sigma(x)|^p)^(1/p)`.
pub fn candidate_metric(
    x: &Configuration,
    pi: &Isometry,
    sigma: &Isometry,
    p: f64,
) -> Result<f64, DefectError> {
    let a = images(x, pi)?;
    let b = images(x, sigma)?;
    let s: f64 = a.iter().zip(&b).map(|(u, v)| libm::pow(dist(u, v), p)).sum();
    Ok(libm::pow(s, 1.0 / p))
}

/// How a sampled candidate was generated; angles in degrees.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateKind {
    Identity,
    Reflection2 { axis_deg: f64 },
    Rotation2 { angle_deg: f64 },
    Reflection3 { normal: [f64; 3] },
    Rotation3 { axis: [f64; 3], angle_deg: f64 },
    /// The fixed `z = 0` mirror composed with a rotation, or the inverse of such a product.
    RotoReflection3 { axis: [f64; 3], angle_deg: f64, inverse: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub iso: Isometry,
    pub kind: CandidateKind,
}

impl Candidate {
    pub fn new(iso: Isometry, kind: CandidateKind) -> Self {
        Candidate { iso, kind }
    }

    /// Rotation angle in `[0, pi]` for proper candidates.
    pub fn rotation_angle(&self) -> Option<f64> {
        match self.iso.descriptor()? {
            Descriptor::Rotation2 { theta } => Some(if theta > PI { 2.0 * PI - theta } else { theta }),
            Descriptor::Spatial { theta, normal, .. } if normal == [0.0; 3] => Some(theta),
            Descriptor::Line { reflect: false } => Some(0.0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampling {
    Planar { axes: usize, rotations: usize },
    Spatial { mirrors: usize, axes: usize, angles: usize },
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub candidates: Vec<Candidate>,
    pub sampling: Sampling,
    pub center: Vec<f64>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Adds the identity at the front if it is missing.
    pub fn with_identity(mut self) -> Self {
        if !self.candidates.iter().any(|c| c.kind == CandidateKind::Identity) {
            let k = self.center.len();
            self.candidates.insert(0, Candidate::new(Isometry::identity(k), CandidateKind::Identity));
        }
        self
    }
}

/// `m` mirror axes at `i * 180/m` degrees and rotations by `j * 360/l` degrees about `center`.
pub fn sample_candidates_2d(center: &[f64], m: usize, l: usize) -> Result<CandidateSet, DefectError> {
    if m < 1 || l < 2 || center.len() != 2 {
        return Err(DefectError::InvalidSampling);
    }
    let mut candidates = Vec::with_capacity(m + l - 1);
    for i in 0..m {
        let deg = i as f64 * 180.0 / m as f64;
        candidates.push(Candidate::new(
            Isometry::reflection_2d(deg.to_radians(), center),
            CandidateKind::Reflection2 { axis_deg: deg },
        ));
    }
    for j in 1..l {
        let deg = j as f64 * 360.0 / l as f64;
        candidates.push(Candidate::new(
            Isometry::rotation_2d(deg.to_radians(), center),
            CandidateKind::Rotation2 { angle_deg: deg },
        ));
    }
    Ok(CandidateSet { candidates, sampling: Sampling::Planar { axes: m, rotations: l }, center: center.to_vec() })
}

/// `count` directions on the upper half of a Fibonacci sphere lattice.
///
/// Opposite directions define the same mirror or rotation axis, so one hemisphere suffices.
pub fn fibonacci_hemisphere(count: usize) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - libm::sqrt(5.0));
    (0..count)
        .map(|i| {
            let z = 1.0 - (i as f64 + 0.5) / count as f64;
            let r = libm::sqrt((1.0 - z * z).max(0.0));
            let phi = golden * i as f64;
            [r * libm::cos(phi), r * libm::sin(phi), z]
        })
        .collect()
}

/// Mirrors, axis rotations and their products with the `z = 0` mirror, closed under inversion.
pub fn sample_candidates_3d(
    center: &[f64],
    mirrors: usize,
    axes: usize,
    angles: usize,
) -> Result<CandidateSet, DefectError> {
    if mirrors < 1 || axes < 1 || angles < 2 || center.len() != 3 {
        return Err(DefectError::InvalidSampling);
    }
    let mut candidates = Vec::new();
    for n in fibonacci_hemisphere(mirrors) {
        candidates.push(Candidate::new(
            Isometry::about(householder(n), center),
            CandidateKind::Reflection3 { normal: n },
        ));
    }
    let bar = householder([0.0, 0.0, 1.0]);
    let mut improper = Vec::new();
    for v in fibonacci_hemisphere(axes) {
        for k in 1..angles {
            let deg = k as f64 * 360.0 / angles as f64;
            let r = rodrigues(v, deg.to_radians());
            candidates.push(Candidate::new(
                Isometry::about(r.clone(), center),
                CandidateKind::Rotation3 { axis: v, angle_deg: deg },
            ));
            improper.push((&bar * &r, v, deg));
        }
    }
    let mut extra = Vec::new();
    for (t, v, deg) in &improper {
        let inv = t.transpose();
        let present = improper.iter().any(|(u, _, _)| close(u, &inv))
            || extra.iter().any(|(u, _, _): &(DMatrix<f64>, [f64; 3], f64)| close(u, &inv));
        if !present {
            extra.push((inv, *v, *deg));
        }
    }
    for (t, v, deg) in improper {
        candidates.push(Candidate::new(
            Isometry::about(t, center),
            CandidateKind::RotoReflection3 { axis: v, angle_deg: deg, inverse: false },
        ));
    }
    for (t, v, deg) in extra {
        candidates.push(Candidate::new(
            Isometry::about(t, center),
            CandidateKind::RotoReflection3 { axis: v, angle_deg: deg, inverse: true },
        ));
    }
    Ok(CandidateSet {
        candidates,
        sampling: Sampling::Spatial { mirrors, axes, angles },
        center: center.to_vec(),
    })
}

fn close(a: &DMatrix<f64>, b: &DMatrix<f64>) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| libm::fabs(x - y) <= 1e-9)
}

/// Candidates whose standard defect is at most `eps`.
pub fn approx_sym_group(
    x: &Configuration,
    eps: f64,
    gamma: &CandidateSet,
    p: f64,
) -> Result<Vec<Candidate>, DefectError> {
    let mut out = Vec::new();
    for c in &gamma.candidates {
        if standard_defect(x, &c.iso, p)? <= eps {
            out.push(c.clone());
        }
    }
    Ok(out)
}

/// Per-candidate evaluation on one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectRecord {
    pub candidate: Candidate,
    pub standard_defect: f64,
    pub defect: f64,
    pub measure: f64,
    /// Small rotation whose optimal unrestricted matching is the canonical one.
    pub near_identity: bool,
}

/// Evaluates every candidate; `near_identity_angle` defaults to `2 pi / |Gamma|` when `None`.
pub fn evaluate(
    x: &Configuration,
    gamma: &CandidateSet,
    p: f64,
    near_identity_angle: Option<f64>,
) -> Result<Vec<DefectRecord>, DefectError> {
    let threshold = near_identity_angle.unwrap_or(2.0 * PI / gamma.len().max(1) as f64);
    gamma.candidates.iter().map(|c| evaluate_one(x, c, p, threshold)).collect()
}

pub fn evaluate_one(
    x: &Configuration,
    c: &Candidate,
    p: f64,
    near_identity_angle: f64,
) -> Result<DefectRecord, DefectError> {
    let y = apply(&c.iso, x)?;
    let (w, m) = wasserstein(x, &y, p)?;
    let canonical = m.permutation.iter().enumerate().all(|(i, &j)| i == j);
    let small = c.rotation_angle().map_or(false, |a| a > 0.0 && a < near_identity_angle);
    Ok(DefectRecord {
        candidate: c.clone(),
        standard_defect: w,
        defect: defect(x, &c.iso, p)?.0,
        measure: measure(x, &c.iso)?.0,
        near_identity: small && canonical,
    })
}

/// Birth thresholds per candidate and radius of `X_r = {x : |x - centroid| <= r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureGrid {
    pub radii: Vec<f64>,
    pub epsilons: Vec<f64>,
    /// `births[c][r]` is the index of the smallest threshold admitting candidate `c` at radius `r`.
    pub births: Vec<Vec<Option<usize>>>,
    /// Radius indices whose truncation is empty.
    pub gaps: Vec<usize>,
}

impl FeatureGrid {
    /// `(candidate index, radius, birth threshold)` for every present birth.
    pub fn features(&self) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        for (c, row) in self.births.iter().enumerate() {
            for (r, b) in row.iter().enumerate() {
                if let Some(e) = b {
                    out.push((c, self.radii[r], self.epsilons[*e]));
                }
            }
        }
        out
    }
}

pub fn feature_grid(
    x: &Configuration,
    radii: &[f64],
    epsilons: &[f64],
    gamma: &CandidateSet,
    p: f64,
) -> Result<FeatureGrid, DefectError> {
    let sorted = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
    if !sorted(radii) || !sorted(epsilons) {
        return Err(DefectError::InvalidSampling);
    }
    let c = centroid(x);
    let mut births = vec![vec![None; radii.len()]; gamma.len()];
    let mut gaps = Vec::new();
    for (ri, &r) in radii.iter().enumerate() {
        let idx: Vec<usize> = (0..x.len()).filter(|&i| dist(&x.points()[i], &c) <= r).collect();
        if idx.is_empty() {
            gaps.push(ri);
            continue;
        }
        let xr = x.subset(&idx);
        for (ci, cand) in gamma.candidates.iter().enumerate() {
            let d = standard_defect(&xr, &cand.iso, p)?;
            births[ci][ri] = epsilons.iter().position(|&e| d <= e);
        }
    }
    Ok(FeatureGrid { radii: radii.to_vec(), epsilons: epsilons.to_vec(), births, gaps })
}

/// Single-linkage H0 bars of the candidates under `candidate_metric`, sorted by death.
pub fn probe_h0(x: &Configuration, gamma: &CandidateSet, p: f64) -> Result<Vec<(f64, f64)>, DefectError> {
    let m = gamma.len();
    if m < 2 {
        return Err(DefectError::TooFewCandidates);
    }
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..i {
            let v = candidate_metric(x, &gamma.candidates[i].iso, &gamma.candidates[j].iso, p)?;
            d[i * m + j] = v;
            d[j * m + i] = v;
        }
    }
    // Prim's algorithm: each tree edge weight is a merge radius
    let mut in_tree = vec![false; m];
    let mut best = vec![f64::INFINITY; m];
    best[0] = 0.0;
    let mut deaths = Vec::with_capacity(m - 1);
    for step in 0..m {
        let u = (0..m)
            .filter(|&i| !in_tree[i])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .unwrap_or(0);
        in_tree[u] = true;
        if step > 0 {
            deaths.push(best[u]);
        }
        for v in 0..m {
            if !in_tree[v] && d[u * m + v] < best[v] {
                best[v] = d[u * m + v];
            }
        }
    }
    deaths.sort_by(|a, b| a.total_cmp(b));
    let mut bars: Vec<(f64, f64)> = deaths.into_iter().map(|w| (0.0, w)).collect();
    bars.push((0.0, f64::INFINITY));
    Ok(bars)
}

/// `(sum |x - center|^p)^(1/p)`, the operator-norm stability constant for isometries fixing `center`.
pub fn operator_bound_constant(x: &Configuration, center: &[f64], p: f64) -> f64 {
    let s: f64 = x.points().iter().map(|v| libm::pow(dist(v, center), p)).sum();
    libm::pow(s, 1.0 / p)
}
