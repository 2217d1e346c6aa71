//! Configurations, isometries and optimal matchings.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use nalgebra::DMatrix;

use crate::assignment;

/// Errors raised while building or combining configurations and isometries.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    Empty,
    Dimension { expected: usize, found: usize },
    UnsupportedDimension(usize),
    LabelCount { points: usize, labels: usize },
    DuplicateLabel(String),
    CoincidentPoints { first: usize, second: usize },
    SizeMismatch { left: usize, right: usize },
    NegativeTolerance,
    NotOrthogonal,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::Empty => write!(f, "configuration has no points"),
            GeometryError::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            GeometryError::UnsupportedDimension(k) => write!(f, "unsupported dimension {k}"),
            GeometryError::LabelCount { points, labels } => {
                write!(f, "{points} points but {labels} labels")
            }
            GeometryError::DuplicateLabel(l) => write!(f, "duplicate label {l:?}"),
            GeometryError::CoincidentPoints { first, second } => {
                write!(f, "points {first} and {second} are closer than twice the tolerance")
            }
            GeometryError::SizeMismatch { left, right } => {
                write!(f, "size mismatch: {left} vs {right}")
            }
            GeometryError::NegativeTolerance => write!(f, "tolerance must be nonnegative"),
            GeometryError::NotOrthogonal => write!(f, "linear part is not orthogonal"),
        }
    }
}

impl core::error::Error for GeometryError {}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// A labelled finite point set in R^k with an absolute distance tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<Vec<f64>>,
    labels: Vec<String>,
    tol: f64,
}

impl Configuration {
    /// Builds a configuration with the default tolerance `1e-7 * diameter`.
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self, GeometryError> {
        let diam = diameter(&points);
        let tol = if diam > 0.0 { 1e-7 * diam } else { 1e-7 };
        Self::with_tolerance(points, labels, tol)
    }

    pub fn with_tolerance(
        points: Vec<Vec<f64>>,
        labels: Vec<String>,
        tol: f64,
    ) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::Empty);
        }
        if !(tol >= 0.0) {
            return Err(GeometryError::NegativeTolerance);
        }
        let k = points[0].len();
        if !(1..=3).contains(&k) {
            return Err(GeometryError::UnsupportedDimension(k));
        }
        for p in &points {
            if p.len() != k {
                return Err(GeometryError::Dimension { expected: k, found: p.len() });
            }
        }
        if labels.len() != points.len() {
            return Err(GeometryError::LabelCount { points: points.len(), labels: labels.len() });
        }
        for i in 0..labels.len() {
            if labels[..i].contains(&labels[i]) {
                return Err(GeometryError::DuplicateLabel(labels[i].clone()));
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                if dist(&points[i], &points[j]) <= 2.0 * tol {
                    return Err(GeometryError::CoincidentPoints { first: j, second: i });
                }
            }
        }
        Ok(Configuration { points, labels, tol })
    }

    /// Labels the points "0", "1", ... in order.
    pub fn unlabeled(points: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        let labels = (0..points.len()).map(|i| format!("{i}")).collect();
        Self::new(points, labels)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.points)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Keeps the points at the given indices, in that order.
    pub fn subset(&self, idx: &[usize]) -> Configuration {
        Configuration {
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
            tol: self.tol,
        }
    }

    /// Same labels and tolerance, new coordinates. No distinctness check.
    pub(crate) fn with_points(&self, points: Vec<Vec<f64>>) -> Configuration {
        Configuration { points, labels: self.labels.clone(), tol: self.tol }
    }

    pub fn translated(&self, v: &[f64]) -> Configuration {
        self.with_points(
            self.points.iter().map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect()).collect(),
        )
    }

    /// Moves the centroid to the origin.
    pub fn centered(&self) -> Configuration {
        let c: Vec<f64> = centroid(self).iter().map(|x| -x).collect();
        self.translated(&c)
    }

    /// Sum of squared norms of the points.
    pub fn sq_norm(&self) -> f64 {
        self.points.iter().map(|p| dot(p, p)).sum()
    }
}

fn diameter(points: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..points.len() {
        for j in 0..i {
            if points[i].len() == points[j].len() {
                d = d.max(dist(&points[i], &points[j]));
            }
        }
    }
    d
}

/// Geometric description of the linear part of an isometry.
#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor {
    /// One dimension: `reflect` is true for x -> -x.
    Line { reflect: bool },
    /// Counterclockwise rotation by `theta` in [0, 2pi).
    Rotation2 { theta: f64 },
    /// Reflection across the line at angle `alpha` in [0, pi) to the x-axis.
    Reflection2 { alpha: f64 },
    /// `R_axis(theta) * (I - 2 n n^T)`, theta in [0, pi]; `normal` is zero for proper rotations.
    Spatial { theta: f64, axis: [f64; 3], normal: [f64; 3] },
}

impl Descriptor {
    /// Rebuilds the orthogonal matrix described by this descriptor.
    pub fn matrix(&self) -> DMatrix<f64> {
        match *self {
            Descriptor::Line { reflect } => {
                DMatrix::from_element(1, 1, if reflect { -1.0 } else { 1.0 })
            }
            Descriptor::Rotation2 { theta } => rotation2(theta),
            Descriptor::Reflection2 { alpha } => reflection2(alpha),
            Descriptor::Spatial { theta, axis, normal } => {
                let r = rodrigues(axis, theta);
                if normal == [0.0; 3] {
                    r
                } else {
                    r * householder(normal)
                }
            }
        }
    }

    pub fn is_proper(&self) -> bool {
        match self {
            Descriptor::Line { reflect } => !reflect,
            Descriptor::Rotation2 { .. } => true,
            Descriptor::Reflection2 { .. } => false,
            Descriptor::Spatial { normal, .. } => *normal == [0.0; 3],
        }
    }
}

pub(crate) fn rotation2(theta: f64) -> DMatrix<f64> {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

pub(crate) fn reflection2(alpha: f64) -> DMatrix<f64> {
    let (s, c) = (libm::sin(2.0 * alpha), libm::cos(2.0 * alpha));
    DMatrix::from_row_slice(2, 2, &[c, s, s, -c])
}

/// Rotation about a unit axis by `theta` (Rodrigues formula).
pub fn rodrigues(axis: [f64; 3], theta: f64) -> DMatrix<f64> {
    let n = norm(&axis);
    let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
    let k = DMatrix::from_row_slice(3, 3, &[0.0, -z, y, z, 0.0, -x, -y, x, 0.0]);
    let k2 = &k * &k;
    DMatrix::identity(3, 3) + k * libm::sin(theta) + k2 * (1.0 - libm::cos(theta))
}

/// Reflection in the plane with the given normal: `I - 2 n n^T`.
pub fn householder(normal: [f64; 3]) -> DMatrix<f64> {
    let l = norm(&normal);
    let n = [normal[0] / l, normal[1] / l, normal[2] / l];
    DMatrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { 0.0 } - 2.0 * n[i] * n[j])
}

fn wrap(x: f64, period: f64) -> f64 {
    let r = x - period * libm::floor(x / period);
    if r >= period || r < 0.0 {
        0.0
    } else {
        r
    }
}

/// Axis and angle in [0, pi] of a proper 3x3 rotation.
fn axis_angle(q: &DMatrix<f64>) -> ([f64; 3], f64) {
    let tr = q[(0, 0)] + q[(1, 1)] + q[(2, 2)];
    let theta = libm::acos(((tr - 1.0) / 2.0).clamp(-1.0, 1.0));
    let w = [q[(2, 1)] - q[(1, 2)], q[(0, 2)] - q[(2, 0)], q[(1, 0)] - q[(0, 1)]];
    let wn = norm(&w);
    if theta < 1e-9 {
        return ([0.0, 0.0, 1.0], 0.0);
    }
    if wn > 1e-6 {
        return ([w[0] / wn, w[1] / wn, w[2] / wn], theta);
    }
    // near a half turn: (Q + I) / 2 = u u^T
    let m = DMatrix::from_fn(3, 3, |i, j| (q[(i, j)] + if i == j { 1.0 } else { 0.0 }) / 2.0);
    let c = (0..3).max_by(|&a, &b| m[(a, a)].total_cmp(&m[(b, b)])).unwrap_or(0);
    let mut u = [m[(0, c)], m[(1, c)], m[(2, c)]];
    let l = norm(&u);
    for x in u.iter_mut() {
        *x /= l;
    }
    // orient by the residual skew part when present, else make the first nonzero entry positive
    let s = dot(&u, &w);
    let flip = if libm::fabs(s) > 1e-12 {
        s < 0.0
    } else {
        u.iter().find(|x| libm::fabs(**x) > 1e-12).map_or(false, |x| *x < 0.0)
    };
    if flip {
        u = [-u[0], -u[1], -u[2]];
    }
    (u, theta)
}

/// Derives the descriptor of an orthogonal matrix of size 1, 2 or 3.
pub fn describe(q: &DMatrix<f64>) -> Option<Descriptor> {
    let k = q.nrows();
    match k {
        1 => Some(Descriptor::Line { reflect: q[(0, 0)] < 0.0 }),
        2 => {
            let det = q[(0, 0)] * q[(1, 1)] - q[(0, 1)] * q[(1, 0)];
            let a = libm::atan2(q[(1, 0)], q[(0, 0)]);
            if det > 0.0 {
                Some(Descriptor::Rotation2 { theta: wrap(a, 2.0 * PI) })
            } else {
                Some(Descriptor::Reflection2 { alpha: wrap(a / 2.0, PI) })
            }
        }
        3 => {
            let det = q.determinant();
            if det > 0.0 {
                let (axis, theta) = axis_angle(q);
                Some(Descriptor::Spatial { theta, axis, normal: [0.0; 3] })
            } else {
                // -Q is a rotation by phi about u; Q = R_{-u}(pi - phi) (I - 2 u u^T)
                let (u, phi) = axis_angle(&(-q));
                let theta = PI - phi;
                let n = [-u[0], -u[1], -u[2]];
                let n = canonical_sign(n);
                let axis = if theta.abs() < 1e-12 || (PI - theta).abs() < 1e-12 { n } else { [-u[0], -u[1], -u[2]] };
                Some(Descriptor::Spatial { theta, axis, normal: n })
            }
        }
        _ => None,
    }
}

fn canonical_sign(v: [f64; 3]) -> [f64; 3] {
    match v.iter().find(|x| libm::fabs(**x) > 1e-12) {
        Some(x) if *x < 0.0 => [-v[0], -v[1], -v[2]],
        _ => v,
    }
}

/// An isometry `x -> Q x + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    q: DMatrix<f64>,
    t: Vec<f64>,
}

impl Isometry {
    pub fn new(q: DMatrix<f64>, t: Vec<f64>) -> Result<Self, GeometryError> {
        if !q.is_square() {
            return Err(GeometryError::NotOrthogonal);
        }
        if t.len() != q.nrows() {
            return Err(GeometryError::Dimension { expected: q.nrows(), found: t.len() });
        }
        let iso = Isometry { q, t };
        if !iso.is_orthogonal(1e-8) {
            return Err(GeometryError::NotOrthogonal);
        }
        Ok(iso)
    }

    pub(crate) fn with_translation(self, t: Vec<f64>) -> Self {
        Isometry { q: self.q, t }
    }


    pub fn identity(k: usize) -> Self {
        Isometry { q: DMatrix::identity(k, k), t: vec![0.0; k] }
    }

    /// Linear map `q` acting about `center`: `x -> q (x - c) + c`.
    pub fn about(q: DMatrix<f64>, center: &[f64]) -> Self {
        let qc = &q * nalgebra::DVector::from_column_slice(center);
        let t = center.iter().zip(qc.iter()).map(|(c, v)| c - v).collect();
        Isometry { q, t }
    }

    pub fn rotation_2d(theta: f64, center: &[f64]) -> Self {
        Self::about(rotation2(theta), center)
    }

    /// Reflection across the line through `center` at angle `alpha` to the x-axis.
    pub fn reflection_2d(alpha: f64, center: &[f64]) -> Self {
        Self::about(reflection2(alpha), center)
    }

    pub fn rotation_3d(axis: [f64; 3], theta: f64, center: &[f64]) -> Self {
        Self::about(rodrigues(axis, theta), center)
    }

    pub fn reflection_3d(normal: [f64; 3], center: &[f64]) -> Self {
        Self::about(householder(normal), center)
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn translation(&self) -> &[f64] {
        &self.t
    }

    pub fn dim(&self) -> usize {
        self.t.len()
    }

    pub fn det(&self) -> f64 {
        self.q.determinant()
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        let e = self.q.transpose() * &self.q - DMatrix::identity(self.dim(), self.dim());
        e.iter().all(|x| libm::fabs(*x) <= tol) && libm::fabs(libm::fabs(self.det()) - 1.0) <= tol
    }

    pub fn descriptor(&self) -> Option<Descriptor> {
        describe(&self.q)
    }

    pub fn apply_point(&self, x: &[f64]) -> Vec<f64> {
        let k = self.dim();
        (0..k).map(|i| (0..k).map(|j| self.q[(i, j)] * x[j]).sum::<f64>() + self.t[i]).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let q = &self.q * &other.q;
        let t = self.apply_point(&other.t);
        Isometry { q, t }
    }

    pub fn inverse(&self) -> Isometry {
        let qt = self.q.transpose();
        let qtt = &qt * nalgebra::DVector::from_column_slice(&self.t);
        Isometry { q: qt, t: qtt.iter().map(|x| -x).collect() }
    }

    /// Largest entrywise gap in linear part and translation.
    pub fn distance_to(&self, other: &Isometry) -> f64 {
        let dq = (&self.q - &other.q).iter().fold(0.0f64, |m, x| m.max(libm::fabs(*x)));
        let dt = self.t.iter().zip(&other.t).fold(0.0f64, |m, (a, b)| m.max(libm::fabs(a - b)));
        dq.max(dt)
    }

    /// Operator 2-norm of `Q_self - Q_other`.
    pub fn op_norm_diff(&self, other: &Isometry) -> f64 {
        let d = &self.q - &other.q;
        crate::jacobi::svd(&d).singular.first().copied().unwrap_or(0.0)
    }
}

/// A bijection on `0..n` together with its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// `permutation[i] = j` pairs point `i` of the source with point `j` of the target.
    pub permutation: Vec<usize>,
    pub cost: f64,
}

pub fn centroid(x: &Configuration) -> Vec<f64> {
    let k = x.dim();
    let n = x.len() as f64;
    (0..k).map(|d| x.points.iter().map(|p| p[d]).sum::<f64>() / n).collect()
}

pub fn apply(pi: &Isometry, x: &Configuration) -> Result<Configuration, GeometryError> {
    if pi.dim() != x.dim() {
        return Err(GeometryError::Dimension { expected: x.dim(), found: pi.dim() });
    }
    Ok(x.with_points(x.points.iter().map(|p| pi.apply_point(p)).collect()))
}

fn check_sizes(x: &Configuration, y: &Configuration) -> Result<(), GeometryError> {
    if x.len() != y.len() {
        return Err(GeometryError::SizeMismatch { left: x.len(), right: y.len() });
    }
    if x.dim() != y.dim() {
        return Err(GeometryError::Dimension { expected: x.dim(), found: y.dim() });
    }
    Ok(())
}

/// Cost matrix `c[i][j] = |x_i - y_j|^p`, row-major.
pub(crate) fn power_costs(x: &[Vec<f64>], y: &[Vec<f64>], p: f64) -> Vec<f64> {
    let mut c = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            let d = dist(a, b);
            c.push(if p == 2.0 { d * d } else if p == 1.0 { d } else { libm::pow(d, p) });
        }
    }
    c
}

/// Bijection matching every point of `x` to a point of `y` within `x.tol()`, if any.
pub fn matching_within_tol(x: &Configuration, y: &Configuration) -> Option<Vec<usize>> {
    if check_sizes(x, y).is_err() {
        return None;
    }
    let n = x.len();
    let cost = power_costs(&x.points, &y.points, 1.0);
    let (perm, _) = assignment::solve(&cost, n);
    let ok = (0..n).all(|i| cost[i * n + perm[i]] <= x.tol);
    ok.then_some(perm)
}

/// Tolerance-aware unordered equality.
pub fn set_equal(x: &Configuration, y: &Configuration) -> bool {
    matching_within_tol(x, y).is_some()
}

/// `W_p(X, Y)` with an optimal matching.
pub fn wasserstein(
    x: &Configuration,
    y: &Configuration,
    p: f64,
) -> Result<(f64, Matching), GeometryError> {
    check_sizes(x, y)?;
    let n = x.len();
    let cost = power_costs(&x.points, &y.points, p);
    let (perm, c) = assignment::solve(&cost, n);
    let c = c.max(0.0);
    Ok((libm::pow(c, 1.0 / p), Matching { permutation: perm, cost: c }))
}

/// A set of points at (nearly) equal distance from the centroid.
#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub radius: f64,
    pub indices: Vec<usize>,
    pub config: Configuration,
}

/// Partition by distance to the centroid; radii within `2 tol` of a neighbour share a shell.
pub fn radial_shells(x: &Configuration) -> Vec<Shell> {
    let c = centroid(x);
    let mut r: Vec<(f64, usize)> = x.points.iter().enumerate().map(|(i, p)| (dist(p, &c), i)).collect();
    r.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut shells: Vec<Vec<(f64, usize)>> = Vec::new();
    for item in r {
        match shells.last_mut() {
            Some(s) if item.0 - s.last().map_or(item.0, |l| l.0) <= 2.0 * x.tol => s.push(item),
            _ => shells.push(vec![item]),
        }
    }
    shells
        .into_iter()
        .map(|s| {
            let radius = s.iter().map(|v| v.0).sum::<f64>() / s.len() as f64;
            let mut indices: Vec<usize> = s.iter().map(|v| v.1).collect();
            indices.sort_unstable();
            let config = x.subset(&indices);
            Shell { radius, indices, config }
        })
        .collect()
}
