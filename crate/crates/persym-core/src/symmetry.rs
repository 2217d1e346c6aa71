//! Exact symmetry groups, restricted groups along bijections, and planar classification.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
use core::fmt;

use nalgebra::DMatrix;

use crate::geometry::{
    self, centroid, dist, dot, matching_within_tol, radial_shells, Configuration, Descriptor,
    GeometryError, Isometry,
};
use crate::jacobi::svd;

#[derive(Debug, Clone, PartialEq)]
pub enum SymmetryError {
    Geometry(GeometryError),
    NotBijection,
    NotRestricted,
    NotPlanar,
    Unsupported3d,
}

impl fmt::Display for SymmetryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryError::Geometry(e) => write!(f, "{e}"),
            SymmetryError::NotBijection => write!(f, "map is not a bijection of matching size"),
            SymmetryError::NotRestricted => {
                write!(f, "symmetry does not lie in the restricted group of the map")
            }
            SymmetryError::NotPlanar => write!(f, "classification needs a planar configuration"),
            SymmetryError::Unsupported3d => {
                write!(f, "symmetry types in 3D are not compared exactly; use the heuristic")
            }
        }
    }
}

impl core::error::Error for SymmetryError {}

impl From<GeometryError> for SymmetryError {
    fn from(e: GeometryError) -> Self {
        SymmetryError::Geometry(e)
    }
}

/// An isometry fixing the centroid together with the index permutation it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryElement {
    pub iso: Isometry,
    /// `perm[i] = j` when the isometry sends point `i` onto point `j`.
    pub perm: Vec<usize>,
}

impl SymmetryElement {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn descriptor(&self) -> Option<Descriptor> {
        self.iso.descriptor()
    }
}

/// A finite symmetry group together with the configuration it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryGroup {
    pub elements: Vec<SymmetryElement>,
    pub base: Configuration,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, perm: &[usize]) -> Option<usize> {
        self.elements.iter().position(|e| e.perm == perm)
    }

    pub fn contains_perm(&self, perm: &[usize]) -> bool {
        self.position(perm).is_some()
    }

    /// Checks identity, closure under composition and inverses on the permutations.
    pub fn is_closed(&self) -> bool {
        let n = self.base.len();
        let id: Vec<usize> = (0..n).collect();
        if !self.contains_perm(&id) {
            return false;
        }
        for g in &self.elements {
            if !self.contains_perm(&invert(&g.perm)) {
                return false;
            }
            for h in &self.elements {
                if !self.contains_perm(&compose(&g.perm, &h.perm)) {
                    return false;
                }
            }
        }
        true
    }
}

/// `(g ∘ h)[i] = g[h[i]]`.
pub fn compose(g: &[usize], h: &[usize]) -> Vec<usize> {
    h.iter().map(|&i| g[i]).collect()
}

pub fn invert(g: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; g.len()];
    for (i, &j) in g.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn is_bijection(f: &[usize], n: usize) -> bool {
    if f.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &j in f {
        if j >= n || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

/// True when `perm` preserves all pairwise distances of `x` within `2 tol`.
pub fn preserves_distances(x: &Configuration, perm: &[usize]) -> bool {
    let p = x.points();
    let n = p.len();
    let tol = 2.0 * x.tol();
    for i in 0..n {
        for j in 0..i {
            if libm::fabs(dist(&p[i], &p[j]) - dist(&p[perm[i]], &p[perm[j]])) > tol {
                return false;
            }
        }
    }
    true
}

/// Orthogonal Procrustes: the orthogonal `Q` minimising `sum |Q a_i - b_i|^2`.
///
/// When both determinant signs fit equally well (non-spanning data) the proper
/// solution is returned. Returns the matrix and its residual.
pub fn procrustes(a: &[Vec<f64>], b: &[Vec<f64>]) -> (DMatrix<f64>, f64) {
    let k = a.first().map_or(0, |v| v.len());
    let mut h = DMatrix::<f64>::zeros(k, k);
    for (x, y) in a.iter().zip(b) {
        for i in 0..k {
            for j in 0..k {
                h[(i, j)] += x[i] * y[j];
            }
        }
    }
    if k == 0 {
        return (DMatrix::identity(0, 0), 0.0);
    }
    let d = svd(&h);
    let v = d.v;
    let ut = d.u.transpose();
    let q_free = &v * &ut;
    let smallest = k.saturating_sub(1);
    let mut flip = DMatrix::<f64>::identity(k, k);
    flip[(smallest, smallest)] = -1.0;
    let q_flip = &v * flip * &ut;
    let r_free = residual(&q_free, a, b);
    let r_flip = residual(&q_flip, a, b);
    let scale: f64 = a.iter().map(|x| dot(x, x)).sum::<f64>() + b.iter().map(|x| dot(x, x)).sum::<f64>();
    let tie = 1e-10 * scale.max(1e-300);
    let (q_pos, r_pos, q_neg, r_neg) = if q_free.determinant() > 0.0 {
        (q_free, r_free, q_flip, r_flip)
    } else {
        (q_flip, r_flip, q_free, r_free)
    };
    if r_pos <= r_neg + tie {
        (q_pos, r_pos)
    } else {
        (q_neg, r_neg)
    }
}

fn residual(q: &DMatrix<f64>, a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let k = q.nrows();
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            (0..k)
                .map(|i| {
                    let v = (0..k).map(|j| q[(i, j)] * x[j]).sum::<f64>() - y[i];
                    v * v
                })
                .sum::<f64>()
        })
        .sum()
}

fn centered_points(x: &Configuration) -> (Vec<f64>, Vec<Vec<f64>>) {
    let c = centroid(x);
    let pts = x.points().iter().map(|p| p.iter().zip(&c).map(|(a, b)| a - b).collect()).collect();
    (c, pts)
}

/// The isometry about the centroid realizing a distance-preserving permutation.
pub fn realize(x: &Configuration, perm: &[usize]) -> Option<SymmetryElement> {
    if !is_bijection(perm, x.len()) || !preserves_distances(x, perm) {
        return None;
    }
    let (c, pts) = centered_points(x);
    let target: Vec<Vec<f64>> = perm.iter().map(|&j| pts[j].clone()).collect();
    let (q, res) = procrustes(&pts, &target);
    let n = x.len() as f64;
    // accept residual up to n * (2 tol)^2 plus rounding
    if res > n * 4.0 * x.tol() * x.tol() + 1e-12 * x.sq_norm().max(1.0) {
        return None;
    }
    Some(SymmetryElement { iso: Isometry::about(q, &c), perm: perm.to_vec() })
}

/// Greedy spanning subset: indices whose centered vectors are linearly independent.
fn spanning_basis(pts: &[Vec<f64>], shell_size: &[usize], thresh: f64) -> Vec<usize> {
    let k = pts.first().map_or(0, |p| p.len());
    let mut basis: Vec<usize> = Vec::new();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    while basis.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in pts.iter().enumerate() {
            if basis.contains(&i) {
                continue;
            }
            let mut r = p.clone();
            for e in &ortho {
                let d = dot(&r, e);
                for (a, b) in r.iter_mut().zip(e) {
                    *a -= d * b;
                }
            }
            let rn = geometry::norm(&r);
            if rn <= thresh {
                continue;
            }
            // prefer points on small shells; among those, the most independent one
            let better = match best {
                None => true,
                Some((j, bn)) => match shell_size[i].cmp(&shell_size[j]) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => rn > bn * (1.0 + 1e-9),
                },
            };
            if better {
                best = Some((i, rn));
            }
        }
        let Some((i, _)) = best else { break };
        let mut r = pts[i].clone();
        for e in &ortho {
            let d = dot(&r, e);
            for (a, b) in r.iter_mut().zip(e) {
                *a -= d * b;
            }
        }
        let rn = geometry::norm(&r);
        ortho.push(r.iter().map(|v| v / rn).collect());
        basis.push(i);
    }
    basis
}

/// All isometries fixing the centroid that map `x` onto itself.
///
/// Candidates are the images of a spanning subset of points consistent with
/// shells and Gram matrix; each candidate is verified on the whole set.
pub fn compute_sym_group(x: &Configuration) -> SymmetryGroup {
    let n = x.len();
    let tol = x.tol();
    let (c, pts) = centered_points(x);
    let shells = radial_shells(x);
    let mut shell_of = vec![0usize; n];
    let mut shell_size = vec![0usize; n];
    for (s, sh) in shells.iter().enumerate() {
        for &i in &sh.indices {
            shell_of[i] = s;
            shell_size[i] = sh.indices.len();
        }
    }
    let diam = x.diameter();
    let thresh = (1e-6 * diam).max(100.0 * tol);
    let basis = spanning_basis(&pts, &shell_size, thresh);
    let centered = x.with_points(pts.clone());

    let mut found: Vec<SymmetryElement> = Vec::new();
    let mut images: Vec<usize> = Vec::with_capacity(basis.len());
    let gram_tol = |i: usize, j: usize| {
        4.0 * tol * (geometry::norm(&pts[i]) + geometry::norm(&pts[j])) + 4.0 * tol * tol
    };
    enumerate(&basis, &pts, &shell_of, &gram_tol, &mut images, &mut |imgs: &[usize]| {
        let a: Vec<Vec<f64>> = basis.iter().map(|&i| pts[i].clone()).collect();
        let b: Vec<Vec<f64>> = imgs.iter().map(|&i| pts[i].clone()).collect();
        let q = if basis.is_empty() {
            DMatrix::identity(x.dim(), x.dim())
        } else {
            procrustes(&a, &b).0
        };
        let cand = Isometry::about(q, &vec![0.0; x.dim()]);
        let moved = x.with_points(pts.iter().map(|p| cand.apply_point(p)).collect());
        if let Some(perm) = matching_within_tol(&moved, &centered) {
            if !found.iter().any(|e| e.perm == perm) {
                if let Some(el) = realize(x, &perm) {
                    found.push(el);
                }
            }
        }
    });
    let _ = c;
    sort_elements(&mut found);
    SymmetryGroup { elements: found, base: x.clone() }
}

fn enumerate(
    basis: &[usize],
    pts: &[Vec<f64>],
    shell_of: &[usize],
    gram_tol: &dyn Fn(usize, usize) -> f64,
    images: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    let d = images.len();
    if d == basis.len() {
        visit(images);
        return;
    }
    let b = basis[d];
    for y in 0..pts.len() {
        if shell_of[y] != shell_of[b] || images.contains(&y) {
            continue;
        }
        let consistent = (0..d).all(|e| {
            let want = dot(&pts[basis[e]], &pts[b]);
            let got = dot(&pts[images[e]], &pts[y]);
            libm::fabs(want - got) <= gram_tol(basis[e], b)
        });
        if consistent {
            images.push(y);
            enumerate(basis, pts, shell_of, gram_tol, images, visit);
            images.pop();
        }
    }
}

/// Identity first, then proper elements by angle, then improper ones.
fn sort_key(e: &SymmetryElement) -> (u8, f64, [f64; 3]) {
    if e.is_identity() {
        return (0, 0.0, [0.0; 3]);
    }
    match e.descriptor() {
        Some(Descriptor::Line { .. }) => (2, 0.0, [0.0; 3]),
        Some(Descriptor::Rotation2 { theta }) => (1, theta, [0.0; 3]),
        Some(Descriptor::Reflection2 { alpha }) => (2, alpha, [0.0; 3]),
        Some(Descriptor::Spatial { theta, axis, normal }) => {
            if normal == [0.0; 3] {
                (1, theta, axis)
            } else {
                (2, theta, normal)
            }
        }
        None => (3, 0.0, [0.0; 3]),
    }
}

pub(crate) fn sort_elements(v: &mut [SymmetryElement]) {
    v.sort_by(|a, b| {
        let (ka, kb) = (sort_key(a), sort_key(b));
        ka.0.cmp(&kb.0)
            .then(cmp_approx(ka.1, kb.1))
            .then(cmp_approx(ka.2[0], kb.2[0]))
            .then(cmp_approx(ka.2[1], kb.2[1]))
            .then(cmp_approx(ka.2[2], kb.2[2]))
            .then(a.perm.cmp(&b.perm))
    });
}

fn cmp_approx(a: f64, b: f64) -> Ordering {
    if libm::fabs(a - b) <= 1e-9 {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// The permutation `f ∘ σ ∘ f⁻¹` on the target.
pub fn push_forward_perm(f: &[usize], sigma: &[usize]) -> Vec<usize> {
    let mut tau = vec![0; f.len()];
    for i in 0..f.len() {
        tau[f[i]] = f[sigma[i]];
    }
    tau
}

/// `Sym_f(X)`: elements of `Sym(X)` whose push-forward along `f` is a symmetry of `Y`.
pub fn restricted_sym_group(
    x: &Configuration,
    f: &[usize],
    y: &Configuration,
) -> Result<SymmetryGroup, SymmetryError> {
    restricted_from(&compute_sym_group(x), f, y)
}

/// As [`restricted_sym_group`] but reusing an already computed `Sym(X)`.
pub fn restricted_from(
    gx: &SymmetryGroup,
    f: &[usize],
    y: &Configuration,
) -> Result<SymmetryGroup, SymmetryError> {
    if gx.base.len() != y.len() || !is_bijection(f, y.len()) {
        return Err(SymmetryError::NotBijection);
    }
    let elements = gx
        .elements
        .iter()
        .filter(|s| preserves_distances(y, &push_forward_perm(f, &s.perm)))
        .cloned()
        .collect();
    Ok(SymmetryGroup { elements, base: gx.base.clone() })
}

/// `f♯(σ)`: the symmetry of `Y` with permutation `f ∘ σ ∘ f⁻¹`.
pub fn push_forward(
    f: &[usize],
    sigma: &SymmetryElement,
    y: &Configuration,
) -> Result<SymmetryElement, SymmetryError> {
    if !is_bijection(f, y.len()) || sigma.perm.len() != y.len() {
        return Err(SymmetryError::NotBijection);
    }
    let tau = push_forward_perm(f, &sigma.perm);
    realize(y, &tau).ok_or(SymmetryError::NotRestricted)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    Cyclic,
    Dihedral,
}

/// Planar symmetry type `(m, {alpha_i})`: `C_m` or `D_m` with axis angles in degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryType2D {
    pub kind: SymmetryKind,
    pub m: usize,
    pub axes_deg: Vec<f64>,
}

impl SymmetryType2D {
    pub fn group_order(&self) -> usize {
        match self.kind {
            SymmetryKind::Cyclic => self.m,
            SymmetryKind::Dihedral => 2 * self.m,
        }
    }
}

impl fmt::Display for SymmetryType2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymmetryKind::Cyclic => write!(f, "C{}", self.m),
            SymmetryKind::Dihedral => write!(f, "D{}", self.m),
        }
    }
}

pub fn classify_2d(g: &SymmetryGroup) -> Result<SymmetryType2D, SymmetryError> {
    if g.base.dim() != 2 {
        return Err(SymmetryError::NotPlanar);
    }
    let mut m = 0;
    let mut axes = Vec::new();
    for e in &g.elements {
        match e.descriptor() {
            Some(Descriptor::Reflection2 { alpha }) => axes.push(alpha * 180.0 / PI),
            _ => m += 1,
        }
    }
    axes.sort_by(|a, b| a.total_cmp(b));
    let kind = if axes.is_empty() { SymmetryKind::Cyclic } else { SymmetryKind::Dihedral };
    Ok(SymmetryType2D { kind, m, axes_deg: axes })
}

/// Planar groups of equal kind and rotation order are conjugate in O(2).
pub fn same_symmetry_type(g: &SymmetryGroup, h: &SymmetryGroup) -> Result<bool, SymmetryError> {
    if g.base.dim() == 3 || h.base.dim() == 3 {
        return Err(SymmetryError::Unsupported3d);
    }
    let (a, b) = (classify_2d(g)?, classify_2d(h)?);
    Ok(a.kind == b.kind && a.m == b.m)
}

/// Heuristic comparison for spatial groups: order, determinant signature and
/// rotation-angle multiset. Not a conjugacy test.
pub fn same_symmetry_type_3d_heuristic(g: &SymmetryGroup, h: &SymmetryGroup) -> bool {
    fn signature(g: &SymmetryGroup) -> (usize, usize, Vec<f64>) {
        let mut improper = 0;
        let mut angles = Vec::new();
        for e in &g.elements {
            match e.descriptor() {
                Some(Descriptor::Spatial { theta, normal, .. }) => {
                    if normal != [0.0; 3] {
                        improper += 1;
                    }
                    angles.push(theta);
                }
                Some(d) => angles.push(if d.is_proper() { 0.0 } else { PI }),
                None => {}
            }
        }
        angles.sort_by(|a, b| a.total_cmp(b));
        (g.order(), improper, angles)
    }
    let (a, b) = (signature(g), signature(h));
    a.0 == b.0
        && a.1 == b.1
        && a.2.len() == b.2.len()
        && a.2.iter().zip(&b.2).all(|(x, y)| libm::fabs(x - y) < 1e-6)
}
