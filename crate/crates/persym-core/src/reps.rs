//! Interval decomposition of persistence modules and irreducible barcodes
//! of persistence representations over a fixed finite abelian group.
//!
//! Only the barcode is canonical; the bases chosen for isotypic subspaces are not.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::jacobi::svd;

pub type CMatrix = DMatrix<Complex64>;

/// Singular values at or below this fraction of the reference scale are treated as zero.
pub const RANK_TOL: f64 = 1e-8;
const CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum RepError {
    Shape { index: usize },
    EmptyFactor,
    GeneratorCount { frame: usize },
    NotOfOrder { frame: usize, generator: usize },
    NotCommuting { frame: usize },
    NotEquivariant { frame: usize, generator: usize },
    NegativeMultiplicity { birth: usize, death: usize },
    Range,
    BadElement,
}

impl fmt::Display for RepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepError::Shape { index } => write!(f, "map {index} does not match the dimensions"),
            RepError::EmptyFactor => write!(f, "cyclic factors must have order at least 1"),
            RepError::GeneratorCount { frame } => write!(f, "frame {frame} has the wrong number of generator actions"),
            RepError::NotOfOrder { frame, generator } => {
                write!(f, "generator {generator} at frame {frame} does not have the factor order")
            }
            RepError::NotCommuting { frame } => write!(f, "generator actions at frame {frame} do not commute"),
            RepError::NotEquivariant { frame, generator } => {
                write!(f, "map {frame} does not intertwine generator {generator}")
            }
            RepError::NegativeMultiplicity { birth, death } => {
                write!(f, "negative multiplicity for [{birth}, {death}]; rank decisions are inconsistent")
            }
            RepError::Range => write!(f, "frame index out of range"),
            RepError::BadElement => write!(f, "group element or character has the wrong shape"),
        }
    }
}

impl core::error::Error for RepError {}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn close(a: &CMatrix, b: &CMatrix) -> bool {
    let scale = 1.0f64.max(max_abs(a)).max(max_abs(b));
    max_abs(&(a - b)) <= CHECK_TOL * scale
}

/// Real matrix promoted to complex entries.
pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    svd(m).singular
}

/// Largest singular value; zero for empty matrices.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Orthonormal basis of the column space, keeping singular values above `RANK_TOL * scale`.
pub fn column_basis(m: &CMatrix, scale: f64) -> CMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let d = svd(m);
    let keep = d.singular.iter().filter(|&&s| s > RANK_TOL * scale).count();
    d.u.columns(0, keep).into_owned()
}

/// Number of singular values above `RANK_TOL * scale`.
pub fn rank_at(m: &CMatrix, scale: f64) -> usize {
    singular_values(m).into_iter().filter(|&s| s > RANK_TOL * scale).count()
}

/// Numerical rank relative to the largest singular value.
pub fn rank(m: &CMatrix) -> usize {
    rank_at(m, op_norm(m))
}

/// Sequence of vector spaces `V_0 -> V_1 -> ... -> V_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleSeq {
    dims: Vec<usize>,
    maps: Vec<CMatrix>,
}

impl ModuleSeq {
    pub fn new(dims: Vec<usize>, maps: Vec<CMatrix>) -> Result<Self, RepError> {
        if dims.is_empty() || maps.len() + 1 != dims.len() {
            return Err(RepError::Shape { index: maps.len() });
        }
        for (i, f) in maps.iter().enumerate() {
            if f.nrows() != dims[i + 1] || f.ncols() != dims[i] {
                return Err(RepError::Shape { index: i });
            }
        }
        Ok(ModuleSeq { dims, maps })
    }

    pub fn from_real(dims: Vec<usize>, maps: &[DMatrix<f64>]) -> Result<Self, RepError> {
        Self::new(dims, maps.iter().map(complexify).collect())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[CMatrix] {
        &self.maps
    }

    /// Index of the last frame.
    pub fn last(&self) -> usize {
        self.dims.len() - 1
    }

    /// Composite `f_{s,t}`; the identity when `s == t`.
    pub fn composite(&self, s: usize, t: usize) -> Result<CMatrix, RepError> {
        if s > t || t > self.last() {
            return Err(RepError::Range);
        }
        let mut m = CMatrix::identity(self.dims[s], self.dims[s]);
        for f in &self.maps[s..t] {
            m = f * m;
        }
        Ok(m)
    }

    /// Upper bound on the norm of any composite: the largest product of
    /// consecutive map norms, and at least 1 for the identities.
    pub fn scale(&self) -> f64 {
        let norms: Vec<f64> = self.maps.iter().map(op_norm).collect();
        let mut best = 1.0f64;
        for s in 0..norms.len() {
            let mut prod = 1.0;
            for n in &norms[s..] {
                prod *= n;
                best = best.max(prod);
            }
        }
        best
    }
}

/// Interval bar `[birth, death]` on frame indices.
pub type Bar = (usize, usize);

/// Interval modules in the decomposition, sorted by birth then death.
///
/// All ranks share the cutoff `RANK_TOL * seq.scale()` so the alternating sums stay consistent.
pub fn interval_decomposition(seq: &ModuleSeq) -> Result<Vec<Bar>, RepError> {
    let m = seq.last();
    let scale = seq.scale();
    let n = m + 1;
    let mut r = vec![vec![0i64; n]; n];
    for s in 0..n {
        let mut f = CMatrix::identity(seq.dims[s], seq.dims[s]);
        r[s][s] = seq.dims[s] as i64;
        for t in s + 1..n {
            f = &seq.maps[t - 1] * f;
            r[s][t] = rank_at(&f, scale) as i64;
        }
    }
    let rk = |s: isize, t: usize| -> i64 {
        if s < 0 || t >= n {
            0
        } else {
            r[s as usize][t]
        }
    };
    let mut bars = Vec::new();
    for b in 0..n {
        for d in b..n {
            let bi = b as isize;
            let mult = rk(bi, d) - rk(bi - 1, d) - rk(bi, d + 1) + rk(bi - 1, d + 1);
            if mult < 0 {
                return Err(RepError::NegativeMultiplicity { birth: b, death: d });
            }
            bars.extend(core::iter::repeat((b, d)).take(mult as usize));
        }
    }
    Ok(bars)
}

/// `Z/n_1 x ... x Z/n_r`; elements and characters are integer tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    factors: Vec<usize>,
}

impl AbelianGroup {
    pub fn new(factors: Vec<usize>) -> Result<Self, RepError> {
        if factors.contains(&0) {
            return Err(RepError::EmptyFactor);
        }
        Ok(AbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        AbelianGroup { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }

    /// All tuples in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &n in &self.factors {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..n).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    fn check(&self, x: &[usize]) -> Result<(), RepError> {
        if x.len() != self.factors.len() || x.iter().zip(&self.factors).any(|(a, n)| a >= n) {
            return Err(RepError::BadElement);
        }
        Ok(())
    }

    /// `chi_a(x) = exp(2 pi i sum a_j x_j / n_j)`.
    pub fn character(&self, a: &[usize], x: &[usize]) -> Complex64 {
        let phase: f64 = a
            .iter()
            .zip(x)
            .zip(&self.factors)
            .map(|((&a, &x), &n)| ((a * x) % n) as f64 / n as f64)
            .sum();
        Complex64::from_polar(1.0, 2.0 * PI * phase)
    }
}

/// Persistence module with a commuting action of a fixed abelian group at every frame.
///
/// `actions[t][j]` is the matrix of the `j`-th cyclic generator on `V_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    group: AbelianGroup,
    seq: ModuleSeq,
    actions: Vec<Vec<CMatrix>>,
}

fn power(m: &CMatrix, k: usize) -> CMatrix {
    let mut out = CMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        out = m * out;
    }
    out
}

impl Representation {
    pub fn new(group: AbelianGroup, seq: ModuleSeq, actions: Vec<Vec<CMatrix>>) -> Result<Self, RepError> {
        if actions.len() != seq.dims.len() {
            return Err(RepError::Range);
        }
        for (t, acts) in actions.iter().enumerate() {
            if acts.len() != group.factors.len() {
                return Err(RepError::GeneratorCount { frame: t });
            }
            let d = seq.dims[t];
            for (j, a) in acts.iter().enumerate() {
                if a.nrows() != d || a.ncols() != d {
                    return Err(RepError::GeneratorCount { frame: t });
                }
                if !close(&power(a, group.factors[j]), &CMatrix::identity(d, d)) {
                    return Err(RepError::NotOfOrder { frame: t, generator: j });
                }
            }
            for j in 0..acts.len() {
                for k in j + 1..acts.len() {
                    if !close(&(&acts[j] * &acts[k]), &(&acts[k] * &acts[j])) {
                        return Err(RepError::NotCommuting { frame: t });
                    }
                }
            }
        }
        for (t, f) in seq.maps.iter().enumerate() {
            for j in 0..group.factors.len() {
                if !close(&(f * &actions[t][j]), &(&actions[t + 1][j] * f)) {
                    return Err(RepError::NotEquivariant { frame: t, generator: j });
                }
            }
        }
        Ok(Representation { group, seq, actions })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn seq(&self) -> &ModuleSeq {
        &self.seq
    }

    /// Matrix of the element `x` acting on `V_t`.
    pub fn action(&self, t: usize, x: &[usize]) -> Result<CMatrix, RepError> {
        if t > self.seq.last() {
            return Err(RepError::Range);
        }
        self.group.check(x)?;
        let d = self.seq.dims[t];
        let mut m = CMatrix::identity(d, d);
        for (j, &k) in x.iter().enumerate() {
            m = power(&self.actions[t][j], k) * m;
        }
        Ok(m)
    }
}

/// `P_chi = (1/|G|) sum_g conj(chi(g)) rho_t(g)`.
pub fn isotypic_projector(rep: &Representation, t: usize, chi: &[usize]) -> Result<CMatrix, RepError> {
    rep.group.check(chi)?;
    if t > rep.seq.last() {
        return Err(RepError::Range);
    }
    let d = rep.seq.dims[t];
    let mut p = CMatrix::zeros(d, d);
    for g in rep.group.elements() {
        p += rep.action(t, &g)? * rep.group.character(chi, &g).conj();
    }
    Ok(p / Complex64::new(rep.group.order() as f64, 0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterBars {
    pub character: Vec<usize>,
    /// Dimension of the isotypic component at each frame.
    pub dims: Vec<usize>,
    pub bars: Vec<Bar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrreducibleBarcode {
    /// One entry per character, in lexicographic order.
    pub characters: Vec<CharacterBars>,
}

impl IrreducibleBarcode {
    pub fn get(&self, chi: &[usize]) -> Option<&CharacterBars> {
        self.characters.iter().find(|c| c.character == chi)
    }
}

/// Restricts the sequence to each isotypic component and decomposes it.
pub fn irreducible_barcode(rep: &Representation) -> Result<IrreducibleBarcode, RepError> {
    let mut characters = Vec::new();
    for chi in rep.group.elements() {
        let bases: Vec<CMatrix> = (0..=rep.seq.last())
            .map(|t| isotypic_projector(rep, t, &chi).map(|p| column_basis(&p, 1.0)))
            .collect::<Result<_, _>>()?;
        let dims: Vec<usize> = bases.iter().map(|q| q.ncols()).collect();
        let maps: Vec<CMatrix> =
            rep.seq.maps.iter().enumerate().map(|(t, f)| bases[t + 1].adjoint() * f * &bases[t]).collect();
        let restricted = ModuleSeq::new(dims.clone(), maps)?;
        characters.push(CharacterBars { character: chi, dims, bars: interval_decomposition(&restricted)? });
    }
    Ok(IrreducibleBarcode { characters })
}

/// Trace of `rho` restricted to the image of `f`; `rho` must preserve that image.
///
/// Singular values of `f` at or below `RANK_TOL * scale` are treated as zero.
pub fn trace_on_image(f: &CMatrix, rho: &CMatrix, scale: f64) -> Complex64 {
    let q = column_basis(f, scale);
    (q.adjoint() * rho * q).trace()
}

/// `(s,t)`-persistent character at `g`: the trace of `rho_t(g)` on the image of `f_{s,t}`.
pub fn persistent_character(rep: &Representation, s: usize, t: usize, g: &[usize]) -> Result<Complex64, RepError> {
    let f = rep.seq.composite(s, t)?;
    Ok(trace_on_image(&f, &rep.action(t, g)?, rep.seq.scale()))
}
