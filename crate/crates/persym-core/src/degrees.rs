//! Degree of symmetry, order statistics, weighted paths and Cayley graphs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;

use crate::jacobi::symmetric_eigenvalues;
use crate::persistence::{PersistenceConfiguration, PersistenceError};
use crate::symmetry::{compose, compute_sym_group, invert, restricted_from, SymmetryGroup};

#[derive(Debug, Clone, PartialEq)]
pub enum DegreeError {
    NotInGroup,
    NotInverseClosed,
    ContainsIdentity,
    Persistence(PersistenceError),
}

impl fmt::Display for DegreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeError::NotInGroup => write!(f, "generator is not an element of the group"),
            DegreeError::NotInverseClosed => write!(f, "generator set is not closed under inverses"),
            DegreeError::ContainsIdentity => write!(f, "generator set contains the identity"),
            DegreeError::Persistence(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DegreeError {}

impl From<PersistenceError> for DegreeError {
    fn from(e: PersistenceError) -> Self {
        DegreeError::Persistence(e)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Order of a permutation: the lcm of its cycle lengths.
pub fn element_order(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut order = 1;
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        order = order / gcd(order, len) * len;
    }
    order
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProfile {
    pub degree: usize,
    /// Element order to number of elements of that order; also the coefficients of the degree polynomial.
    pub order_histogram: BTreeMap<usize, usize>,
    /// Natural-log entropy of the order distribution.
    pub entropy: f64,
}

impl DegreeProfile {
    pub fn group_order(&self) -> usize {
        self.order_histogram.values().sum()
    }

    /// The degree polynomial `sum_k a_k t^k`, e.g. `t + 3t^2 + 2t^3`.
    pub fn polynomial(&self) -> String {
        let terms: Vec<String> = self
            .order_histogram
            .iter()
            .map(|(&k, &a)| {
                let coef = if a == 1 { String::new() } else { format!("{a}") };
                let pow = if k == 1 { String::from("t") } else { format!("t^{k}") };
                format!("{coef}{pow}")
            })
            .collect();
        terms.join(" + ")
    }
}

pub fn degree_profile_of_perms<'a>(perms: impl IntoIterator<Item = &'a Vec<usize>>) -> DegreeProfile {
    let mut hist = BTreeMap::new();
    for p in perms {
        *hist.entry(element_order(p)).or_insert(0) += 1;
    }
    let total: usize = hist.values().sum();
    let degree = hist.iter().map(|(k, c)| k * c).sum();
    let entropy = hist
        .values()
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * libm::log(p)
        })
        .sum::<f64>()
        .max(0.0);
    DegreeProfile { degree, order_histogram: hist, entropy }
}

pub fn degree_profile(g: &SymmetryGroup) -> DegreeProfile {
    degree_profile_of_perms(g.elements.iter().map(|e| &e.perm))
}

/// Sum of element orders over `Sym_{f_{i,j}}(X_i)`.
pub fn persistent_degree(pc: &PersistenceConfiguration, i: usize, j: usize) -> Result<usize, DegreeError> {
    let f = pc.composite(i, j)?;
    let r = restricted_from(&compute_sym_group(&pc.frames()[i]), &f, &pc.frames()[j])
        .map_err(PersistenceError::from)?;
    Ok(degree_profile(&r).degree)
}

/// Frame degrees on vertices and consecutive persistent degrees on edges.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

pub fn weighted_path(pc: &PersistenceConfiguration) -> Result<WeightedPath, DegreeError> {
    let vertices = pc.frames().iter().map(|f| degree_profile(&compute_sym_group(f)).degree).collect();
    let edges = (1..pc.len()).map(|i| persistent_degree(pc, i - 1, i)).collect::<Result<_, _>>()?;
    Ok(WeightedPath { vertices, edges })
}

/// `Cay(G, S)` with vertices in group order and `g ~ h` iff `g^-1 h` lies in `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct CayleyGraph {
    pub vertices: Vec<Vec<usize>>,
    pub generators: Vec<Vec<usize>>,
    pub adjacency: Vec<Vec<u8>>,
}

impl CayleyGraph {
    pub fn degree(&self) -> usize {
        self.generators.len()
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.vertices.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.adjacency[i].iter().map(|&a| a as f64).sum()
            } else {
                -(self.adjacency[i][j] as f64)
            }
        })
    }

    /// Connected components as sorted vertex index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut comp = Vec::new();
            label[s] = id;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for v in 0..n {
                    if self.adjacency[u][v] == 1 && label[v] == usize::MAX {
                        label[v] = id;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Cayley graph of the permutation group `elements` for an inverse-closed, identity-free `s`.
pub fn cayley_of_perms(elements: &[Vec<usize>], s: &[Vec<usize>]) -> Result<CayleyGraph, DegreeError> {
    for g in s {
        if !elements.contains(g) {
            return Err(DegreeError::NotInGroup);
        }
        if g.iter().enumerate().all(|(i, &j)| i == j) {
            return Err(DegreeError::ContainsIdentity);
        }
        if !s.contains(&invert(g)) {
            return Err(DegreeError::NotInverseClosed);
        }
    }
    let n = elements.len();
    let mut adjacency = vec![vec![0u8; n]; n];
    for (i, g) in elements.iter().enumerate() {
        let gi = invert(g);
        for (j, h) in elements.iter().enumerate() {
            if s.contains(&compose(&gi, h)) {
                adjacency[i][j] = 1;
            }
        }
    }
    Ok(CayleyGraph { vertices: elements.to_vec(), generators: s.to_vec(), adjacency })
}

pub fn cayley(g: &SymmetryGroup, s: &[Vec<usize>]) -> Result<CayleyGraph, DegreeError> {
    let elements: Vec<Vec<usize>> = g.elements.iter().map(|e| e.perm.clone()).collect();
    cayley_of_perms(&elements, s)
}

/// Ascending eigenvalues of `L = D - A`.
pub fn laplacian_spectrum(g: &CayleyGraph) -> Vec<f64> {
    symmetric_eigenvalues(&g.laplacian())
}

/// `Cay(Sym(X_i), S)` with `S` the non-identity elements of `Sym_{f_{i,j}}(X_i)`, optionally of order at most `k`.
pub fn persistence_cayley(
    pc: &PersistenceConfiguration,
    i: usize,
    j: usize,
    max_order: Option<usize>,
) -> Result<CayleyGraph, DegreeError> {
    let f = pc.composite(i, j)?;
    let g = compute_sym_group(&pc.frames()[i]);
    let r = restricted_from(&g, &f, &pc.frames()[j]).map_err(PersistenceError::from)?;
    let s: Vec<Vec<usize>> = r
        .elements
        .iter()
        .filter(|e| !e.is_identity())
        .filter(|e| max_order.map_or(true, |k| element_order(&e.perm) <= k))
        .map(|e| e.perm.clone())
        .collect();
    cayley(&g, &s)
}
