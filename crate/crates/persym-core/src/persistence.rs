//! Persistence configurations on a discrete grid: barcodes, polybarcodes and group trajectories.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;

use crate::geometry::{apply, set_equal, Configuration, Isometry};
use crate::metrics::{keyed_distance, IntervalSet, PolyMetric};
use crate::symmetry::{
    classify_2d, compute_sym_group, is_bijection, push_forward, push_forward_perm,
    preserves_distances, restricted_from, sort_elements, SymmetryElement, SymmetryError,
    SymmetryGroup, SymmetryType2D,
};

#[derive(Debug, Clone, PartialEq)]
pub enum PersistenceError {
    Empty,
    LengthMismatch { grid: usize, frames: usize, steps: usize },
    GridNotIncreasing { index: usize },
    FrameSize { index: usize },
    FrameDimension { index: usize },
    NotBijection { step: usize },
    LabelMismatch { frame: usize, label: String },
    IndexOutOfRange { index: usize },
    Symmetry(SymmetryError),
}

impl fmt::Display for PersistenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PersistenceError::Empty => write!(f, "persistence configuration has no frames"),
            PersistenceError::LengthMismatch { grid, frames, steps } => write!(
                f,
                "expected |grid| = |frames| = |steps| + 1, got {grid}, {frames}, {steps}"
            ),
            PersistenceError::GridNotIncreasing { index } => {
                write!(f, "grid is not strictly increasing at index {index}")
            }
            PersistenceError::FrameSize { index } => write!(f, "frame {index} has a different size"),
            PersistenceError::FrameDimension { index } => {
                write!(f, "frame {index} has a different dimension")
            }
            PersistenceError::NotBijection { step } => write!(f, "step {step} is not a bijection"),
            PersistenceError::LabelMismatch { frame, label } => {
                write!(f, "label {label:?} is missing from frame {frame}")
            }
            PersistenceError::IndexOutOfRange { index } => write!(f, "frame index {index} out of range"),
            PersistenceError::Symmetry(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PersistenceError {}

impl From<SymmetryError> for PersistenceError {
    fn from(e: SymmetryError) -> Self {
        PersistenceError::Symmetry(e)
    }
}

/// Frames `X_{t_i}` on a strictly increasing grid with bijections `f_{i,i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceConfiguration {
    grid: Vec<f64>,
    frames: Vec<Configuration>,
    steps: Vec<Vec<usize>>,
}

impl PersistenceConfiguration {
    /// `steps[i][a] = b` sends point `a` of frame `i` to point `b` of frame `i + 1`.
    pub fn new(
        grid: Vec<f64>,
        frames: Vec<Configuration>,
        steps: Vec<Vec<usize>>,
    ) -> Result<Self, PersistenceError> {
        if frames.is_empty() {
            return Err(PersistenceError::Empty);
        }
        if grid.len() != frames.len() || steps.len() + 1 != frames.len() {
            return Err(PersistenceError::LengthMismatch {
                grid: grid.len(),
                frames: frames.len(),
                steps: steps.len(),
            });
        }
        for i in 1..grid.len() {
            if !(grid[i] > grid[i - 1]) {
                return Err(PersistenceError::GridNotIncreasing { index: i });
            }
        }
        let (n, k) = (frames[0].len(), frames[0].dim());
        for (i, f) in frames.iter().enumerate() {
            if f.len() != n {
                return Err(PersistenceError::FrameSize { index: i });
            }
            if f.dim() != k {
                return Err(PersistenceError::FrameDimension { index: i });
            }
        }
        for (i, s) in steps.iter().enumerate() {
            if !is_bijection(s, n) {
                return Err(PersistenceError::NotBijection { step: i });
            }
        }
        Ok(PersistenceConfiguration { grid, frames, steps })
    }

    /// Structure maps identify equal labels across frames.
    pub fn from_labels(grid: Vec<f64>, frames: Vec<Configuration>) -> Result<Self, PersistenceError> {
        let mut steps = Vec::new();
        for i in 1..frames.len() {
            let mut s = Vec::with_capacity(frames[i - 1].len());
            for l in frames[i - 1].labels() {
                let j = frames[i]
                    .index_of(l)
                    .ok_or_else(|| PersistenceError::LabelMismatch { frame: i, label: l.clone() })?;
                s.push(j);
            }
            steps.push(s);
        }
        Self::new(grid, frames, steps)
    }

    /// The same configuration at every grid value.
    pub fn constant(grid: Vec<f64>, x: Configuration) -> Result<Self, PersistenceError> {
        let m = grid.len();
        let n = x.len();
        Self::new(grid, vec![x; m], vec![(0..n).collect(); m.saturating_sub(1)])
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn frames(&self) -> &[Configuration] {
        &self.frames
    }

    pub fn steps(&self) -> &[Vec<usize>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// `f_{i,j} = f_{j-1,j} ∘ ... ∘ f_{i,i+1}`, the identity when `i = j`.
    pub fn composite(&self, i: usize, j: usize) -> Result<Vec<usize>, PersistenceError> {
        if j >= self.len() {
            return Err(PersistenceError::IndexOutOfRange { index: j });
        }
        if i > j {
            return Err(PersistenceError::IndexOutOfRange { index: i });
        }
        let mut f: Vec<usize> = (0..self.frames[0].len()).collect();
        for s in &self.steps[i..j] {
            f = f.iter().map(|&a| s[a]).collect();
        }
        Ok(f)
    }
}

/// A bar `[birth, death)` on grid indices; `death = None` means it never dies.
#[derive(Debug, Clone, PartialEq)]
pub struct Bar {
    pub birth: usize,
    pub death: Option<usize>,
    /// The symmetry of the birth frame generating the bar.
    pub generator: SymmetryElement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryBarcode {
    pub bars: Vec<Bar>,
    pub grid: Vec<f64>,
}

impl SymmetryBarcode {
    /// Bars as grid values, with `+inf` for bars that never die.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        self.bars
            .iter()
            .map(|b| (self.grid[b.birth], b.death.map_or(f64::INFINITY, |d| self.grid[d])))
            .collect()
    }
}

/// Symmetry barcode on the grid.
///
/// A symmetry of frame `i` is born at `i` unless it is the push-forward of a
/// symmetry of frame `i - 1`; it dies at the first later frame where its
/// push-forward is no longer a symmetry.
pub fn symmetry_barcode(pc: &PersistenceConfiguration, include_identity: bool) -> SymmetryBarcode {
    let groups: Vec<SymmetryGroup> = pc.frames.iter().map(compute_sym_group).collect();
    let mut bars = Vec::new();
    for i in 0..pc.len() {
        for sigma in &groups[i].elements {
            if sigma.is_identity() && !include_identity {
                continue;
            }
            if i > 0 {
                let f = &pc.steps[i - 1];
                let inherited = groups[i - 1]
                    .elements
                    .iter()
                    .any(|p| push_forward_perm(f, &p.perm) == sigma.perm);
                if inherited {
                    continue;
                }
            }
            let mut death = None;
            let mut f: Vec<usize> = (0..sigma.perm.len()).collect();
            for j in i + 1..pc.len() {
                f = f.iter().map(|&a| pc.steps[j - 1][a]).collect();
                if !preserves_distances(&pc.frames[j], &push_forward_perm(&f, &sigma.perm)) {
                    death = Some(j);
                    break;
                }
            }
            bars.push(Bar { birth: i, death, generator: sigma.clone() });
        }
    }
    SymmetryBarcode { bars, grid: pc.grid.clone() }
}

/// Canonical polybarcode key: orthogonal part and, unless translations are quotiented, translation.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyKey {
    pub linear: DMatrix<f64>,
    pub translation: Option<Vec<f64>>,
}

impl PolyKey {
    pub fn of(iso: &Isometry, translation_equiv: bool) -> Self {
        PolyKey {
            linear: iso.linear().clone(),
            translation: (!translation_equiv).then(|| iso.translation().to_vec()),
        }
    }

    pub fn matches(&self, other: &PolyKey, tol: f64) -> bool {
        if self.linear.shape() != other.linear.shape() {
            return false;
        }
        let lin = self.linear.iter().zip(other.linear.iter()).all(|(a, b)| libm::fabs(a - b) <= tol);
        let tr = match (&self.translation, &other.translation) {
            (None, None) => true,
            (Some(a), Some(b)) => a.iter().zip(b).all(|(x, y)| libm::fabs(x - y) <= tol),
            _ => false,
        };
        lin && tr
    }

    /// The keyed isometry; a quotiented translation is reported as zero.
    pub fn isometry(&self) -> Isometry {
        let k = self.linear.nrows();
        let t = self.translation.clone().unwrap_or_else(|| vec![0.0; k]);
        Isometry::about(self.linear.clone(), &vec![0.0; k]).with_translation(t)
    }
}

/// Grid indices at which `pi` maps the frame onto itself.
pub fn polybar_indices(pc: &PersistenceConfiguration, pi: &Isometry, translation_equiv: bool) -> Vec<usize> {
    (0..pc.len())
        .filter(|&i| {
            let x = &pc.frames[i];
            if pi.dim() != x.dim() {
                return false;
            }
            if translation_equiv {
                let c = x.centered();
                let lin = Isometry::about(pi.linear().clone(), &vec![0.0; x.dim()]);
                apply(&lin, &c).map_or(false, |y| set_equal(&y, &c))
            } else {
                apply(pi, x).map_or(false, |y| set_equal(&y, x))
            }
        })
        .collect()
}

/// `I(pi)` as closed intervals of grid values.
pub fn polybar(pc: &PersistenceConfiguration, pi: &Isometry, translation_equiv: bool) -> IntervalSet {
    IntervalSet::from_indices(&polybar_indices(pc, pi, translation_equiv), &pc.grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyEntry {
    pub key: PolyKey,
    pub polybar: IntervalSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polybarcode {
    pub entries: Vec<PolyEntry>,
    pub key_tol: f64,
}

impl Polybarcode {
    pub fn get(&self, key: &PolyKey) -> Option<&IntervalSet> {
        self.entries.iter().find(|e| e.key.matches(key, self.key_tol)).map(|e| &e.polybar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolybarcodeOptions {
    pub translation_equiv: bool,
    pub include_identity: bool,
}

/// Polybars for `candidates`, or by default for every symmetry of every frame.
pub fn polybarcode(
    pc: &PersistenceConfiguration,
    candidates: Option<&[Isometry]>,
    opts: PolybarcodeOptions,
) -> Polybarcode {
    let key_tol = pc.frames.iter().map(|f| f.tol()).fold(1e-9, f64::max);
    let isos: Vec<Isometry> = match candidates {
        Some(c) => c.to_vec(),
        None => pc
            .frames
            .iter()
            .flat_map(|f| compute_sym_group(f).elements)
            .filter(|e| opts.include_identity || !e.is_identity())
            .map(|e| e.iso)
            .collect(),
    };
    let mut entries: Vec<PolyEntry> = Vec::new();
    for iso in isos {
        let key = PolyKey::of(&iso, opts.translation_equiv);
        if entries.iter().any(|e| e.key.matches(&key, key_tol)) {
            continue;
        }
        let bar = polybar(pc, &iso, opts.translation_equiv);
        if !bar.is_empty() {
            entries.push(PolyEntry { key, polybar: bar });
        }
    }
    Polybarcode { entries, key_tol }
}

/// Distance over the union of keys; a key missing on one side counts as the empty set.
pub fn polybarcode_distance(a: &Polybarcode, b: &Polybarcode, metric: PolyMetric) -> f64 {
    let tol = a.key_tol.max(b.key_tol);
    let mut pairs: Vec<(IntervalSet, IntervalSet)> = Vec::new();
    for e in &a.entries {
        let other = b.entries.iter().find(|f| f.key.matches(&e.key, tol));
        pairs.push((e.polybar.clone(), other.map_or_else(IntervalSet::empty, |f| f.polybar.clone())));
    }
    for f in &b.entries {
        if !a.entries.iter().any(|e| e.key.matches(&f.key, tol)) {
            pairs.push((IntervalSet::empty(), f.polybar.clone()));
        }
    }
    keyed_distance(&pairs, metric)
}

/// Push-forward of `Sym_{f_{i,j}}(X_i)` into `Sym(X_j)`.
pub fn persistent_sym_group(
    pc: &PersistenceConfiguration,
    i: usize,
    j: usize,
) -> Result<SymmetryGroup, PersistenceError> {
    let f = pc.composite(i, j)?;
    let restricted = restricted_from(&compute_sym_group(&pc.frames[i]), &f, &pc.frames[j])?;
    let mut elements = restricted
        .elements
        .iter()
        .map(|s| push_forward(&f, s, &pc.frames[j]))
        .collect::<Result<Vec<_>, _>>()?;
    sort_elements(&mut elements);
    Ok(SymmetryGroup { elements, base: pc.frames[j].clone() })
}

/// Per-frame planar types and the indices where the type changes.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeTrajectory {
    pub types: Vec<SymmetryType2D>,
    pub transitions: Vec<usize>,
}

pub fn type_trajectory(pc: &PersistenceConfiguration) -> Result<TypeTrajectory, PersistenceError> {
    let types = pc
        .frames
        .iter()
        .map(|f| classify_2d(&compute_sym_group(f)))
        .collect::<Result<Vec<_>, _>>()?;
    let transitions = (1..types.len())
        .filter(|&i| types[i].kind != types[i - 1].kind || types[i].m != types[i - 1].m)
        .collect();
    Ok(TypeTrajectory { types, transitions })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupVertex {
    pub index: usize,
    pub order: usize,
    pub kind: Option<SymmetryType2D>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupEdge {
    pub from: usize,
    pub to: usize,
    pub order: usize,
    pub kind: Option<SymmetryType2D>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupDigraph {
    pub vertices: Vec<GroupVertex>,
    pub edges: Vec<GroupEdge>,
}

/// Frame groups as vertices and restricted groups `Sym_{f_{i,j}}(X_i)` on edges `i < j`.
pub fn group_digraph(pc: &PersistenceConfiguration) -> Result<GroupDigraph, PersistenceError> {
    let groups: Vec<SymmetryGroup> = pc.frames.iter().map(compute_sym_group).collect();
    let planar = pc.frames[0].dim() == 2;
    let vertices = groups
        .iter()
        .enumerate()
        .map(|(i, g)| GroupVertex {
            index: i,
            order: g.order(),
            kind: if planar { classify_2d(g).ok() } else { None },
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..pc.len() {
        for j in i + 1..pc.len() {
            let f = pc.composite(i, j)?;
            let r = restricted_from(&groups[i], &f, &pc.frames[j])?;
            edges.push(GroupEdge {
                from: i,
                to: j,
                order: r.order(),
                kind: if planar { classify_2d(&r).ok() } else { None },
            });
        }
    }
    Ok(GroupDigraph { vertices, edges })
}
