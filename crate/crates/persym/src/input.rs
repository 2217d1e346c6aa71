//! Input documents: JSON configurations, CSV point tables and representation data.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use persym_core::geometry::Configuration;
use persym_core::persistence::PersistenceConfiguration;
use persym_core::reps::CMatrix;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub label: String,
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub t: f64,
    pub points: Vec<PointRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub from_t: f64,
    pub to_t: f64,
    pub map: BTreeMap<String, String>,
}

/// A configuration document; `steps` default to matching equal labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub frames: Vec<FrameRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<StepRecord>>,
    /// Cayley generators as label maps on the first frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<BTreeMap<String, String>>>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn detect(path: &Path, format: Option<Format>) -> Format {
    format.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    })
}

pub fn load_document(path: &Path, format: Option<Format>) -> Result<InputDocument, CliError> {
    let text = read(path)?;
    match detect(path, format) {
        Format::Json => serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display()))),
        Format::Csv => parse_csv(&text).map_err(|e| match e {
            CliError::Input(m) => invalid(format!("{}: {m}", path.display())),
            other => other,
        }),
    }
}

/// Rows `label, x, y[, z]`, or a header naming `label`, `x`, `y`, `z` and optionally `frame` or `t`.
pub fn parse_csv(text: &str) -> Result<InputDocument, CliError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> =
        reader.records().collect::<Result<_, _>>().map_err(|e| invalid(format!("csv: {e}")))?;
    let rows: Vec<&csv::StringRecord> = rows.iter().filter(|r| !r.iter().all(str::is_empty)).collect();
    let Some(first) = rows.first() else {
        return Err(invalid("csv: no rows"));
    };
    let has_header = first.iter().any(|f| f.eq_ignore_ascii_case("x"));
    let columns: Vec<String> = if has_header {
        first.iter().map(|f| f.to_ascii_lowercase()).collect()
    } else {
        let coords = first.len().checked_sub(1).filter(|k| (1..=3).contains(k)).ok_or_else(|| {
            invalid("csv: expected rows label, x, y[, z]")
        })?;
        std::iter::once("label").chain(["x", "y", "z"].into_iter().take(coords)).map(String::from).collect()
    };
    let col = |name: &str| columns.iter().position(|c| c == name);
    let coord_cols: Vec<usize> = ["x", "y", "z"].iter().filter_map(|c| col(c)).collect();
    let (label_col, frame_col) = (col("label"), col("frame").or_else(|| col("t")));
    let mut frames: Vec<FrameRecord> = Vec::new();
    for (i, row) in rows.iter().enumerate().skip(usize::from(has_header)) {
        if row.len() != columns.len() {
            return Err(invalid(format!("csv: row {} has {} fields, expected {}", i + 1, row.len(), columns.len())));
        }
        let number = |c: usize| {
            row[c].parse::<f64>().map_err(|_| invalid(format!("csv: row {}: '{}' is not a number", i + 1, &row[c])))
        };
        let t = match frame_col {
            Some(c) => number(c)?,
            None => 0.0,
        };
        let coords = coord_cols.iter().map(|&c| number(c)).collect::<Result<Vec<_>, _>>()?;
        let frame = match frames.iter().position(|f| f.t == t) {
            Some(k) => k,
            None => {
                frames.push(FrameRecord { t, points: Vec::new() });
                frames.len() - 1
            }
        };
        let label = label_col.map_or_else(|| frames[frame].points.len().to_string(), |c| row[c].to_string());
        frames[frame].points.push(PointRecord { label, coords });
    }
    frames.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(InputDocument { dimension: coord_cols.len(), tolerance: None, frames, steps: None, generators: None })
}

impl InputDocument {
    fn configuration(&self, frame: &FrameRecord, tolerance: Option<f64>) -> Result<Configuration, CliError> {
        let mut points = Vec::with_capacity(frame.points.len());
        let mut labels = Vec::with_capacity(frame.points.len());
        for p in &frame.points {
            if p.coords.len() != self.dimension {
                return Err(invalid(format!(
                    "frame t={}: point '{}' has {} coordinates, expected {}",
                    frame.t,
                    p.label,
                    p.coords.len(),
                    self.dimension
                )));
            }
            if p.coords.iter().any(|c| !c.is_finite()) {
                return Err(invalid(format!("frame t={}: point '{}' is not finite", frame.t, p.label)));
            }
            points.push(p.coords.clone());
            labels.push(p.label.clone());
        }
        let built = match tolerance.or(self.tolerance) {
            Some(tol) => Configuration::with_tolerance(points, labels, tol),
            None => Configuration::new(points, labels),
        };
        built.map_err(|e| invalid(format!("frame t={}: {e}", frame.t)))
    }

    /// Each frame on its own, for commands that do not need the structure maps.
    pub fn configurations(&self, tolerance: Option<f64>) -> Result<Vec<(f64, Configuration)>, CliError> {
        if self.frames.is_empty() {
            return Err(invalid("document has no frames"));
        }
        self.frames.iter().map(|f| Ok((f.t, self.configuration(f, tolerance)?))).collect()
    }

    pub fn persistence(&self, tolerance: Option<f64>) -> Result<PersistenceConfiguration, CliError> {
        if self.frames.is_empty() {
            return Err(invalid("document has no frames"));
        }
        let grid = self.frames.iter().map(|f| f.t).collect();
        let frames =
            self.frames.iter().map(|f| self.configuration(f, tolerance)).collect::<Result<Vec<_>, _>>()?;
        let built = match &self.steps {
            None => PersistenceConfiguration::from_labels(grid, frames),
            Some(steps) => {
                if steps.len() + 1 != self.frames.len() {
                    return Err(invalid("steps must join each consecutive pair of frames"));
                }
                let mut perms = Vec::with_capacity(steps.len());
                for (i, s) in steps.iter().enumerate() {
                    if s.from_t != self.frames[i].t || s.to_t != self.frames[i + 1].t {
                        return Err(invalid(format!("step {i} does not join consecutive frames")));
                    }
                    perms.push(label_map(&frames[i], &frames[i + 1], &s.map)?);
                }
                PersistenceConfiguration::new(grid, frames, perms)
            }
        };
        built.map_err(|e| invalid(e.to_string()))
    }
}

/// The index permutation of a label map from `x` to `y`.
pub fn label_map(x: &Configuration, y: &Configuration, map: &BTreeMap<String, String>) -> Result<Vec<usize>, CliError> {
    x.labels()
        .iter()
        .map(|l| {
            let target = map.get(l).ok_or_else(|| invalid(format!("label map does not cover '{l}'")))?;
            y.index_of(target).ok_or_else(|| invalid(format!("label map sends '{l}' to unknown label '{target}'")))
        })
        .collect()
}

/// A matrix entry: a real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> Complex64 {
        match self {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// A persistence representation of `Z/n_1 x ... x Z/n_r`.
///
/// `maps[t]` has `dims[t + 1]` rows; `actions[t][i]` is generator `i` acting on frame `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDocument {
    pub group: Vec<usize>,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<Entry>>>,
    pub actions: Vec<Vec<Vec<Vec<Entry>>>>,
}

pub fn load_rep(path: &Path) -> Result<RepDocument, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn matrix(rows: &[Vec<Entry>], nrows: usize, ncols: usize, what: &str) -> Result<CMatrix, CliError> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(invalid(format!("{what} must be {nrows}x{ncols}")));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j].value()))
}

/// A cyclic tower with a function given on its last frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierDocument {
    pub orders: Vec<usize>,
    pub multipliers: Vec<usize>,
    pub values: Vec<Entry>,
}

pub fn load_fourier(path: &Path) -> Result<FourierDocument, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}
