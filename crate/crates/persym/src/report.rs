//! Report values: fixed float precision, degrees for angles, strings for non-finite numbers.

use num_complex::Complex64;
use persym_core::defect::{Candidate, CandidateKind, DefectRecord};
use persym_core::geometry::{Descriptor, Isometry};
use persym_core::metrics::IntervalSet;
use serde_json::{json, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// A float rounded to 12 significant digits; infinities and NaN become strings.
pub fn num(x: f64) -> Value {
    if x.is_nan() {
        return Value::from("nan");
    }
    if x.is_infinite() {
        return Value::from(if x > 0.0 { "inf" } else { "-inf" });
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x);
    // avoid printing -0
    Value::from(if rounded == 0.0 { 0.0 } else { rounded })
}

/// An angle in degrees rounded to 6 decimals.
pub fn deg(x: f64) -> Value {
    num((x * 1e6).round() / 1e6)
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn matrix(m: &nalgebra::DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| num(m[(i, j)])).collect())).collect())
}

pub fn descriptor(d: Option<Descriptor>) -> Value {
    match d {
        None => Value::Null,
        Some(Descriptor::Line { reflect }) => json!({ "type": if reflect { "reflection" } else { "identity" } }),
        Some(Descriptor::Rotation2 { theta }) => json!({ "type": "rotation", "angle_deg": deg(theta.to_degrees()) }),
        Some(Descriptor::Reflection2 { alpha }) => {
            json!({ "type": "reflection", "axis_deg": deg(alpha.to_degrees()) })
        }
        Some(Descriptor::Spatial { theta, axis, normal }) => json!({
            "type": "spatial",
            "angle_deg": deg(theta.to_degrees()),
            "axis": nums(&axis),
            "normal": nums(&normal),
        }),
    }
}

pub fn isometry(iso: &Isometry) -> Value {
    json!({
        "linear": matrix(iso.linear()),
        "translation": nums(iso.translation()),
        "descriptor": descriptor(iso.descriptor()),
    })
}

pub fn intervals(set: &IntervalSet) -> Value {
    Value::Array(set.components().iter().map(|&(a, b)| json!({ "birth": num(a), "death": num(b) })).collect())
}

pub fn candidate(c: &Candidate) -> Value {
    let kind = match &c.kind {
        CandidateKind::Identity => json!({ "type": "identity" }),
        CandidateKind::Reflection2 { axis_deg } => json!({ "type": "reflection", "axis_deg": deg(*axis_deg) }),
        CandidateKind::Rotation2 { angle_deg } => json!({ "type": "rotation", "angle_deg": deg(*angle_deg) }),
        CandidateKind::Reflection3 { normal } => json!({ "type": "reflection", "normal": nums(normal) }),
        CandidateKind::Rotation3 { axis, angle_deg } => {
            json!({ "type": "rotation", "axis": nums(axis), "angle_deg": deg(*angle_deg) })
        }
        CandidateKind::RotoReflection3 { axis, angle_deg, inverse } => json!({
            "type": "rotoreflection",
            "axis": nums(axis),
            "angle_deg": deg(*angle_deg),
            "inverse": inverse,
        }),
    };
    json!({ "kind": kind, "isometry": isometry(&c.iso) })
}

pub fn defect_record(r: &DefectRecord) -> Value {
    json!({
        "candidate": candidate(&r.candidate),
        "standard_defect": num(r.standard_defect),
        "defect": num(r.defect),
        "measure": num(r.measure),
        "near_identity": r.near_identity,
    })
}

/// The `{k, re, im, energy}` rows of a spectrum.
pub fn spectrum_rows(coefficients: &[Complex64], energies: &[f64]) -> Value {
    Value::Array(
        coefficients
            .iter()
            .zip(energies)
            .enumerate()
            .map(|(k, (z, e))| json!({ "k": k, "re": num(z.re), "im": num(z.im), "energy": num(*e) }))
            .collect(),
    )
}
