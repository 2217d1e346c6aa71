//! One function per subcommand; each returns the echoed inputs and the results.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use persym_core::defect::{
    evaluate_one, feature_grid, measure, probe_h0, sample_candidates_2d, sample_candidates_3d, Candidate,
    CandidateKind, CandidateSet, DefectError, DefectRecord,
};
use persym_core::degrees::{
    cayley, degree_profile, element_order, laplacian_spectrum, persistence_cayley, weighted_path, CayleyGraph,
};
use persym_core::fourier::{persistent_ft, CyclicPersistenceGroup, PersistentFunction};
use persym_core::geometry::{apply, centroid, radial_shells, Configuration};
use persym_core::metrics::{bottleneck, PolyMetric};
use persym_core::persistence::{polybarcode, polybarcode_distance, symmetry_barcode, PolybarcodeOptions};
use persym_core::reps::{
    interval_decomposition, irreducible_barcode, AbelianGroup, ModuleSeq, RepError, Representation,
};
use persym_core::symmetry::{classify_2d, compute_sym_group, SymmetryElement, SymmetryKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::input::{self, label_map, InputDocument};
use crate::report::{self, deg, num, nums};
use crate::{CliError, Flags, MetricArg};

pub struct Output {
    pub inputs: Value,
    pub results: Value,
    pub warnings: Vec<String>,
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

fn load(path: &Path, flags: &Flags) -> Result<InputDocument, CliError> {
    input::load_document(path, flags.format)
}

fn echo(doc: &InputDocument) -> Value {
    serde_json::to_value(doc).expect("input documents serialize")
}

fn check_p(p: f64) -> Result<f64, CliError> {
    if p.is_finite() && p >= 1.0 {
        Ok(p)
    } else {
        Err(invalid(format!("--p must be a finite number at least 1, got {p}")))
    }
}

/// A permutation as a map between the labels of one configuration.
fn label_perm(x: &Configuration, perm: &[usize]) -> Value {
    let labels = x.labels();
    Value::Object(perm.iter().enumerate().map(|(i, &j)| (labels[i].clone(), Value::from(labels[j].clone()))).collect())
}

fn element(x: &Configuration, e: &SymmetryElement) -> Value {
    json!({
        "map": label_perm(x, &e.perm),
        "order": element_order(&e.perm),
        "isometry": report::isometry(&e.iso),
    })
}

pub fn sym_group(path: &Path, flags: &Flags) -> Result<Output, CliError> {
    let doc = load(path, flags)?;
    let mut frames = Vec::new();
    let mut warnings = Vec::new();
    for (t, x) in doc.configurations(flags.tolerance)? {
        let g = compute_sym_group(&x);
        let kind = match classify_2d(&g) {
            Ok(ty) => json!({
                "name": ty.to_string(),
                "family": match ty.kind { SymmetryKind::Cyclic => "cyclic", SymmetryKind::Dihedral => "dihedral" },
                "m": ty.m,
                "axes_deg": Value::Array(ty.axes_deg.iter().map(|&a| deg(a)).collect()),
            }),
            Err(_) => {
                warnings.push(format!("frame t={t}: symmetry type is only classified for planar configurations"));
                Value::Null
            }
        };
        frames.push(json!({
            "t": num(t),
            "order": g.order(),
            "type": kind,
            "elements": g.elements.iter().map(|e| element(&x, e)).collect::<Vec<_>>(),
        }));
    }
    Ok(Output { inputs: json!([echo(&doc)]), results: json!({ "frames": frames }), warnings })
}

pub fn barcode(path: &Path, flags: &Flags) -> Result<Output, CliError> {
    let doc = load(path, flags)?;
    let pc = doc.persistence(flags.tolerance)?;
    let bc = symmetry_barcode(&pc, flags.include_identity);
    let mut bars: Vec<(usize, Option<usize>, Value)> = bc
        .bars
        .iter()
        .map(|b| {
            let death = b.death.map_or(f64::INFINITY, |d| pc.grid()[d]);
            let v = json!({
                "birth": num(pc.grid()[b.birth]),
                "death": num(death),
                "birth_index": b.birth,
                "death_index": b.death,
                "generator": element(&pc.frames()[b.birth], &b.generator),
            });
            (b.birth, b.death, v)
        })
        .collect();
    bars.sort_by(|a, b| (a.0, a.1.unwrap_or(usize::MAX)).cmp(&(b.0, b.1.unwrap_or(usize::MAX))));
    let bars: Vec<Value> = bars.into_iter().map(|b| b.2).collect();
    Ok(Output { inputs: json!([echo(&doc)]), results: json!({ "bars": bars, "grid": nums(pc.grid()) }), warnings: vec![] })
}

fn options(flags: &Flags) -> PolybarcodeOptions {
    PolybarcodeOptions { translation_equiv: flags.translation_equiv, include_identity: flags.include_identity }
}

pub fn polybarcode_cmd(path: &Path, flags: &Flags) -> Result<Output, CliError> {
    let doc = load(path, flags)?;
    let pc = doc.persistence(flags.tolerance)?;
    let bc = polybarcode(&pc, None, options(flags));
    let entries: Vec<Value> = bc
        .entries
        .iter()
        .map(|e| {
            let iso = e.key.isometry();
            json!({
                "isometry_key": {
                    "linear": report::matrix(&e.key.linear),
                    "translation": e.key.translation.as_deref().map_or(Value::Null, nums),
                    "descriptor": report::descriptor(iso.descriptor()),
                },
                "intervals": report::intervals(&e.polybar),
            })
        })
        .collect();
    Ok(Output { inputs: json!([echo(&doc)]), results: json!({ "polybarcode": entries }), warnings: vec![] })
}

pub fn metrics(a: &Path, b: &Path, flags: &Flags) -> Result<Output, CliError> {
    let (da, db) = (load(a, flags)?, load(b, flags)?);
    let (pa, pb) = (da.persistence(flags.tolerance)?, db.persistence(flags.tolerance)?);
    let wanted = match flags.metric {
        Some(m) => vec![m],
        None => vec![MetricArg::S, MetricArg::E, MetricArg::L, MetricArg::I, MetricArg::Bottleneck],
    };
    let needs_poly = wanted.iter().any(|m| *m != MetricArg::Bottleneck);
    let polys = needs_poly.then(|| (polybarcode(&pa, None, options(flags)), polybarcode(&pb, None, options(flags))));
    let mut out = Map::new();
    for m in wanted {
        let value = match (m, &polys) {
            (MetricArg::Bottleneck, _) => bottleneck(
                &symmetry_barcode(&pa, flags.include_identity).intervals(),
                &symmetry_barcode(&pb, flags.include_identity).intervals(),
            ),
            (m, Some((fa, fb))) => {
                let metric = match m {
                    MetricArg::S => PolyMetric::SymDiff,
                    MetricArg::E => PolyMetric::Expansion,
                    MetricArg::L => PolyMetric::Left,
                    _ => PolyMetric::Interleaving,
                };
                polybarcode_distance(fa, fb, metric)
            }
            (_, None) => unreachable!("polybarcodes are computed for polybarcode metrics"),
        };
        out.insert(m.name().to_string(), num(value));
    }
    Ok(Output { inputs: json!([echo(&da), echo(&db)]), results: json!({ "distances": out }), warnings: vec![] })
}

fn candidates(x: &Configuration, flags: &Flags) -> Result<CandidateSet, CliError> {
    let c = centroid(x);
    let gamma = match x.dim() {
        2 => sample_candidates_2d(&c, flags.axes.unwrap_or(180), flags.rotations.unwrap_or(180)),
        3 => sample_candidates_3d(&c, flags.mirrors.unwrap_or(64), flags.axes.unwrap_or(64), flags.angles.unwrap_or(12)),
        k => return Err(invalid(format!("candidate sampling needs dimension 2 or 3, got {k}"))),
    }
    .map_err(invalid)?;
    Ok(if flags.include_identity { gamma.with_identity() } else { gamma })
}

fn defect_error(e: DefectError) -> CliError {
    invalid(e)
}

fn is_reflection(c: &Candidate) -> bool {
    matches!(c.kind, CandidateKind::Reflection2 { .. } | CandidateKind::Reflection3 { .. })
}

fn best(records: &[DefectRecord], keep: impl Fn(&DefectRecord) -> bool) -> Value {
    records
        .iter()
        .enumerate()
        .filter(|(_, r)| keep(r))
        .min_by(|a, b| a.1.defect.total_cmp(&b.1.defect))
        .map_or(Value::Null, |(i, r)| json!({ "index": i, "record": report::defect_record(r) }))
}

pub fn defect_sweep(path: &Path, flags: &Flags) -> Result<Output, CliError> {
    let doc = load(path, flags)?;
    let p = check_p(flags.p)?;
    let mut frames = Vec::new();
    let mut warnings = Vec::new();
    for (t, x) in doc.configurations(flags.tolerance)? {
        let gamma = candidates(&x, flags)?;
        let threshold = 2.0 * PI / gamma.len().max(1) as f64;
        let records: Vec<DefectRecord> = gamma
            .candidates
            .par_iter()
            .map(|c| evaluate_one(&x, c, p, threshold))
            .collect::<Result<_, _>>()
            .map_err(defect_error)?;
        let near = records.iter().filter(|r| r.near_identity).count();
        if near > 0 {
            warnings.push(format!(
                "frame t={t}: {near} near-identity rotations are excluded from the best rotation"
            ));
        }
        let approx: Vec<Value> = flags
            .epsilons
            .iter()
            .flatten()
            .map(|&eps| {
                let members: Vec<usize> =
                    records.iter().enumerate().filter(|(_, r)| r.standard_defect <= eps).map(|(i, _)| i).collect();
                json!({ "epsilon": num(eps), "members": members })
            })
            .collect();
        frames.push(json!({
            "t": num(t),
            "centroid": nums(&gamma.center),
            "records": records.iter().map(report::defect_record).collect::<Vec<_>>(),
            "best_reflection": best(&records, |r| is_reflection(&r.candidate)),
            "best_rotation": best(&records, |r| {
                !is_reflection(&r.candidate) && r.candidate.kind != CandidateKind::Identity && !r.near_identity
            }),
            "approximate_groups": approx,
        }));
    }
    Ok(Output { inputs: json!([echo(&doc)]), results: json!({ "frames": frames }), warnings })
}

fn labeled_points(x: &Configuration) -> Value {
    Value::Array(x.labels().iter().zip(x.points()).map(|(l, p)| json!({ "label": l, "coords": nums(p) })).collect())
}

pub fn measure_sweep(path: &Path, flags: &Flags) -> Result<Output, CliError> {
    let doc = load(path, flags)?;
    let mut frames = Vec::new();
    for (t, x) in doc.configurations(flags.tolerance)? {
        let c = centroid(&x);
        let mut gamma = match x.dim() {
            2 => sample_candidates_2d(&c, flags.axes.unwrap_or(180), flags.rotations.unwrap_or(2)),
            3 => sample_candidates_3d(&c, flags.mirrors.unwrap_or(64), 1, 2),
            k => return Err(invalid(format!("measure sweeps need dimension 2 or 3, got {k}"))),
        }
        .map_err(invalid)?;
        // rotations join the sweep only when asked for explicitly
        if flags.rotations.is_none() {
            gamma.candidates.retain(is_reflection);
        }
        let values: Vec<(f64, Vec<usize>)> = gamma
            .candidates
            .par_iter()
            .map(|cand| measure(&x, &cand.iso).map(|(v, m)| (v, m.permutation)))
            .collect::<Result<_, _>>()
            .map_err(defect_error)?;
        let records: Vec<Value> = gamma
            .candidates
            .iter()
            .zip(&values)
            .map(|(cand, (v, _))| json!({ "candidate": report::candidate(cand), "measure": num(*v) }))
            .collect();
        let top = values.iter().enumerate().max_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(b.0.cmp(&a.0)));
        let best = match top {
            None => Value::Null,
            Some((i, (v, perm))) => {
                let image = apply(&gamma.candidates[i].iso, &x).map_err(invalid)?;
                json!({
                    "index": i,
                    "candidate": report::candidate(&gamma.candidates[i]),
                    "measure": num(*v),
                    "matching": label_perm(&x, perm),
                    "reflected_points": labeled_points(&image),
                })
            }
        };
        frames.push(json!({ "t": num(t), "centroid": nums(&c), "records": records, "best": best }));
    }
    Ok(Output { inputs: json!([echo(&doc)]), results: json!({ "frames": frames }), warnings: vec![] })
}

pub fn features(path: &Path, flags: &Flags) -> Result<Output, CliError> {
    let doc = load(path, flags)?;
    let p = check_p(flags.p)?;
    let mut frames = Vec::new();
    let mut warnings = Vec::new();
    for (t, x) in doc.configurations(flags.tolerance)? {
        let gamma = candidates(&x, flags)?;
        // default radii include one more shell at a time
        let radii = flags.radii.clone().unwrap_or_else(|| {
            radial_shells(&x).iter().map(|s| s.radius + 2.0 * x.tol()).collect()
        });
        let epsilons = flags
            .epsilons
            .clone()
            .unwrap_or_else(|| (1..=10).map(|i| x.diameter() * i as f64 / 10.0).collect());
        let grid = feature_grid(&x, &radii, &epsilons, &gamma, p).map_err(defect_error)?;
        if !grid.gaps.is_empty() {
            warnings.push(format!("frame t={t}: {} radii select no points", grid.gaps.len()));
        }
        let h0 = probe_h0(&x, &gamma, p).map_err(defect_error)?;
        frames.push(json!({
            "t": num(t),
            "radii": nums(&grid.radii),
            "epsilons": nums(&grid.epsilons),
            "gaps": grid.gaps,
            "features": grid.features().iter().map(|&(c, r, e)| json!({
                "candidate_index": c, "radius": num(r), "epsilon": num(e),
            })).collect::<Vec<_>>(),
            "candidates": gamma.candidates.iter().map(report::candidate).collect::<Vec<_>>(),
            "h0": h0.iter().map(|&(b, d)| json!({ "birth": num(b), "death": num(d) })).collect::<Vec<_>>(),
        }));
    }
    Ok(Output { inputs: json!([echo(&doc)]), results: json!({ "frames": frames }), warnings })
}

pub fn degrees(path: &Path, flags: &Flags) -> Result<Output, CliError> {
    let doc = load(path, flags)?;
    let mut frames = Vec::new();
    for (t, x) in doc.configurations(flags.tolerance)? {
        let prof = degree_profile(&compute_sym_group(&x));
        let histogram: Map<String, Value> =
            prof.order_histogram.iter().map(|(k, v)| (k.to_string(), Value::from(*v))).collect();
        frames.push(json!({
            "t": num(t),
            "degree": prof.degree,
            "group_order": prof.group_order(),
            "order_histogram": histogram,
            "polynomial": prof.polynomial(),
            "entropy": num(prof.entropy),
        }));
    }
    let mut results = json!({ "frames": frames });
    if doc.frames.len() > 1 {
        let w = weighted_path(&doc.persistence(flags.tolerance)?).map_err(invalid)?;
        results["weighted_path"] = json!({ "vertices": w.vertices, "edges": w.edges });
    }
    Ok(Output { inputs: json!([echo(&doc)]), results, warnings: vec![] })
}

pub fn cayley_cmd(path: &Path, flags: &Flags) -> Result<Output, CliError> {
    let doc = load(path, flags)?;
    let pc = doc.persistence(flags.tolerance)?;
    let x = &pc.frames()[0];
    let g = compute_sym_group(x);
    let (graph, source): (CayleyGraph, &str) = match &doc.generators {
        Some(maps) => {
            let s = maps.iter().map(|m| label_map(x, x, m)).collect::<Result<Vec<_>, _>>()?;
            (cayley(&g, &s).map_err(invalid)?, "document")
        }
        None if pc.len() > 1 => (persistence_cayley(&pc, 0, pc.len() - 1, None).map_err(invalid)?, "restricted"),
        None => {
            let s: Vec<Vec<usize>> = g.elements.iter().filter(|e| !e.is_identity()).map(|e| e.perm.clone()).collect();
            (cayley(&g, &s).map_err(invalid)?, "all")
        }
    };
    let results = json!({
        "generator_source": source,
        "vertices": graph.vertices.iter().map(|v| label_perm(x, v)).collect::<Vec<_>>(),
        "generators": graph.generators.iter().map(|v| label_perm(x, v)).collect::<Vec<_>>(),
        "adjacency": graph.adjacency,
        "degree": graph.degree(),
        "spectrum": nums(&laplacian_spectrum(&graph)),
        "components": graph.components(),
    });
    Ok(Output { inputs: json!([echo(&doc)]), results, warnings: vec![] })
}

fn rep_error(e: RepError) -> CliError {
    match e {
        RepError::NegativeMultiplicity { .. } => CliError::Numerical(e.to_string()),
        other => invalid(other),
    }
}

fn bars(v: &[(usize, usize)]) -> Value {
    Value::Array(v.iter().map(|&(b, d)| json!({ "birth": b, "death": d })).collect())
}

pub fn rep_barcode(path: &Path) -> Result<Output, CliError> {
    let doc = input::load_rep(path)?;
    let frames = doc.dims.len();
    if doc.maps.len() + 1 != frames || doc.actions.len() != frames {
        return Err(invalid("need one map per consecutive pair of frames and one action list per frame"));
    }
    let maps = (0..frames - 1)
        .map(|t| input::matrix(&doc.maps[t], doc.dims[t + 1], doc.dims[t], &format!("map {t}")))
        .collect::<Result<Vec<_>, _>>()?;
    let actions = doc
        .actions
        .iter()
        .enumerate()
        .map(|(t, gens)| {
            gens.iter()
                .enumerate()
                .map(|(i, m)| input::matrix(m, doc.dims[t], doc.dims[t], &format!("action {i} at frame {t}")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let seq = ModuleSeq::new(doc.dims.clone(), maps).map_err(rep_error)?;
    let module = interval_decomposition(&seq).map_err(rep_error)?;
    let group = AbelianGroup::new(doc.group.clone()).map_err(rep_error)?;
    let rep = Representation::new(group, seq, actions).map_err(rep_error)?;
    let bc = irreducible_barcode(&rep).map_err(rep_error)?;
    let characters: Vec<Value> = bc
        .characters
        .iter()
        .map(|c| json!({ "character": c.character, "dims": c.dims, "bars": bars(&c.bars) }))
        .collect();
    let inputs = json!([serde_json::to_value(&doc).expect("input documents serialize")]);
    Ok(Output { inputs, results: json!({ "module_bars": bars(&module), "characters": characters }), warnings: vec![] })
}

pub fn fourier_demo(path: Option<&Path>, flags: &Flags) -> Result<Output, CliError> {
    let (g, theta, inputs, signal) = match path {
        Some(p) => {
            let doc = input::load_fourier(p)?;
            let g = CyclicPersistenceGroup::new(doc.orders.clone(), doc.multipliers.clone()).map_err(invalid)?;
            let values = doc.values.iter().map(|e| e.value()).collect();
            let theta = PersistentFunction::from_last(&g, values).map_err(invalid)?;
            (g, theta, json!([serde_json::to_value(&doc).expect("input documents serialize")]), "document")
        }
        None => {
            let g = CyclicPersistenceGroup::doubling(6);
            let theta = match flags.seed {
                Some(seed) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let n = g.orders()[g.last()];
                    let v = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                    PersistentFunction::from_last(&g, v)
                }
                None => PersistentFunction::sampled(&g, |u| Complex64::new((2.0 * PI * u).cos(), 0.0)),
            }
            .map_err(invalid)?;
            (g, theta, json!([]), if flags.seed.is_some() { "random" } else { "cosine" })
        }
    };
    let m = g.last();
    let spectra = (0..=m)
        .map(|s| {
            let sp = persistent_ft(&g, &theta, s, m).map_err(invalid)?;
            Ok(json!({
                "s": s,
                "t": m,
                "order": g.orders()[s],
                "entropy": num(sp.entropy),
                "total_energy": num(sp.total_energy()),
                "dominant": sp.dominant(),
                "coefficients": report::spectrum_rows(&sp.coefficients, &sp.energies),
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let results = json!({
        "signal": signal,
        "orders": g.orders(),
        "multipliers": g.multipliers(),
        "spectra": spectra,
    });
    Ok(Output { inputs, results, warnings: vec![] })
}
