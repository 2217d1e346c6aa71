//! Acceptance criteria 1 to 11, one status line each.
//!
//! Runs without the libtest harness so the lines are always printed. Exits non-zero
//! when a criterion's status differs from the expected one.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::process::ExitCode;

use nalgebra::DMatrix;
use num_complex::Complex64;
use persym_core::defect::{
    candidate_metric, defect, evaluate, measure, operator_bound_constant, sample_candidates_2d, CandidateKind,
};
use persym_core::degrees::{cayley_of_perms, degree_profile, laplacian_spectrum, weighted_path};
use persym_core::fourier::{
    correlation, dft, inversion, persistent_convolution, persistent_ft, persistent_laplacian, CyclicPersistenceGroup,
    PersistentFunction,
};
use persym_core::geometry::{apply, centroid, wasserstein, Configuration, Descriptor, Isometry};
use persym_core::jacobi::hermitian_eigenvalues;
use persym_core::metrics::{d_expansion, d_left, d_match_sym, d_sym_diff, keyed_distance, IntervalSet, PolyMetric};
use persym_core::persistence::{
    polybar_indices, polybarcode, polybarcode_distance, symmetry_barcode, PersistenceConfiguration,
    PolybarcodeOptions,
};
use persym_core::reps::{
    complexify, interval_decomposition, irreducible_barcode, trace_on_image, AbelianGroup, Bar, CMatrix, ModuleSeq,
    Representation,
};
use persym_core::symmetry::{classify_2d, compose, compute_sym_group, SymmetryGroup, SymmetryKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose reference value conflicts with the definitions; see the decisions ledger.
const EXPECTED_FAIL: &[u32] = &[2, 5];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn labeled(points: &[[f64; 2]], labels: &[&str]) -> Configuration {
    Configuration::new(points.iter().map(|p| p.to_vec()).collect(), labels.iter().map(|s| s.to_string()).collect())
        .unwrap()
}

fn unlabeled(points: Vec<Vec<f64>>) -> Configuration {
    Configuration::unlabeled(points).unwrap()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn triangle() -> Configuration {
    let h = 3f64.sqrt() / 2.0;
    labeled(&[[0.0, 1.0], [-h, -0.5], [h, -0.5]], &["A", "B", "C"])
}

fn criterion_1() -> Outcome {
    let square = unlabeled(vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]]);
    let sq = classify_2d(&compute_sym_group(&square)).unwrap();
    let tri = classify_2d(&compute_sym_group(&triangle())).unwrap();
    let mut axes = tri.axes_deg.clone();
    axes.sort_by(|a, b| a.total_cmp(b));
    let axes_ok = axes.len() == 3 && axes.iter().zip([30.0, 90.0, 150.0]).all(|(a, b)| (a - b).abs() <= 0.01);
    let scalene = compute_sym_group(&unlabeled(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.6, 0.7]])).order();
    let tet = compute_sym_group(&unlabeled(vec![
        vec![1.0, 1.0, 1.0],
        vec![1.0, -1.0, -1.0],
        vec![-1.0, 1.0, -1.0],
        vec![-1.0, -1.0, 1.0],
    ]))
    .order();
    let pass = sq.group_order() == 8
        && sq.kind == SymmetryKind::Dihedral
        && sq.m == 4
        && tri.group_order() == 6
        && tri.kind == SymmetryKind::Dihedral
        && tri.m == 3
        && axes_ok
        && scalene == 1
        && tet == 24;
    outcome(pass, format!("square {sq} order {}, triangle {tri} axes {axes:.4?}, scalene order {scalene}, tetrahedron order {tet}", sq.group_order()))
}

fn frame4(points: &[[f64; 2]]) -> Configuration {
    labeled(points, &["A", "B", "C", "D"])
}

fn rhombus_square_kite() -> PersistenceConfiguration {
    let frames = vec![
        frame4(&[[0.0, -1.2], [0.0, 1.2], [-1.0, 0.0], [1.0, 0.0]]),
        frame4(&[[0.0, -1.0], [0.0, 1.0], [-1.0, 0.0], [1.0, 0.0]]),
        frame4(&[[0.0, -1.0], [0.0, 1.0], [-1.0, 0.0], [1.2, 0.0]]),
    ];
    PersistenceConfiguration::from_labels(vec![0.0, 1.0, 2.0], frames).unwrap()
}

fn square_square_kite() -> PersistenceConfiguration {
    let frames = vec![
        frame4(&[[0.0, -1.0], [0.0, 1.0], [-1.0, 0.0], [1.0, 0.0]]),
        frame4(&[[0.0, -1.0], [0.0, 1.0], [-1.0, 0.0], [1.0, 0.0]]),
        frame4(&[[0.0, -1.0], [0.0, 1.0], [-1.0, 0.0], [1.2, 0.0]]),
    ];
    PersistenceConfiguration::from_labels(vec![0.0, 1.0, 2.0], frames).unwrap()
}

fn criterion_2() -> Outcome {
    let mut bars = symmetry_barcode(&rhombus_square_kite(), false).intervals();
    bars.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let inf = f64::INFINITY;
    let reference = vec![(0.0, 1.0), (0.0, 1.0), (0.0, 2.0), (1.0, 2.0), (1.0, 2.0), (1.0, 2.0), (1.0, 2.0)];
    let by_definition = vec![(0.0, 2.0), (0.0, 2.0), (0.0, inf), (1.0, 2.0), (1.0, 2.0), (1.0, 2.0), (1.0, 2.0)];
    let definition_holds = bars == by_definition;
    outcome(
        bars == reference,
        format!(
            "computed {bars:?}; reference {{[0,1)x2,[0,2),[1,2)x4}}; push-forward survival gives {{[0,2)x2,[0,inf),[1,2)x4}} ({})",
            if definition_holds { "reproduced" } else { "NOT reproduced" }
        ),
    )
}

fn criterion_3() -> Outcome {
    let set = |c: &[(f64, f64)]| IntervalSet::new(c.to_vec()).unwrap();
    let whole = set(&[(0.0, 2.0)]);
    let early = set(&[(0.0, 1.0)]);
    let point = set(&[(0.0, 0.0)]);
    // pi, tau, tau^2, tau^3, pi tau, pi tau^2, pi tau^3
    let square_start = [&whole, &early, &early, &early, &early, &early, &early];
    let rhombus_start = [&whole, &point, &early, &point, &point, &early, &point];
    let pairs: Vec<(IntervalSet, IntervalSet)> =
        square_start.iter().zip(rhombus_start).map(|(a, b)| ((*a).clone(), b.clone())).collect();
    let d = [PolyMetric::SymDiff, PolyMetric::Expansion, PolyMetric::Left, PolyMetric::Interleaving]
        .map(|m| keyed_distance(&pairs, m));
    let pass = d == [4.0, 1.0, 0.0, 0.0];
    let f = polybarcode(&rhombus_square_kite(), None, PolybarcodeOptions::default());
    let g = polybarcode(&square_square_kite(), None, PolybarcodeOptions::default());
    let frames = [PolyMetric::SymDiff, PolyMetric::Expansion, PolyMetric::Left, PolyMetric::Interleaving]
        .map(|m| polybarcode_distance(&f, &g, m));
    outcome(
        pass,
        format!("reference polybarcodes give S,E,L,I = {d:?}; polybarcodes computed from the frames give {frames:?}"),
    )
}

fn quad() -> Configuration {
    unlabeled(vec![vec![-1.0, 1.0], vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 0.0]])
}

fn criterion_4() -> Outcome {
    let x = quad();
    let c = centroid(&x);
    let mirror = defect(&x, &Isometry::reflection_2d(FRAC_PI_2, &c), 2.0).unwrap().0;
    let half = defect(&x, &Isometry::rotation_2d(PI, &c), 2.0).unwrap().0;
    let gamma = sample_candidates_2d(&c, 180, 180).unwrap();
    let recs = evaluate(&x, &gamma, 2.0, None).unwrap();
    let (best, axis) = recs
        .iter()
        .filter_map(|r| match r.candidate.kind {
            CandidateKind::Reflection2 { axis_deg } => Some((r.defect, axis_deg)),
            _ => None,
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    let pass = (mirror - 2f64.sqrt()).abs() <= 1e-9
        && (half - 1.0).abs() <= 1e-9
        && (best - 0.6130).abs() <= 1e-3
        && (axis - 171.0).abs() <= 1.0;
    outcome(pass, format!("mirror {mirror:.12}, half turn {half:.12}, sweep minimum {best:.6} at {axis} deg"))
}

fn measure_sweep(x: &Configuration) -> (f64, f64, Configuration) {
    let gamma = sample_candidates_2d(&centroid(x), 180, 2).unwrap();
    let (best, deg, iso) = gamma
        .candidates
        .iter()
        .filter_map(|c| match c.kind {
            CandidateKind::Reflection2 { axis_deg } => Some((measure(x, &c.iso).unwrap().0, axis_deg, c.iso.clone())),
            _ => None,
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    (best, deg, apply(&iso, x).unwrap())
}

fn matches_points(x: &Configuration, reference: &[[f64; 2]]) -> bool {
    reference.iter().all(|p| x.points().iter().any(|q| dist(q, p) <= 1e-3))
}

fn criterion_5() -> Outcome {
    let reference = [[0.1932, 0.9090], [2.0203, 0.0955], [-0.2135, -0.0045]];
    let x = unlabeled(vec![vec![0.0, 0.0], vec![0.0, 2.0], vec![1.0, 0.0]]);
    let diag = measure(&x, &Isometry::reflection_2d(PI / 4.0, &[0.0, 0.0])).unwrap().0;
    let (best, deg, image) = measure_sweep(&x);
    let value_ok = (diag - 0.8).abs() < 1e-12 && (best - 0.9899).abs() <= 1e-4;
    let angle_ok = (deg - 168.0).abs() <= 1.0;
    let points_ok = matches_points(&image, &reference);
    let transposed = unlabeled(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]]);
    let (tb, td, timage) = measure_sweep(&transposed);
    let transposed_ok = (tb - 0.9899).abs() <= 1e-4 && (td - 168.0).abs() <= 1.0 && matches_points(&timage, &reference);
    outcome(
        value_ok && angle_ok && points_ok,
        format!(
            "diagonal mirror {diag:.12}; sweep maximum {best:.6} ({}) at {deg} deg ({}), reference points {}; the x/y transposed set gives {tb:.6} at {td} deg with the reference points {}",
            pass_word(value_ok),
            pass_word(angle_ok),
            if points_ok { "matched" } else { "not matched" },
            if transposed_ok { "matched" } else { "NOT matched" },
        ),
    )
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn criterion_6() -> Outcome {
    let x = unlabeled(vec![vec![-1.0], vec![1.0]]);
    let y = unlabeled(vec![vec![0.0], vec![2.0]]);
    let pi = Isometry::about(DMatrix::from_element(1, 1, -1.0), &[0.0]);
    let gap = (defect(&x, &pi, 1.0).unwrap().0 - defect(&y, &pi, 1.0).unwrap().0).abs();
    let w = wasserstein(&x, &y, 1.0).unwrap().0;
    outcome(gap == 4.0 && 2.0 * w == 4.0, format!("|mu(X) - mu(Y)| = {gap}, 2 W_1 = {}", 2.0 * w))
}

fn criterion_7() -> Outcome {
    let p = degree_profile(&compute_sym_group(&triangle()));
    let h = 3f64.sqrt() / 2.0;
    let s3 = 3f64.sqrt();
    let frames = [[-s3, 1.0], [0.0, 0.0], [s3, 1.0]]
        .iter()
        .map(|q| labeled(&[[0.0, 1.0], [-h, -0.5], [h, -0.5], *q], &["A", "B", "C", "P"]))
        .collect();
    let pc = PersistenceConfiguration::from_labels(vec![0.0, 1.0, 2.0], frames).unwrap();
    let w = weighted_path(&pc).unwrap();
    let pass = p.degree == 13 && p.polynomial() == "t + 3t^2 + 2t^3" && w.vertices == [7, 13, 7] && w.edges == [3, 3];
    outcome(pass, format!("degree {} polynomial {}, path {:?} edges {:?}", p.degree, p.polynomial(), w.vertices, w.edges))
}

fn find(g: &SymmetryGroup, pred: impl Fn(&Descriptor) -> bool) -> Vec<usize> {
    g.elements.iter().find(|e| pred(&e.descriptor().unwrap())).unwrap().perm.clone()
}

fn criterion_8() -> Outcome {
    let g = compute_sym_group(&frame4(&[[0.0, -1.0], [0.0, 1.0], [-1.0, 0.0], [1.0, 0.0]]));
    let r = find(&g, |d| matches!(d, Descriptor::Rotation2 { theta } if (theta - FRAC_PI_2).abs() < 1e-9));
    let s = find(&g, |d| matches!(d, Descriptor::Reflection2 { alpha } if alpha.abs() < 1e-9));
    let mut rs = vec![(0..4).collect::<Vec<usize>>()];
    for _ in 0..3 {
        rs.push(compose(&r, rs.last().unwrap()));
    }
    let mut all = rs.clone();
    all.extend(rs.iter().map(|x| compose(&s, x)));
    let gens = vec![all[2].clone(), all[4].clone(), all[6].clone()];
    let cay = cayley_of_perms(&all, &gens).unwrap();
    let table: [[u8; 8]; 8] = [
        [0, 0, 1, 0, 1, 0, 1, 0],
        [0, 0, 0, 1, 0, 1, 0, 1],
        [1, 0, 0, 0, 1, 0, 1, 0],
        [0, 1, 0, 0, 0, 1, 0, 1],
        [1, 0, 1, 0, 0, 0, 1, 0],
        [0, 1, 0, 1, 0, 0, 0, 1],
        [1, 0, 1, 0, 1, 0, 0, 0],
        [0, 1, 0, 1, 0, 1, 0, 0],
    ];
    let table_ok = (0..8).all(|i| cay.adjacency[i] == table[i]);
    let spec = laplacian_spectrum(&cay);
    let spec_ok = spec.iter().zip([0.0, 0.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.0]).all(|(a, b)| (a - b).abs() <= 1e-8);
    outcome(table_ok && spec_ok, format!("adjacency {}, spectrum {spec:.10?}", if table_ok { "matches" } else { "differs" }))
}

fn real(rows: usize, cols: usize, v: &[f64]) -> CMatrix {
    complexify(&DMatrix::from_row_slice(rows, cols, v))
}

fn criterion_9() -> Outcome {
    let seq = ModuleSeq::new(vec![2, 2, 1], vec![real(2, 2, &[1.0, 0.0, 0.0, 1.0]), real(1, 2, &[1.0, 0.0])]).unwrap();
    let sign = real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let rep = Representation::new(
        AbelianGroup::new(vec![2]).unwrap(),
        seq,
        vec![vec![sign.clone()], vec![sign], vec![real(1, 1, &[1.0])]],
    )
    .unwrap();
    let bc = irreducible_barcode(&rep).unwrap();
    let trivial = bc.get(&[0]).unwrap().bars.clone();
    let signed = bc.get(&[1]).unwrap().bars.clone();
    let f = real(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    let e = real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    let a = real(3, 3, &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0]);
    let (ce, ca) = (trace_on_image(&f, &e, 1.0), trace_on_image(&f, &a, 1.0));
    let pass = trivial == [(0, 2)] && signed == [(0, 1)] && ce.re.round() == 2.0 && ca.re.round() == 0.0
        && (ce - Complex64::new(2.0, 0.0)).norm() < 1e-12
        && ca.norm() < 1e-12;
    outcome(pass, format!("trivial {trivial:?}, sign {signed:?}, chi(e) = {:.1}, chi(a) = {:.1}", ce.re, ca.re))
}

fn criterion_10() -> Outcome {
    let g = CyclicPersistenceGroup::doubling(6);
    let cos = PersistentFunction::sampled(&g, |u| Complex64::new((2.0 * PI * u).cos(), 0.0)).unwrap();
    let sin = PersistentFunction::sampled(&g, |u| Complex64::new((2.0 * PI * u).sin(), 0.0)).unwrap();
    let mut worst: f64 = 0.0;
    let mut entropy_err: f64 = 0.0;
    let mut corr_max: f64 = 0.0;
    for s in 3..=5 {
        let n = 1usize << s;
        for t in s..=6 {
            let spec = persistent_ft(&g, &cos, s, t).unwrap();
            for (k, z) in spec.coefficients.iter().enumerate() {
                let want = if k == 1 || k == n - 1 { (n / 2) as f64 } else { 0.0 };
                worst = worst.max((z - Complex64::new(want, 0.0)).norm());
            }
            entropy_err = entropy_err.max((spec.entropy - LN_2).abs());
            corr_max = corr_max.max(correlation(&g, &cos, &sin, s, t).unwrap().norm());
        }
    }
    outcome(
        worst <= 1e-9 && entropy_err <= 1e-9 && corr_max <= 1e-9,
        format!("coefficient error {worst:.2e}, entropy error {entropy_err:.2e}, correlation {corr_max:.2e}"),
    )
}

/// Every distance-preserving permutation, by exhaustive search.
fn brute_force_perms(x: &Configuration) -> Vec<Vec<usize>> {
    fn rec(x: &Configuration, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = x.len();
        let p = x.points();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let i = cur.len();
        for j in 0..n {
            if cur.contains(&j) {
                continue;
            }
            if (0..i).all(|a| (dist(&p[a], &p[i]) - dist(&p[cur[a]], &p[j])).abs() <= 2.0 * x.tol()) {
                cur.push(j);
                rec(x, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(x, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn suite_groups(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=7);
        let mut pts: Vec<Vec<f64>> = Vec::new();
        while pts.len() < n {
            let p = vec![rng.gen_range(-2..=2) as f64, rng.gen_range(-2..=2) as f64];
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let x = unlabeled(pts);
        let mut got: Vec<Vec<usize>> = compute_sym_group(&x).elements.into_iter().map(|e| e.perm).collect();
        got.sort();
        if got != brute_force_perms(&x) {
            bad += 1;
        }
    }
    bad
}

fn random_set(rng: &mut ChaCha8Rng) -> IntervalSet {
    let k = rng.gen_range(0..=3);
    let mut ends: Vec<f64> = (0..2 * k).map(|_| rng.gen_range(0..40) as f64 * 0.25).collect();
    ends.sort_by(|a, b| a.total_cmp(b));
    ends.dedup();
    if ends.len() % 2 == 1 {
        ends.pop();
    }
    let mut comps: Vec<(f64, f64)> = ends.chunks(2).map(|c| (c[0], c[1])).collect();
    if let Some(last) = comps.last_mut() {
        if rng.gen_bool(0.2) {
            last.1 = f64::INFINITY;
        }
    }
    IntervalSet::new(comps).unwrap()
}

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    loop {
        let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]).collect();
        let ok = (0..n).all(|i| (0..i).all(|j| dist(&pts[i], &pts[j]) > 1e-3));
        if ok {
            return unlabeled(pts);
        }
    }
}

fn random_iso(rng: &mut ChaCha8Rng, c: &[f64]) -> Isometry {
    let th = rng.gen_range(0.0..2.0 * PI);
    if rng.gen_bool(0.5) {
        Isometry::reflection_2d(th, c)
    } else {
        Isometry::rotation_2d(th, c)
    }
}

fn suite_triangles(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    let tol = 1e-9;
    for _ in 0..500 {
        let (a, b, c) = (random_set(rng), random_set(rng), random_set(rng));
        for d in [d_sym_diff, d_expansion] {
            if d(&a, &c) > d(&a, &b) + d(&b, &c) + tol {
                bad += 1;
            }
        }
        let n = rng.gen_range(3..=6);
        let x = random_points(rng, n);
        let isos: Vec<Isometry> = (0..3).map(|_| random_iso(rng, &[0.1, -0.2])).collect();
        let p = if rng.gen_bool(0.5) { 1.0 } else { 2.0 };
        let m = |i: usize, j: usize| candidate_metric(&x, &isos[i], &isos[j], p).unwrap();
        if m(0, 2) > m(0, 1) + m(1, 2) + tol {
            bad += 1;
        }
        let (y, z) = (random_points(rng, n), random_points(rng, n));
        let w = |u: &Configuration, v: &Configuration| wasserstein(u, v, p).unwrap().0;
        if w(&x, &z) > w(&x, &y) + w(&y, &z) + tol {
            bad += 1;
        }
    }
    bad
}

fn suite_lipschitz(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for _ in 0..500 {
        let n = rng.gen_range(3..=6);
        let x = random_points(rng, n);
        let y = unlabeled(
            x.points().iter().map(|q| vec![q[0] + rng.gen_range(-0.5..0.5), q[1] + rng.gen_range(-0.5..0.5)]).collect(),
        );
        let p = if rng.gen_bool(0.5) { 1.0 } else { 2.0 };
        let c = centroid(&x);
        let (pi, sigma) = (random_iso(rng, &c), random_iso(rng, &c));
        let mu = |u: &Configuration, g: &Isometry| defect(u, g, p).unwrap().0;
        if (mu(&x, &pi) - mu(&y, &pi)).abs() > 2.0 * wasserstein(&x, &y, p).unwrap().0 + 1e-7 {
            bad += 1;
        }
        let gap = (mu(&x, &pi) - mu(&x, &sigma)).abs();
        if gap > candidate_metric(&x, &pi, &sigma, p).unwrap() + 1e-7 {
            bad += 1;
        }
        if gap > operator_bound_constant(&x, &c, p) * pi.op_norm_diff(&sigma) + 1e-7 {
            bad += 1;
        }
    }
    bad
}

fn four_tracks() -> PersistenceConfiguration {
    let q = |t: f64| if t <= 1.0 { t } else if t <= 2.0 { 1.0 } else { t - 1.0 };
    let grid: Vec<f64> = (0..6).map(|i| i as f64).collect();
    let frames = grid
        .iter()
        .map(|&t| {
            let (a, b) = (1.0 + q(t), 2.0 + q(t - 1.0));
            unlabeled(vec![vec![a, b], vec![-a, b], vec![a, -b], vec![-a, -b]])
        })
        .collect();
    PersistenceConfiguration::from_labels(grid, frames).unwrap()
}

fn suite_closure(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let mut histories = vec![four_tracks(), rhombus_square_kite(), square_square_kite()];
    for _ in 0..20 {
        // a regular polygon whose vertices are nudged on some frames
        let m = rng.gen_range(3..=6);
        let frames = (0..4)
            .map(|_| {
                let jitter = rng.gen_bool(0.5);
                unlabeled(
                    (0..m)
                        .map(|i| {
                            let a = 2.0 * PI * i as f64 / m as f64;
                            let r = if jitter && i == 0 { 1.3 } else { 1.0 };
                            vec![r * a.cos(), r * a.sin()]
                        })
                        .collect(),
                )
            })
            .collect();
        histories.push(PersistenceConfiguration::from_labels(vec![0.0, 1.0, 2.0, 3.0], frames).unwrap());
    }
    let mut bad = 0;
    for pc in &histories {
        let bc = polybarcode(pc, None, PolybarcodeOptions { include_identity: true, ..Default::default() });
        let isos: Vec<Isometry> = bc.entries.iter().map(|e| e.key.isometry()).collect();
        for a in &isos {
            let ia = polybar_indices(pc, a, false);
            if ia != polybar_indices(pc, &a.inverse(), false) {
                bad += 1;
            }
            let mut ak = a.clone();
            for _ in 2..5 {
                ak = ak.compose(a);
                let ik = polybar_indices(pc, &ak, false);
                if !ia.iter().all(|i| ik.contains(i)) {
                    bad += 1;
                }
            }
            for b in &isos {
                let ib = polybar_indices(pc, b, false);
                let iab = polybar_indices(pc, &a.compose(b), false);
                if !ia.iter().filter(|i| ib.contains(i)).all(|i| iab.contains(i)) {
                    bad += 1;
                }
            }
        }
    }
    (bad, histories.len())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn suite_fourier(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for _ in 0..200 {
        let frames = rng.gen_range(1..=4);
        let orders: Vec<usize> = (0..frames).map(|_| rng.gen_range(1..=12)).collect();
        let multipliers = (0..frames - 1)
            .map(|t| (orders[t + 1] / gcd(orders[t], orders[t + 1])) * rng.gen_range(0..=orders[t + 1]))
            .collect();
        let g = CyclicPersistenceGroup::new(orders.clone(), multipliers).unwrap();
        let n = *orders.last().unwrap();
        let random = |rng: &mut ChaCha8Rng| {
            let v = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            PersistentFunction::from_last(&g, v).unwrap()
        };
        let (theta, eta) = (random(rng), random(rng));
        let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        for y in 0..n {
            w[(n - y) % n] = w[y];
        }
        let weight = PersistentFunction::from_last(&g, w.into_iter().map(|x| Complex64::new(x, 0.0)).collect()).unwrap();
        let m = g.last();
        for s in 0..=m {
            let ns = orders[s];
            let norm2: f64 = theta.frame(s).iter().map(|z| z.norm_sqr()).sum();
            for t in s..=m {
                let spec = persistent_ft(&g, &theta, s, t).unwrap();
                if (spec.total_energy() / ns as f64 - norm2).abs() > 1e-9 * (1.0 + norm2) {
                    bad += 1;
                }
                let back = inversion(&g, &spec).unwrap();
                if back.iter().zip(theta.frame(s)).any(|(a, b)| (a - b).norm() > 1e-9) {
                    bad += 1;
                }
                let lhs = dft(&persistent_convolution(&g, &theta, &eta, s, t).unwrap());
                let eta_hat = dft(eta.frame(t));
                for j in 0..orders[t] {
                    let rhs = spec.coefficients[g.pullback_index(s, t, j).unwrap()] * eta_hat[j];
                    if (lhs[j] - rhs).norm() > 1e-9 * (1.0 + rhs.norm()) {
                        bad += 1;
                    }
                }
                let l = persistent_laplacian(&g, &weight, s, t).unwrap();
                if (&l - l.adjoint()).iter().any(|z| z.norm() > 1e-12)
                    || hermitian_eigenvalues(&l).iter().any(|&e| e < -1e-9)
                {
                    bad += 1;
                }
            }
        }
    }
    bad
}

fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d, d, |i, j| if i == j { 2.0 } else { 0.0 } + rng.gen_range(-0.7..0.7))
}

fn suite_intervals(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    let frames = 5;
    for _ in 0..100 {
        let mut bars: Vec<Bar> = Vec::new();
        for _ in 0..rng.gen_range(0..=6) {
            let b = rng.gen_range(0..frames);
            let d = rng.gen_range(b..frames);
            if (b..=d).all(|t| bars.iter().filter(|x| x.0 <= t && t <= x.1).count() < 3) {
                bars.push((b, d));
            }
        }
        let slots: Vec<Vec<usize>> =
            (0..frames).map(|t| (0..bars.len()).filter(|&i| bars[i].0 <= t && t <= bars[i].1).collect()).collect();
        let dims: Vec<usize> = slots.iter().map(|s| s.len()).collect();
        let basis: Vec<DMatrix<f64>> = dims.iter().map(|&d| random_invertible(rng, d)).collect();
        let maps: Vec<DMatrix<f64>> = (0..frames - 1)
            .map(|t| {
                let mut f = DMatrix::zeros(dims[t + 1], dims[t]);
                for (col, bar) in slots[t].iter().enumerate() {
                    if let Some(row) = slots[t + 1].iter().position(|x| x == bar) {
                        f[(row, col)] = 1.0;
                    }
                }
                &basis[t + 1] * f * basis[t].clone().try_inverse().unwrap()
            })
            .collect();
        let Ok(got) = interval_decomposition(&ModuleSeq::from_real(dims.clone(), &maps).unwrap()) else {
            bad += 1;
            continue;
        };
        bars.sort();
        let tiled = dims.iter().enumerate().all(|(t, &d)| got.iter().filter(|b| b.0 <= t && t <= b.1).count() == d);
        if got != bars || !tiled {
            bad += 1;
        }
    }
    bad
}

fn suite_orderings(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for _ in 0..500 {
        let (a, b) = (random_set(rng), random_set(rng));
        let e = d_expansion(&a, &b);
        if d_match_sym(&a, &b) > 2.0 * e + 1e-12 || d_left(&a, &b) > e + 1e-12 {
            bad += 1;
        }
    }
    bad
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let a = suite_groups(&mut rng);
    let b = suite_triangles(&mut rng);
    let c = suite_lipschitz(&mut rng);
    let (d, histories) = suite_closure(&mut rng);
    let e = suite_fourier(&mut rng);
    let f = suite_intervals(&mut rng);
    let g = suite_orderings(&mut rng);
    let total = a + b + c + d + e + f + g;
    outcome(
        total == 0,
        format!(
            "violations: (a) groups {a}/200, (b) triangle {b}/500, (c) Lipschitz {c}/500, (d) closure {d} over {histories} histories, (e) Fourier {e}/200, (f) intervals {f}/100, (g) orderings {g}/500"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut unexpected = Vec::new();
    for (id, run) in criteria {
        let o = run();
        println!("criterion {id:>2}: {} | {}", pass_word(o.pass), o.detail);
        if o.pass == EXPECTED_FAIL.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: statuses match expectations (expected failures: {EXPECTED_FAIL:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected status for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
