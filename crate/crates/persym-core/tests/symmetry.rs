use persym_core::geometry::{Configuration, Descriptor};
use persym_core::symmetry::{
    classify_2d, compute_sym_group, push_forward, restricted_sym_group, same_symmetry_type,
    SymmetryKind,
};
use proptest::prelude::*;

fn cfg(points: &[&[f64]]) -> Configuration {
    Configuration::unlabeled(points.iter().map(|p| p.to_vec()).collect()).unwrap()
}

/// Every permutation of `0..n` that preserves pairwise distances of `x`.
fn brute_force(x: &Configuration) -> Vec<Vec<usize>> {
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
            let ok = (0..i).all(|a| {
                let d0 = dist(&p[a], &p[i]);
                let d1 = dist(&p[cur[a]], &p[j]);
                (d0 - d1).abs() <= 2.0 * x.tol()
            });
            if ok {
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

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn perms(x: &Configuration) -> Vec<Vec<usize>> {
    let mut v: Vec<_> = compute_sym_group(x).elements.into_iter().map(|e| e.perm).collect();
    v.sort();
    v
}

fn regular_polygon(m: usize, phase: f64) -> Configuration {
    let pts = (0..m)
        .map(|i| {
            let a = phase + 2.0 * std::f64::consts::PI * i as f64 / m as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    Configuration::unlabeled(pts).unwrap()
}

#[test]
fn square_has_dihedral_group_of_order_eight() {
    let x = cfg(&[&[1.0, 1.0], &[-1.0, 1.0], &[-1.0, -1.0], &[1.0, -1.0]]);
    let g = compute_sym_group(&x);
    assert_eq!(g.order(), 8);
    assert!(g.is_closed());
    assert!(g.elements[0].is_identity());
    let t = classify_2d(&g).unwrap();
    assert_eq!(t.kind, SymmetryKind::Dihedral);
    assert_eq!(t.m, 4);
    let expected = [0.0, 45.0, 90.0, 135.0];
    for (a, b) in t.axes_deg.iter().zip(expected) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
    assert_eq!(perms(&x), brute_force(&x));
}

#[test]
fn elements_are_ordered_identity_rotations_reflections() {
    let g = compute_sym_group(&regular_polygon(5, 0.3));
    let mut last_rot = -1.0;
    let mut seen_reflection = false;
    for e in &g.elements[1..] {
        match e.descriptor().unwrap() {
            Descriptor::Rotation2 { theta } => {
                assert!(!seen_reflection);
                assert!(theta > last_rot);
                last_rot = theta;
            }
            Descriptor::Reflection2 { .. } => seen_reflection = true,
            d => panic!("unexpected {d:?}"),
        }
    }
}

#[test]
fn rhombus_and_generic_triangle() {
    let rhombus = cfg(&[&[2.0, 0.0], &[0.0, 1.0], &[-2.0, 0.0], &[0.0, -1.0]]);
    assert_eq!(compute_sym_group(&rhombus).order(), 4);
    let tri = cfg(&[&[0.0, 0.0], &[3.0, 0.0], &[0.5, 2.0]]);
    assert_eq!(compute_sym_group(&tri).order(), 1);
    let iso = cfg(&[&[-1.0, 0.0], &[1.0, 0.0], &[0.0, 3.0]]);
    let g = compute_sym_group(&iso);
    assert_eq!(g.order(), 2);
    assert_eq!(classify_2d(&g).unwrap().kind, SymmetryKind::Dihedral);
}

#[test]
fn collinear_points_in_the_plane_are_keyed_by_permutation() {
    // rotation by pi and the reflection across the y-axis induce the same permutation
    let x = cfg(&[&[-1.0, 0.0], &[0.0, 0.0], &[1.0, 0.0]]);
    let g = compute_sym_group(&x);
    assert_eq!(g.order(), 2);
    assert_eq!(perms(&x), brute_force(&x));
    assert!(g.elements.iter().all(|e| e.descriptor().unwrap().is_proper()));
}

#[test]
fn one_dimensional_groups() {
    let x = cfg(&[&[-2.0], &[0.0], &[2.0]]);
    assert_eq!(compute_sym_group(&x).order(), 2);
    let y = cfg(&[&[-2.0], &[0.0], &[3.0]]);
    assert_eq!(compute_sym_group(&y).order(), 1);
}

#[test]
fn platonic_groups_in_space() {
    let tet = cfg(&[&[1.0, 1.0, 1.0], &[1.0, -1.0, -1.0], &[-1.0, 1.0, -1.0], &[-1.0, -1.0, 1.0]]);
    let g = compute_sym_group(&tet);
    assert_eq!(g.order(), 24);
    assert!(g.is_closed());
    assert_eq!(perms(&tet), brute_force(&tet));
    let mut cube = Vec::new();
    for a in [-1.0, 1.0] {
        for b in [-1.0, 1.0] {
            for c in [-1.0, 1.0] {
                cube.push(vec![a, b, c]);
            }
        }
    }
    let cube = Configuration::unlabeled(cube).unwrap();
    assert_eq!(compute_sym_group(&cube).order(), 48);
}

#[test]
fn every_element_realizes_its_permutation() {
    let x = cfg(&[&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, -2.0, 0.0], &[0.0, 0.0, 0.5]]);
    let g = compute_sym_group(&x);
    assert_eq!(perms(&x), brute_force(&x));
    for e in &g.elements {
        assert!(e.iso.is_orthogonal(1e-9));
        for (i, &j) in e.perm.iter().enumerate() {
            assert!(dist(&e.iso.apply_point(&x.points()[i]), &x.points()[j]) < 1e-9);
        }
        let back = e.descriptor().unwrap().matrix();
        assert!((back - e.iso.linear()).abs().max() < 1e-9);
    }
}

#[test]
fn restriction_and_push_forward() {
    let square = cfg(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0]]);
    let rhombus = cfg(&[&[2.0, 0.0], &[0.0, 1.0], &[-2.0, 0.0], &[0.0, -1.0]]);
    let id = [0, 1, 2, 3];
    let r = restricted_sym_group(&square, &id, &rhombus).unwrap();
    assert_eq!(r.order(), 4);
    for s in &r.elements {
        let t = push_forward(&id, s, &rhombus).unwrap();
        assert_eq!(t.perm, s.perm);
    }
    let quarter = compute_sym_group(&square)
        .elements
        .into_iter()
        .find(|e| matches!(e.descriptor(), Some(Descriptor::Rotation2 { theta }) if (theta - std::f64::consts::FRAC_PI_2).abs() < 1e-9))
        .unwrap();
    assert!(push_forward(&id, &quarter, &rhombus).is_err());
    assert!(same_symmetry_type(&r, &compute_sym_group(&rhombus)).unwrap());
}

#[test]
fn three_dimensional_type_comparison_is_refused() {
    let tet = cfg(&[&[1.0, 1.0, 1.0], &[1.0, -1.0, -1.0], &[-1.0, 1.0, -1.0], &[-1.0, -1.0, 1.0]]);
    let g = compute_sym_group(&tet);
    assert!(same_symmetry_type(&g, &g).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_brute_force_on_small_integer_sets(
        raw in prop::collection::btree_set((-2i32..=2, -2i32..=2), 2..7)
    ) {
        let pts: Vec<Vec<f64>> = raw.into_iter().map(|(a, b)| vec![a as f64, b as f64]).collect();
        let x = Configuration::unlabeled(pts).unwrap();
        let g = compute_sym_group(&x);
        prop_assert!(g.is_closed());
        let mut dedup = perms(&x);
        dedup.dedup();
        prop_assert_eq!(dedup, brute_force(&x));
    }

    #[test]
    fn invariant_under_rigid_motion(
        raw in prop::collection::btree_set((-3i32..=3, -3i32..=3, -1i32..=1), 3..7),
        theta in 0.0f64..std::f64::consts::TAU, tx in -5.0f64..5.0
    ) {
        let pts: Vec<Vec<f64>> = raw.iter().map(|&(a, b, c)| vec![a as f64, b as f64, c as f64]).collect();
        let moved: Vec<Vec<f64>> = pts.iter().map(|p| {
            let (c, s) = (theta.cos(), theta.sin());
            vec![c * p[0] - s * p[1] + tx, s * p[0] + c * p[1] - tx, p[2] + 0.5 * tx]
        }).collect();
        let x = Configuration::unlabeled(pts).unwrap();
        let y = Configuration::unlabeled(moved).unwrap();
        prop_assert_eq!(perms(&x), perms(&y));
    }
}
