use std::sync::OnceLock;

use k3period::monodromy::loops::{clearance, t4_mu_roots};
use k3period::monodromy::*;
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-10;

fn conn() -> &'static NumericConnection {
    static C: OnceLock<NumericConnection> = OnceLock::new();
    C.get_or_init(|| NumericConnection::derived().expect("connection"))
}

fn library() -> &'static (Vec<LoopSpec>, Vec<FundamentalMatrix>) {
    static L: OnceLock<(Vec<LoopSpec>, Vec<FundamentalMatrix>)> = OnceLock::new();
    L.get_or_init(|| {
        let lib = loop_library(default_base_point()).expect("library");
        let ms = lib.iter().map(|l| continue_along(conn(), l, TOL).expect("integrates")).collect();
        (lib, ms)
    })
}

fn dist_to_identity(m: &CMatrix) -> f64 {
    (m - CMatrix::identity()).norm()
}

#[test]
fn trivial_loop_is_identity() {
    let m = continue_along(conn(), &trivial_loop(default_base_point()), TOL).unwrap();
    assert!(dist_to_identity(&m.value) < 10.0 * TOL, "{:e}", dist_to_identity(&m.value));
}

#[test]
fn loop_then_reverse_is_identity() {
    for l in &library().0 {
        let m = continue_along(conn(), &l.then(&l.reversed().unwrap()), TOL).unwrap();
        assert!(dist_to_identity(&m.value) < 10.0 * TOL, "{}: {:e}", l.name, dist_to_identity(&m.value));
    }
}

#[test]
fn composite_is_product() {
    let (lib, ms) = library();
    for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
        let m = continue_along(conn(), &lib[i].then(&lib[j]), TOL).unwrap();
        // first loop acts first
        let want = ms[j].value * ms[i].value;
        assert!((m.value - want).norm() < 100.0 * TOL, "{i},{j}: {:e}", (m.value - want).norm());
    }
}

#[test]
fn halving_tolerance_stays_within_estimate() {
    let (lib, ms) = library();
    for (l, m) in lib.iter().zip(ms) {
        let h = continue_along(conn(), l, TOL / 2.0).unwrap();
        let d = (h.value - m.value).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(d < m.error_estimate, "{}: {d:e} vs {:e}", l.name, m.error_estimate);
    }
}

#[test]
fn library_invariants() {
    let (lib, ms) = library();
    assert_eq!(lib.len(), 4);
    let want: [&[i64]; 4] = [&[1, -4, 6, -4, 1], &[1, -4, 6, -4, 1], &[-1, 2, 0, -2, 1], &[-1, 2, 0, -2, 1]];
    for ((l, m), w) in lib.iter().zip(ms).zip(want) {
        let inv = monodromy_invariants(m);
        assert!(inv.det_abs_error < 1e-8, "{}: det {:e}", l.name, inv.det_abs_error);
        assert!(inv.char_poly_residual < 1e-6, "{}: {:e}", l.name, inv.char_poly_residual);
        assert_eq!(inv.char_poly, w, "{}", l.name);
        assert_eq!(m.frame, FRAME);
        assert!(m.condition.is_finite());
    }
}

#[test]
fn invariant_forms_of_library() {
    let ms: Vec<CMatrix> = library().1.iter().map(|m| m.value).collect();
    let f = invariant_form(&ms, 1e-6);
    assert_eq!(f.symmetric.dimension, 1);
    assert_eq!(f.hermitian.dimension, 1);
    assert!(f.symmetric.residual < 1e-6);
    assert_eq!(f.hermitian_signature, (2, 2));
    assert_eq!(f.symmetric_signature, Some((2, 2)));
    assert!(f.reality_residual.unwrap() < 1e-6);
    for m in &ms {
        let r = (m.transpose() * f.g * m - f.g).norm();
        assert!(r < 1e-6, "{r:e}");
    }
}

#[test]
fn invariant_form_is_contragredient_under_conjugation() {
    let ms: Vec<CMatrix> = library().1.iter().map(|m| m.value).collect();
    let p = CMatrix::from_fn(|i, j| Complex64::new(((i * 7 + j * 3) % 5) as f64 - 1.5 + if i == j { 4.0 } else { 0.0 }, (i + 2 * j) as f64 * 0.1));
    let pi = p.try_inverse().unwrap();
    let conj: Vec<CMatrix> = ms.iter().map(|m| pi * m * p).collect();
    let f = invariant_form(&ms, 1e-6);
    let fc = invariant_form(&conj, 1e-6);
    assert_eq!(fc.symmetric.dimension, 1);
    assert_eq!(fc.symmetric_signature, Some((2, 2)));
    // tP G P solves the conjugated problem, so it is a multiple of the new form
    let moved = p.transpose() * f.g * p;
    let k = moved.iter().zip(fc.g.iter()).max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap()).map(|(a, b)| a / b).unwrap();
    assert!((moved - fc.g * k).norm() < 1e-6 * moved.norm());
    for m in &conj {
        assert!((m.transpose() * fc.g * m - fc.g).norm() < 1e-6);
    }
}

#[test]
fn lambda_one_tenth_gives_four_loops() {
    let base = [Complex64::new(0.1, 0.0), Complex64::new(0.001, 0.0)];
    let r = t4_mu_roots(base[0]).unwrap();
    assert!((r[0] - r[1]).norm() > 1e-6);
    let lib = loop_library(base).unwrap();
    assert_eq!(lib.len(), 4);
    for l in &lib {
        assert!(check_clearance(l, 1e-7).is_ok(), "{}", l.name);
    }
}

#[test]
fn double_root_needs_resample() {
    // the discriminant in mu is 4 (5l + 1)^3 (20l - 1)^2
    for l in [-0.2, 0.05] {
        let base = [Complex64::new(l, 0.0), Complex64::new(0.001, 0.0)];
        assert_eq!(loop_library(base).unwrap_err(), MonodromyError::DoubleRoot);
    }
}

#[test]
fn loops_keep_their_distance() {
    for l in &library().0 {
        let m = check_clearance(l, 1e-8).unwrap();
        assert!(m > 1e-8);
        assert!(l.samples(50).unwrap().into_iter().all(|p| clearance(p) >= m));
    }
}

#[test]
fn close_or_open_paths_are_rejected() {
    let mut l = library().0[1].clone();
    l.segments.pop();
    assert!(matches!(continue_along(conn(), &l, TOL), Err(MonodromyError::NotClosed(_))));
    let mut l = library().0[1].clone();
    if let Segment::Arc { radius, .. } = &mut l.segments[1] {
        *radius *= 2.0;
    }
    assert!(matches!(continue_along(conn(), &l, TOL), Err(MonodromyError::Malformed(_))));
}

#[test]
fn loop_file_round_trip() {
    let file = LoopFile { tol: Some(1e-9), loops: library().0.clone() };
    let text = serde_json::to_string_pretty(&file).unwrap();
    let back: LoopFile = serde_json::from_str(&text).unwrap();
    assert_eq!(back, file);
    assert!(text.contains("\"kind\": \"arc\""));
}

#[test]
fn identification_finds_candidates() {
    let invs: Vec<_> = library().1.iter().map(monodromy_invariants).collect();
    let gens = k3period::lattice::generators().into_iter().map(|(_, g)| g).collect::<Vec<_>>();
    let ids = invariants::identify(&invs, &gens, 3);
    for id in ids {
        assert!(id.char_poly_matches > 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]
    #[test]
    fn winding_number_is_a_power(k in 1i32..3) {
        let (lib, ms) = library();
        let mut l = lib[1].clone();
        for s in &mut l.segments {
            if let Segment::Arc { winding, .. } = s {
                *winding = k;
            }
        }
        let m = continue_along(conn(), &l, TOL).unwrap();
        let want = (0..k).fold(CMatrix::identity(), |acc, _| acc * ms[1].value);
        prop_assert!((m.value - want).norm() < 1e3 * TOL * want.norm());
    }
}
