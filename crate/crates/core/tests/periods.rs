use k3period::algebra::euler::lm;
use k3period::periods::*;

#[test]
fn gkz_reduction_yields_transcribed_operators() {
    let data = GkzData::default();
    let ops = gkz_operators(&data).unwrap();
    assert_eq!(ops.len(), 6);
    let sys = reduce_to_two_vars(&data, &ops, &Reduction::default()).unwrap();
    assert!(sys.torus_vanishes);
    assert_eq!(sys.operators, vec![l1(), l2()]);
}

#[test]
fn operators_annihilate_period_series() {
    let s = period_series(20);
    for op in [l1(), l2(), l3()] {
        let r = verify_annihilation(&op, &s).unwrap();
        assert!(r.annihilates(), "{op}: {:?}", r.nonzero);
        assert!(r.checked_order >= 17);
    }
}

#[test]
fn perturbed_operator_does_not_annihilate() {
    let s = period_series(12);
    let bad = &l3() + &lm::parse("l^2").unwrap();
    assert!(!verify_annihilation(&bad, &s).unwrap().annihilates());
}

#[test]
fn second_operator_search() {
    let found = find_second_operator(3, 24).unwrap();
    eprintln!(
        "kernel {} multiples {} op {} scale {:?} mult {:?}",
        found.kernel_dim, found.multiples_dim, found.operator, found.l3_scale, found.l1_multiplier.as_ref().map(|p| p.to_string())
    );
    assert_eq!(found.kernel_dim - found.multiples_dim, 1);
    assert!(found.l3_scale.is_some());
    assert!(verify_annihilation(&found.operator, &period_series(20)).unwrap().annihilates());
    for d in 0..3 {
        let r = find_second_operator(d, 24);
        eprintln!("degree {d}: {:?}", r.as_ref().map(|x| (x.kernel_dim, x.multiples_dim)).map_err(|e| e.to_string()));
    }
    assert!(matches!(find_second_operator(0, 24), Err(PeriodError::NoSolution { .. })));
}
