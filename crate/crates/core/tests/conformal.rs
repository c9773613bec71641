use k3period::algebra::euler::{LAMBDA, MU};
use k3period::algebra::{parse_ratfun, rat, MPoly, RatFun};
use k3period::conformal::birational::{f_factored, f_map, X, Y};
use k3period::conformal::klein::*;
use k3period::conformal::transcribed::*;
use k3period::conformal::*;
use proptest::prelude::*;

fn rf(s: &str) -> RatFun {
    parse_ratfun(s).unwrap()
}

fn small_system() -> SecondOrderSystem {
    SecondOrderSystem::new(
        [X, Y],
        ["y/(x + 1)", "x - 2", "1/x", "y", "x y", "1/(y + 3)", "2", "x/y"].map(rf),
    )
    .unwrap()
}

/// Chain rule done by hand: write `z(X, Y) = w(U, V)`, substitute into both
/// equations, move everything to `(U, V)` and solve for `w_UU`, `w_VV`.
fn chain_rule_transport(sys: &SecondOrderSystem, map: &BirationalMap2) -> [RatFun; 8] {
    let (x, y) = (sys.vars[0].as_str(), sys.vars[1].as_str());
    let [u, v] = &map.forward;
    let (ux, uy, vx, vy) = (u.diff(x), u.diff(y), v.diff(x), v.diff(y));
    let two = RatFun::from_int(2);
    let zero = RatFun::zero();
    let one = RatFun::one();
    // jets on [w_UU, w_UV, w_VV, w_U, w_V, w]
    let zx = [zero.clone(), zero.clone(), zero.clone(), ux.clone(), vx.clone(), zero.clone()];
    let zy = [zero.clone(), zero.clone(), zero.clone(), uy.clone(), vy.clone(), zero.clone()];
    let zxx = [&ux * &ux, &two * &(&ux * &vx), &vx * &vx, ux.diff(x), vx.diff(x), zero.clone()];
    let zxy = [&ux * &uy, &(&ux * &vy) + &(&uy * &vx), &vx * &vy, ux.diff(y), vx.diff(y), zero.clone()];
    let zyy = [&uy * &uy, &two * &(&uy * &vy), &vy * &vy, uy.diff(y), vy.diff(y), zero.clone()];
    let z = [zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone(), one];
    let row = |pure: &[RatFun; 6], k: [&RatFun; 4]| -> Vec<RatFun> {
        (0..6)
            .map(|i| {
                let r = &(&(&(&pure[i] - &(k[0] * &zxy[i])) - &(k[1] * &zx[i])) - &(k[2] * &zy[i])) - &(k[3] * &z[i]);
                map.push(&r).unwrap()
            })
            .collect()
    };
    let e1 = row(&zxx, [&sys.l, &sys.a, &sys.b, &sys.p]);
    let e2 = row(&zyy, [&sys.m, &sys.c, &sys.d, &sys.q]);
    // e1[0] w_UU + e1[2] w_VV = -(rest), same for e2
    let det = &(&e1[0] * &e2[2]) - &(&e1[2] * &e2[0]);
    let solve_uu = |k: usize| &(&(&e1[2] * &e2[k]) - &(&e2[2] * &e1[k])) / &det;
    let solve_vv = |k: usize| &(&(&e2[0] * &e1[k]) - &(&e1[0] * &e2[k])) / &det;
    [solve_uu(1), solve_vv(1), solve_uu(3), solve_uu(4), solve_vv(3), solve_vv(4), solve_uu(5), solve_vv(5)]
}

/// `z = k w` with `k_X/k`, `k_Y/k`, `k_XX/k`, `k_XY/k`, `k_YY/k` given.
fn gauge(sys: &SecondOrderSystem, kx: &RatFun, ky: &RatFun, kxx: &RatFun, kxy: &RatFun, kyy: &RatFun) -> [RatFun; 8] {
    let two = RatFun::from_int(2);
    let (l, m) = (&sys.l, &sys.m);
    let a = &(&sys.a + &(l * ky)) - &(&two * kx);
    let b = &sys.b + &(l * kx);
    let p = &(&(&(&sys.p + &(l * kxy)) + &(&sys.a * kx)) + &(&sys.b * ky)) - kxx;
    let c = &sys.c + &(m * ky);
    let d = &(&sys.d + &(m * kx)) - &(&two * ky);
    let q = &(&(&(&sys.q + &(m * kxy)) + &(&sys.c * kx)) + &(&sys.d * ky)) - kyy;
    [l.clone(), m.clone(), a, b, c, d, p, q]
}

#[test]
fn printed_period_system_matches_derivation() {
    assert_eq!(derived_our_system().unwrap(), our_system());
}

#[test]
fn printed_endpoints() {
    let ours = our_system();
    let w = "(l + 16 l^2 - 80 l^3 + 125 m)";
    let alias = [("l", LAMBDA), ("m", MU)];
    let p = |s: &str| k3period::algebra::parse_ratfun_with_aliases(&s.replace('W', w), &alias).unwrap();
    assert_eq!(ours.l, p("2 m (-1 + 15 l + 100 l^2)/W"));
    assert_eq!(ours.q, p("-10/(m W)"));
}

#[test]
fn identity_transport_is_identity() {
    let sys = small_system();
    assert_eq!(sy_transport(&sys, &BirationalMap2::identity([X, Y])).unwrap(), sys);
}

#[test]
fn transport_agrees_with_chain_rule() {
    let sys = small_system();
    let map = BirationalMap2::new([X, Y], ["u", "v"], [rf("x + y^2"), rf("2 y - 1")], [rf("u - (v + 1)^2/4"), rf("(v + 1)/2")]);
    let got = sy_transport(&sys, &map).unwrap();
    let want = chain_rule_transport(&sys, &map);
    for ((name, g), w) in got.named().zip(&want) {
        assert_eq!(g, w, "{name}");
    }
}

#[test]
fn period_transport_agrees_with_chain_rule() {
    let got = sy_transport(&our_system(), &f_map()).unwrap();
    let want = chain_rule_transport(&our_system(), &f_map());
    for ((name, g), w) in got.named().zip(&want) {
        assert_eq!(g, w, "{name}");
    }
}

#[test]
fn transported_conformal_structure_is_satos() {
    let moved = sy_transport(&our_system(), &f_map()).unwrap();
    let [l, m] = sato_conformal();
    assert_eq!(moved.l, l);
    assert_eq!(moved.m, m);
    assert_eq!(moved.l, rf("-20 (4 x^2 + 3 x y - 4 y)/(36 x^2 - 32 x - y)"));
}

#[test]
fn transport_report() {
    let r = full_transport_check().unwrap();
    assert!(r.f_birational && r.f_factorization);
    for c in r.derivation.iter().chain(&r.pulled_back).chain(&r.first_derivatives).chain(&r.second_derivatives).chain(&r.conformal) {
        assert!(c.ok, "{}", c.name);
    }
    let bad: Vec<&str> = r.transported.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
    assert_eq!(bad, ["bar P"]);
    assert!(!r.all_ok());
    assert_eq!(r.errata.len(), 1);
    let e = &r.errata[0];
    assert_eq!(e.coefficient, "P");
    assert!(e.transported_integrable && !e.printed_integrable);
}

#[test]
fn printed_p1_is_a_misprint() {
    let moved = sy_transport(&our_system(), &f_map()).unwrap();
    let uni = uniformizing_system();
    assert_eq!(moved.p, rf("-2 (8 x - y)/(x^2 (36 x^2 - 32 x - y))"));
    assert_ne!(moved.p, uni.p);
    assert!(is_integrable(&moved).unwrap());
    assert!(!is_integrable(&uni).unwrap());
    let mut fixed = uni.clone();
    fixed.p = moved.p.clone();
    assert_eq!(fixed, moved);
}

#[test]
fn gauge_from_sato_gives_the_transported_system() {
    // The two normalization factors differ by x^4 / y^2 = k^-4 with k = y^(1/2)/x.
    let kx = rf("-1/x");
    let ky = rf("1/(2 y)");
    let kxx = rf("2/x^2");
    let kxy = rf("-1/(2 x y)");
    let kyy = rf("-1/(4 y^2)");
    let got = gauge(&sato_system(), &kx, &ky, &kxx, &kxy, &kyy);
    let moved = sy_transport(&our_system(), &f_map()).unwrap();
    for ((name, m), g) in moved.named().zip(&got) {
        assert_eq!(m, g, "{name}");
    }
}

#[test]
fn integrability_of_printed_systems() {
    assert!(is_integrable(&our_system()).unwrap());
    assert!(is_integrable(&sato_system()).unwrap());
    let nonzero = integrability_numerators(&uniformizing_system()).unwrap().iter().filter(|p| !p.is_zero()).count();
    assert_eq!(nonzero, 3);
}

#[test]
fn cleared_integrability_agrees_with_rational_residual() {
    let sys = small_system();
    let fast = integrability_numerators(&sys).unwrap();
    let slow = integrability_residual(&sys).unwrap();
    for (f, s) in fast.iter().zip(&slow) {
        assert_eq!(f.is_zero(), s.is_zero());
    }
    assert!(slow.iter().any(|s| !s.is_zero()));
    // z_XX = z_YY = 0 is integrable
    let flat = SecondOrderSystem::new([X, Y], std::array::from_fn(|_| RatFun::zero())).unwrap();
    assert!(is_integrable(&flat).unwrap());
}

#[test]
fn normalization_factors_give_printed_abcd() {
    let r = normalization_check().unwrap();
    for c in r.ours.iter().chain(&r.sato) {
        assert!(c.ok, "{} {:?}", c.name, c.difference);
    }
    let status: Vec<(&str, bool)> = r.integrable.iter().map(|(n, ok)| (n.as_str(), *ok)).collect();
    assert_eq!(
        status,
        [("period system", true), ("uniformizing system", false), ("Sato system", true), ("transported period system", true)]
    );
}

#[test]
fn constant_in_theta_is_invisible() {
    let uni = uniformizing_system();
    let theta = our_normalization();
    let shifted = theta.plus(&LogDerivativeExpr::log(&RatFun::from_int(7)).unwrap());
    let a = abcd_from_normalization([X, Y], &uni.l, &uni.m, &theta).unwrap();
    let b = abcd_from_normalization([X, Y], &uni.l, &uni.m, &shifted).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sato_as_coefficient() {
    assert_eq!(sato_system().a, rf("-20 (3 x - 2)/(36 x^2 - 32 x - y)"));
}

#[test]
fn f_is_birational_and_factors() {
    let f = f_map();
    assert!(f.is_birational().unwrap());
    assert_eq!(f_factored().unwrap(), f);
    let lam = f.push(&RatFun::var(LAMBDA)).unwrap();
    assert_eq!(lam, rf("1/4 - y/(20 x^2)"));
}

#[test]
fn derivative_tables() {
    let f = f_map();
    let x_lam = f.push(&f.forward[0].diff(LAMBDA)).unwrap();
    assert_eq!(x_lam, rf("60 x^3/y"));
    assert!(f.forward[0].diff(MU).diff(MU).is_zero());
}

#[test]
fn klein_at_ones() {
    let k = klein_invariants();
    let one = [("a0", rat(1, 1)), ("a1", rat(1, 1)), ("a2", rat(1, 1))];
    let ev = |p: &MPoly| p.eval(&one).unwrap();
    let (a, b, c, d) = (ev(&k.a), ev(&k.b), ev(&k.c), ev(&k.d));
    assert_eq!(a, rat(2, 1));
    assert_eq!(b, rat(5, 1));
    assert_eq!(d, rat(0, 1));
    // C by hand: 320 - 160 + 20 + 6 - 4*2*17 + 2
    assert_eq!(c, rat(52, 1));
    let i = |n: i64| rat(n, 1);
    let t = &(&b * &b) * &i(5) - &(&a * &c);
    let rhs = &(&(&(&(&i(-1728) * &b.pow(5)) + &(&(&i(720) * &(&a * &c)) * &b.pow(3)))
        + &(&(&i(-80) * &(&a * &a)) * &(&(&c * &c) * &b)))
        + &(&(&i(64) * &a.pow(3)) * &(&t * &t)))
        + &c.pow(3);
    assert_eq!(rhs, &(&d * &d) * &i(144));
}

#[test]
fn klein_relation_is_an_identity() {
    assert!(klein_relation_check());
    let k = klein_invariants();
    assert_eq!(k.d.total_degree(), 15);
    assert_eq!(k.c.total_degree(), 10);
}

#[test]
fn branch_curve_is_where_d_vanishes() {
    assert!(branch_is_d_squared(&klein_invariants()));
    let [x, y] = affine_coordinates(&klein_invariants()).unwrap();
    assert_eq!(x.eval(&[("a0", rat(1, 1)), ("a1", rat(1, 1)), ("a2", rat(1, 1))]).unwrap(), rat(5, 8));
    assert!(y.vars().iter().all(|v| v.starts_with('a')));
    assert_eq!(branch_locus(), &MPoly::var("y") * &branch_quintic());
}

#[test]
fn discriminant_lands_in_branch_locus() {
    let r = discriminant_image().unwrap();
    assert!(r.t4_divides_quintic);
    assert_eq!(r.t4_multiplicity, 1);
}

#[test]
fn system_json_has_named_coefficients() {
    let v = serde_json::to_value(small_system()).unwrap();
    assert_eq!(v["vars"], serde_json::json!(["x", "y"]));
    for n in COEFFICIENT_NAMES {
        assert!(v[n].is_string());
    }
}

#[test]
fn degenerate_structure_is_rejected() {
    let c = ["1/x", "x", "0", "0", "0", "0", "0", "0"].map(rf);
    assert_eq!(SecondOrderSystem::new([X, Y], c), Err(ConformalError::DegenerateStructure));
}

#[test]
fn constant_map_has_no_jacobian() {
    let map = BirationalMap2::new([X, Y], ["u", "v"], [rf("x + y"), rf("2 x + 2 y")], [rf("u"), rf("v")]);
    assert_eq!(sy_transport(&small_system(), &map), Err(ConformalError::DegenerateJacobian));
}

fn triangular(from: [&str; 2], to: [&str; 2], a: i64, b: i64, c: i64, e: i64) -> BirationalMap2 {
    // (x, y) -> (x + a y^2 + b, e y + c)
    let (x, y) = (from[0], from[1]);
    let (u, v) = (to[0], to[1]);
    let fw = [rf(&format!("{x} + {a} {y}^2 + {b}")), rf(&format!("{e} {y} + {c}"))];
    let yv = format!("(({v}) - {c})/{e}");
    let inv = [rf(&format!("{u} - {a} ({yv})^2 - {b}")), rf(&yv)];
    BirationalMap2::new(from, to, fw, inv)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transport_is_functorial_on_conformal_part(
        a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, e in 1i64..=3,
        a2 in -3i64..=3, c2 in -3i64..=3,
    ) {
        let sys = SecondOrderSystem::new([X, Y], ["y", "x", "0", "0", "0", "0", "0", "0"].map(rf)).unwrap();
        let f = triangular([X, Y], ["u", "v"], a, b, c, e);
        // swap roles so the composite is not triangular in one direction only
        let g0 = triangular(["v", "u"], ["t", "s"], a2, 1, c2, 2);
        let g = BirationalMap2::new(
            ["u", "v"],
            ["s", "t"],
            [g0.forward[1].clone(), g0.forward[0].clone()],
            [g0.inverse[1].clone(), g0.inverse[0].clone()],
        );
        prop_assert!(f.is_birational().unwrap() && g.is_birational().unwrap());
        let step = sy_transport(&sy_transport(&sys, &f).unwrap(), &g).unwrap();
        let once = sy_transport(&sys, &f.then(&g).unwrap()).unwrap();
        prop_assert_eq!(&step.l, &once.l);
        prop_assert_eq!(&step.m, &once.m);
    }

    #[test]
    fn theta_shift_leaves_abcd(k in 1i64..50) {
        let sato = sato_system();
        let theta = sato_normalization();
        let shifted = theta.plus(&LogDerivativeExpr::log(&RatFun::from_int(k)).unwrap().scale(&rat(3, 2)));
        prop_assert_eq!(
            abcd_from_normalization([X, Y], &sato.l, &sato.m, &theta).unwrap(),
            abcd_from_normalization([X, Y], &sato.l, &sato.m, &shifted).unwrap()
        );
    }
}
