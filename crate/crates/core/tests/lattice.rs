use k3period::lattice::qsqrt5::*;
use k3period::lattice::*;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] as i128 * cofactor_det(&minor)
        })
        .sum()
}

fn eigen_signature(g: &IntMatrix) -> (usize, usize) {
    let f = g.map(|x| x as f64);
    let e = f.symmetric_eigenvalues();
    (e.iter().filter(|x| **x > 1e-9).count(), e.iter().filter(|x| **x < -1e-9).count())
}

#[test]
fn m1_determinant_and_primitivity() {
    let d = LatticeData::embedded();
    assert_eq!(gram_det(&d.m1), BigInt::from(-5));
    assert!(primitivity_by_det(&d.m1));
    assert_eq!(d.m1, d.m1.transpose());
}

#[test]
fn unimodular_congruence() {
    let d = LatticeData::embedded();
    assert_eq!(congruence_check(&d.m1, &m0(), &d.u), Ok(true));
    assert_eq!(gram_det(&d.u).magnitude(), &1u32.into());
    assert_eq!(congruence_check(&d.m1, &d.m1, &DMatrix::identity(18, 18)), Ok(true));
    let mut bad = d.u.clone();
    bad[(0, 16)] += 1;
    assert_eq!(congruence_check(&d.m1, &m0(), &bad), Ok(false));
    assert!(congruence_check(&d.m1, &m0(), &DMatrix::identity(4, 4)).is_err());
}

#[test]
fn transcendental_form_invariants() {
    let a = transcendental_form();
    assert_eq!(gram_det(&a), BigInt::from(5));
    assert_eq!(gram_signature(&a), (2, 2));
    assert_eq!(gram_signature(&m0()), (1, 17));
}

#[test]
fn generators_preserve_form() {
    for (name, g) in generators() {
        let m = orthogonal_membership(&g).unwrap();
        assert!(m.member, "{name}");
        assert_eq!(m.plus, PLUS_GENERATORS.contains(&name), "{name}");
    }
    assert_eq!(orthogonal_membership(&DMatrix::identity(4, 4)).unwrap(), Membership { member: true, plus: true });
    assert!(orthogonal_membership(&DMatrix::identity(3, 3)).is_err());
    let mut p = DMatrix::<i64>::identity(4, 4);
    p[(0, 1)] = 1;
    assert!(!orthogonal_membership(&p).unwrap().member);
}

#[test]
fn w_block_identity_exact() {
    let a = transcendental_form();
    let want: Q5Matrix = (0..4).map(|i| (0..4).map(|j| Q5::from_int(a[(i, j)])).collect()).collect();
    assert_eq!(block_diag(&hyperbolic_plane(), &w_block()), want);
    // the linear part of iota carries A to U + U, so the quadric vanishes identically
    let m = iota_matrix();
    let pulled = q5_mul(&q5_mul(&q5_transpose(&m), &want), &m);
    assert_eq!(pulled, block_diag(&hyperbolic_plane(), &hyperbolic_plane()));
}

fn quadric(xi: &[Complex64; 4], conj: bool) -> Complex64 {
    let a = transcendental_form();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            let y = if conj { xi[j].conj() } else { xi[j] };
            s += xi[i] * a[(i, j)] as f64 * y;
        }
    }
    s
}

#[test]
fn iota_lands_in_domain() {
    let i = Complex64::new(0.0, 1.0);
    let xi = iota(i, i);
    assert!(quadric(&xi, false).norm() < 1e-12);
    assert!(quadric(&xi, true).re > 0.0);
    let xi = iota(2.0 * i, 3.0 * i);
    assert!(quadric(&xi, true).re > 0.0);
}

#[test]
fn ball_basics() {
    let gens: Vec<IntMatrix> = generators().into_iter().filter(|(n, _)| PLUS_GENERATORS.contains(n)).map(|(_, g)| g).collect();
    assert_eq!(group_ball(&gens, 0, 100).unwrap(), vec![DMatrix::identity(4, 4)]);
    let h2 = generators().into_iter().find(|(n, _)| *n == "H2").unwrap().1;
    let b = group_ball(std::slice::from_ref(&h2), 1, 100).unwrap();
    assert_eq!(b.len(), 2);
    assert!(b.contains(&h2));
    let mut prev = 0;
    for r in 0..4 {
        let b = group_ball(&gens, r, 100_000).unwrap();
        assert!(b.len() >= prev);
        prev = b.len();
        for m in &b {
            let mem = orthogonal_membership(m).unwrap();
            assert!(mem.member && mem.plus);
        }
    }
    assert_eq!(group_ball(&gens, 5, 10), Err(LatticeError::CapExceeded(10)));
}

#[test]
fn corrupted_data_rejected() {
    let dir = std::env::temp_dir().join(format!("k3period-lattice-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for f in [M1_FILE, U_FILE] {
        std::fs::copy(src.join(f), dir.join(f)).unwrap();
    }
    assert!(LatticeData::load(&dir).is_ok());
    let text = std::fs::read_to_string(dir.join(M1_FILE)).unwrap().replacen("-2", "-3", 1);
    std::fs::write(dir.join(M1_FILE), text).unwrap();
    match LatticeData::load(&dir) {
        Err(LatticeError::Checksum { file, .. }) => assert_eq!(file, M1_FILE),
        other => panic!("{other:?}"),
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

fn symmetric(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        DMatrix::from_fn(n, n, |i, j| if i <= j { v[i * n + j] } else { v[j * n + i] })
    })
}

proptest! {
    #[test]
    fn det_matches_cofactor(g in (1usize..=8).prop_flat_map(symmetric)) {
        let rows: Vec<Vec<i64>> = (0..g.nrows()).map(|i| (0..g.ncols()).map(|j| g[(i, j)]).collect()).collect();
        prop_assert_eq!(gram_det(&g), BigInt::from(cofactor_det(&rows)));
    }

    #[test]
    fn signature_matches_eigenvalues(g in (1usize..=8).prop_flat_map(symmetric)) {
        prop_assert_eq!(gram_signature(&g), eigen_signature(&g));
    }
}
