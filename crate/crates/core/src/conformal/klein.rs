//! Klein's icosahedral invariants on `P^2 = {(A0 : A1 : A2)}`.

use serde::Serialize;

use crate::algebra::{parse_poly, parse_ratfun, MPoly, RatFun};

use super::birational::{X, Y};
use super::ConformalError;

pub const KLEIN_VARS: [&str; 3] = ["a0", "a1", "a2"];

#[derive(Debug, Clone, PartialEq)]
pub struct KleinInvariants {
    pub a: MPoly,
    pub b: MPoly,
    pub c: MPoly,
    pub d: MPoly,
}

fn p(s: &str) -> MPoly {
    parse_poly(s).expect("valid polynomial text")
}

/// Degrees 2, 6, 10 and 15. In `C` the printed factor `A1 A5` is read as
/// `A1 A2`, the only homogeneous choice.
pub fn klein_invariants() -> KleinInvariants {
    let a = p("a0^2 + a1 a2");
    let b = p("8 a0^4 a1 a2 - 2 a0^2 a1^2 a2^2 + a1^3 a2^3 - a0 (a1^5 + a2^5)");
    let c = p("320 a0^6 a1^2 a2^2 - 160 a0^4 a1^3 a2^3 + 20 a0^2 a1^4 a2^4 + 6 a1^5 a2^5 \
               - 4 a0 (a1^5 + a2^5)(32 a0^4 - 20 a0^2 a1 a2 + 5 a1^2 a2^2) + a1^10 + a2^10");
    let d12 = p("(a1^5 - a2^5)(-1024 a0^10 + 3840 a0^8 a1 a2 - 3840 a0^6 a1^2 a2^2 \
                 + 1200 a0^4 a1^3 a2^3 - 100 a0^2 a1^4 a2^4 + a1^5 a2^5) \
                 + a0 (a1^10 - a2^10)(352 a0^4 - 160 a0^2 a1 a2 + 10 a1^2 a2^2) + (a1^15 - a2^15)");
    let d = d12.scale(&crate::algebra::rat(1, 12));
    KleinInvariants { a, b, c, d }
}

/// `-1728 B^5 + 720 A C B^3 - 80 A^2 C^2 B + 64 A^3 (5 B^2 - A C)^2 + C^3 - 144 D^2`.
pub fn klein_relation_residual(k: &KleinInvariants) -> MPoly {
    let (a, b, c, d) = (&k.a, &k.b, &k.c, &k.d);
    let i = |n: i64| MPoly::from_int(n);
    let t = &(&(&b.pow(2) * &i(5)) - &(a * c));
    let rhs = &(&(&(&(&b.pow(5) * &i(-1728)) + &(&(&(a * c) * &b.pow(3)) * &i(720)))
        + &(&(&(&a.pow(2) * &c.pow(2)) * b) * &i(-80)))
        + &(&(&a.pow(3) * &t.pow(2)) * &i(64)))
        + &c.pow(3);
    &rhs - &(&d.pow(2) * &i(144))
}

pub fn klein_relation_check() -> bool {
    klein_relation_residual(&klein_invariants()).is_zero()
}

/// `y (1728 x^5 - 720 x^3 y + 80 x y^2 - 64 (5 x^2 - y)^2 - y^3)`.
pub fn branch_locus() -> MPoly {
    p("y (1728 x^5 - 720 x^3 y + 80 x y^2 - 64 (5 x^2 - y)^2 - y^3)")
}

/// The quintic factor of the branch locus.
pub fn branch_quintic() -> MPoly {
    p("1728 x^5 - 720 x^3 y + 80 x y^2 - 64 (5 x^2 - y)^2 - y^3")
}

/// The affine coordinates `x = B/A^3`, `y = C/A^5`.
pub fn affine_coordinates(k: &KleinInvariants) -> Result<[RatFun; 2], ConformalError> {
    let a = RatFun::from_poly(k.a.clone());
    Ok([
        RatFun::from_poly(k.b.clone()).checked_div(&a.pow(3)?)?,
        RatFun::from_poly(k.c.clone()).checked_div(&a.pow(5)?)?,
    ])
}

/// Substituting `x = B/A^3`, `y = C/A^5` into the quintic gives
/// `-144 D^2 / A^15`, so the branch curve is where `D` vanishes. Checked on
/// `A^15` times the substituted quintic, which is a polynomial.
pub fn branch_is_d_squared(k: &KleinInvariants) -> bool {
    let q = branch_quintic();
    let mut lhs = MPoly::zero();
    for (exps, c) in q.terms() {
        let (i, j) = (q.exponent_of(exps, X), q.exponent_of(exps, Y));
        let t = &(&k.b.pow(i) * &k.c.pow(j)) * &k.a.pow(15 - 3 * i - 5 * j);
        lhs = &lhs + &t.scale(c);
    }
    lhs == &k.d.pow(2) * &MPoly::from_int(-144)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminantImage {
    /// `t4` divides the numerator of the pulled-back quintic.
    pub t4_divides_quintic: bool,
    /// Multiplicity of `t4` in that numerator.
    pub t4_multiplicity: u32,
    /// The pulled-back `y`-factor, as a canonical string.
    pub y_factor: String,
}

/// Does `f` send `t4 = 0` into the branch locus? Reported, not asserted.
pub fn discriminant_image() -> Result<DiscriminantImage, ConformalError> {
    let f = super::birational::f_map();
    let q = f.pull(&RatFun::from_poly(branch_quintic()))?;
    let t4 = crate::pfaffian::t4();
    let mut n = q.num().clone();
    let mut k = 0;
    while let Some(r) = n.div_exact(&t4) {
        n = r;
        k += 1;
    }
    let y = f.pull(&parse_ratfun("y").expect("valid"))?;
    Ok(DiscriminantImage { t4_divides_quintic: k > 0, t4_multiplicity: k, y_factor: y.to_canonical_string() })
}
