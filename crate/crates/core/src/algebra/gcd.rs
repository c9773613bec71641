//! Multivariate gcd by recursive content and subresultant remainder sequences.

use num_traits::{One, Zero};

use super::mpoly::RawPoly;
use super::rat::Rat;

/// Gcd normalized to a primitive integer polynomial with positive leading
/// coefficient. `gcd(0, 0) = 0`.
pub(crate) fn gcd(a: &RawPoly, b: &RawPoly) -> RawPoly {
    let n = a.n;
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return RawPoly::constant(n, Rat::one());
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mut mc = ma.clone();
    for (x, y) in mc.0.iter_mut().zip(&mb.0) {
        *x = (*x).min(*y);
    }
    let g = gcd_reduced(&a.div_monomial(&ma), &b.div_monomial(&mb));
    g.mul_term(&mc, &Rat::one()).normalized()
}

fn gcd_reduced(a: &RawPoly, b: &RawPoly) -> RawPoly {
    let n = a.n;
    let one = RawPoly::constant(n, Rat::one());
    if a.is_constant() || b.is_constant() {
        return one;
    }
    // trial division by the smaller operand
    let (small, big) = if a.total_degree() <= b.total_degree() { (a, b) } else { (b, a) };
    if big.div_exact(small).is_some() {
        return small.normalized();
    }
    let in_a: Vec<bool> = (0..n).map(|i| a.uses_var(i)).collect();
    let in_b: Vec<bool> = (0..n).map(|i| b.uses_var(i)).collect();
    // a variable present in only one operand splits that operand into coefficients
    for i in 0..n {
        if in_a[i] != in_b[i] {
            let (with, without) = if in_a[i] { (a, b) } else { (b, a) };
            let mut g = without.clone();
            for c in with.coeffs_in(i) {
                if c.is_zero() {
                    continue;
                }
                g = gcd(&g, &c);
                if g.is_constant() {
                    return one;
                }
            }
            return g.normalized();
        }
    }
    let common: Vec<usize> = (0..n).filter(|&i| in_a[i]).collect();
    let v = *common
        .iter()
        .min_by_key(|&&i| (a.degree_in(i).min(b.degree_in(i)), a.degree_in(i).max(b.degree_in(i))))
        .expect("non-constant operands");
    if common.len() == 1 {
        return univariate_gcd(a, b, v);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let cg = gcd(&ca, &cb);
    let pg = subresultant_primitive(&pa, &pb, v);
    cg.mul(&pg).normalized()
}

fn content_in(p: &RawPoly, v: usize) -> RawPoly {
    let mut g = RawPoly::zero(p.n);
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g
}

fn univariate_gcd(a: &RawPoly, b: &RawPoly, v: usize) -> RawPoly {
    let to_dense = |p: &RawPoly| -> Vec<Rat> {
        p.coeffs_in(v)
            .into_iter()
            .map(|c| c.constant_value().expect("univariate"))
            .collect()
    };
    let mut x = to_dense(a);
    let mut y = to_dense(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = dense_rem(&x, &y);
        x = y;
        y = r;
    }
    let coeffs: Vec<RawPoly> = x.into_iter().map(|c| RawPoly::constant(a.n, c)).collect();
    RawPoly::from_coeffs_in(a.n, v, &coeffs).normalized()
}

fn dense_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = b[db].recip();
    while r.len() > db {
        let top = r.len() - 1;
        let q = &r[top] * &inv;
        let shift = top - db;
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] -= &q * bj;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

fn trim(v: &mut Vec<RawPoly>) {
    while v.last().is_some_and(RawPoly::is_zero) {
        v.pop();
    }
}

fn pseudo_rem(a: &[RawPoly], b: &[RawPoly]) -> Vec<RawPoly> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut e = a.len() as i64 - b.len() as i64 + 1;
    while r.len() > db {
        let top = r.len() - 1;
        let lcr = r[top].clone();
        let shift = top - db;
        for c in r.iter_mut() {
            *c = c.mul(lcb);
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = r[j + shift].sub(&lcr.mul(bj));
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

/// Primitive part (in `v`) of the gcd of two polynomials primitive in `v`.
fn subresultant_primitive(a: &RawPoly, b: &RawPoly, v: usize) -> RawPoly {
    let n = a.n;
    let mut x = a.coeffs_in(v);
    let mut y = b.coeffs_in(v);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    let mut g = RawPoly::constant(n, Rat::one());
    let mut h = RawPoly::constant(n, Rat::one());
    loop {
        let d = (x.len() - y.len()) as u32;
        let r = pseudo_rem(&x, &y);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return RawPoly::constant(n, Rat::one());
        }
        let divisor = g.mul(&h.pow(d));
        x = y;
        y = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division"))
            .collect();
        g = x.last().expect("nonzero").clone();
        h = if d == 0 {
            h
        } else {
            g.pow(d).div_exact(&h.pow(d - 1)).expect("subresultant h update")
        };
    }
    let p = RawPoly::from_coeffs_in(n, v, &y);
    let c = content_in(&p, v);
    p.div_exact(&c).expect("content divides").normalized()
}

#[cfg(test)]
mod tests {
    use crate::algebra::parse_poly;

    fn p(s: &str) -> crate::algebra::MPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn gcd_with_constant_and_zero() {
        assert_eq!(p("0").gcd(&p("2*x+4")), p("x+2"));
        assert_eq!(p("3").gcd(&p("x")), p("1"));
    }

    #[test]
    fn multivariate_common_factor() {
        let f = p("(l^2 - 3*m + l*m + 1)*(m^2*l - 2)*(l+m)^2");
        let g = p("(l^2 - 3*m + l*m + 1)*(l+m)*(l - m + 7)");
        assert_eq!(f.gcd(&g), p("(l^2 - 3*m + l*m + 1)*(l+m)").normalized());
    }

    #[test]
    fn coprime_three_variables() {
        let f = p("x*y + z^2 - 1");
        let g = p("x^2 + y*z + 3");
        assert!(f.gcd(&g).is_one());
        let h = p("x - y*z");
        assert_eq!((&f * &h).gcd(&(&g * &h)), h.normalized());
    }
}
