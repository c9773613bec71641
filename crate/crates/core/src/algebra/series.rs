//! Truncated power series in two variables.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::mpoly::MPoly;
use super::rat::Rat;
use super::AlgebraError;

/// Coefficients `c[n][m]` of `x^n y^m` for `n + m <= order`. Every stored
/// coefficient is exact (reliable).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries2 {
    vars: [String; 2],
    order: u32,
    coeffs: Vec<Rat>,
}

fn index(n: u32, m: u32) -> usize {
    let d = (n + m) as usize;
    d * (d + 1) / 2 + m as usize
}

impl TruncatedSeries2 {
    pub fn zeros(vars: [&str; 2], order: u32) -> Self {
        let len = index(0, order + 1);
        TruncatedSeries2 {
            vars: [vars[0].to_string(), vars[1].to_string()],
            order,
            coeffs: vec![Rat::zero(); len],
        }
    }

    pub fn from_fn(vars: [&str; 2], order: u32, f: impl Fn(u32, u32) -> Rat) -> Self {
        let mut s = TruncatedSeries2::zeros(vars, order);
        for d in 0..=order {
            for m in 0..=d {
                s.coeffs[index(d - m, m)] = f(d - m, m);
            }
        }
        s
    }

    pub fn vars(&self) -> [&str; 2] {
        [&self.vars[0], &self.vars[1]]
    }

    /// Largest total degree through which coefficients are exact.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, n: u32, m: u32) -> Result<&Rat, AlgebraError> {
        if n + m > self.order {
            return Err(AlgebraError::OutOfOrder(n, m));
        }
        Ok(&self.coeffs[index(n, m)])
    }

    pub fn set(&mut self, n: u32, m: u32, c: Rat) -> Result<(), AlgebraError> {
        if n + m > self.order {
            return Err(AlgebraError::OutOfOrder(n, m));
        }
        self.coeffs[index(n, m)] = c;
        Ok(())
    }

    /// `(n, m, coefficient)` triples in order of total degree.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &Rat)> {
        (0..=self.order).flat_map(move |d| (0..=d).map(move |m| (d - m, m, &self.coeffs[index(d - m, m)])))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        TruncatedSeries2::from_fn(self.vars(), order, |n, m| self.coeffs[index(n, m)].clone())
    }

    fn check_vars(&self, o: &Self) -> Result<(), AlgebraError> {
        if self.vars != o.vars {
            return Err(AlgebraError::VariableMismatch(format!("{:?} vs {:?}", self.vars, o.vars)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(o)?;
        let order = self.order.min(o.order);
        Ok(TruncatedSeries2::from_fn(self.vars(), order, |n, m| {
            &self.coeffs[index(n, m)] + &o.coeffs[index(n, m)]
        }))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        TruncatedSeries2 {
            vars: self.vars.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(o)?;
        let order = self.order.min(o.order);
        Ok(TruncatedSeries2::from_fn(self.vars(), order, |n, m| {
            let mut acc = Rat::zero();
            for i in 0..=n {
                for j in 0..=m {
                    let a = &self.coeffs[index(i, j)];
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * &o.coeffs[index(n - i, m - j)];
                }
            }
            acc
        }))
    }

    /// Multiply by `x^a y^b`; the order drops by `a + b`.
    pub fn shift(&self, a: u32, b: u32) -> Result<Self, AlgebraError> {
        let k = a + b;
        if k > self.order {
            return Err(AlgebraError::Invalid("shift exceeds series order".into()));
        }
        Ok(TruncatedSeries2::from_fn(self.vars(), self.order - k, |n, m| {
            if n >= a && m >= b {
                self.coeffs[index(n - a, m - b)].clone()
            } else {
                Rat::zero()
            }
        }))
    }

    /// Multiply by a polynomial in the two series variables. The reliable
    /// order drops by the total degree of the polynomial.
    pub fn mul_poly(&self, p: &MPoly) -> Result<Self, AlgebraError> {
        for v in p.vars() {
            if !self.vars.contains(v) {
                return Err(AlgebraError::VariableMismatch(v.clone()));
            }
        }
        let deg = p.total_degree();
        if deg > self.order {
            return Err(AlgebraError::Invalid("polynomial degree exceeds series order".into()));
        }
        let order = self.order - deg;
        let mut out = TruncatedSeries2::zeros(self.vars(), order);
        for (e, c) in p.terms() {
            let a = p.exponent_of(e, &self.vars[0]);
            let b = p.exponent_of(e, &self.vars[1]);
            for d in 0..=order {
                for m in 0..=d {
                    let n = d - m;
                    if n >= a && m >= b {
                        let src = &self.coeffs[index(n - a, m - b)];
                        if !src.is_zero() {
                            out.coeffs[index(n, m)] += c * src;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `x d/dx` (`which = 0`) or `y d/dy` (`which = 1`).
    pub fn theta(&self, which: usize) -> Self {
        TruncatedSeries2::from_fn(self.vars(), self.order, |n, m| {
            let k = if which == 0 { n } else { m };
            &self.coeffs[index(n, m)] * Rat::from_integer(BigInt::from(k))
        })
    }

    /// Divide by the first variable; requires the `n = 0` column to vanish.
    pub fn div_first_var(&self) -> Result<Self, AlgebraError> {
        for m in 0..=self.order {
            if !self.coeffs[index(0, m)].is_zero() {
                return Err(AlgebraError::Invalid("series not divisible".into()));
            }
        }
        if self.order == 0 {
            return Err(AlgebraError::Invalid("series order exhausted".into()));
        }
        Ok(TruncatedSeries2::from_fn(self.vars(), self.order - 1, |n, m| {
            self.coeffs[index(n + 1, m)].clone()
        }))
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let inv0 = c0.recip();
        let mut out = TruncatedSeries2::zeros(self.vars(), self.order);
        out.coeffs[0] = inv0.clone();
        for d in 1..=self.order {
            for m in 0..=d {
                let n = d - m;
                let mut acc = Rat::zero();
                for i in 0..=n {
                    for j in 0..=m {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        let a = &self.coeffs[index(i, j)];
                        if !a.is_zero() {
                            acc += a * &out.coeffs[index(n - i, m - j)];
                        }
                    }
                }
                out.coeffs[index(n, m)] = -(acc * &inv0);
            }
        }
        Ok(out)
    }

    /// Polynomial truncation of the series.
    pub fn to_poly(&self) -> MPoly {
        let v = self.vars();
        MPoly::from_terms(&v, self.iter().map(|(n, m, c)| (vec![n, m], c.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::algebra::rat::rat_int;

    #[test]
    fn inverse_of_geometric() {
        let s = TruncatedSeries2::from_fn(["x", "y"], 6, |n, m| if n + m == 0 { rat_int(1) } else if (n, m) == (1, 0) { rat_int(-1) } else { rat_int(0) });
        let inv = s.inverse().unwrap();
        for (n, m, c) in inv.iter() {
            assert_eq!(*c, if m == 0 { rat_int(1) } else { rat_int(0) }, "({n},{m})");
        }
        assert!(s.mul(&inv).unwrap().iter().all(|(n, m, c)| if n + m == 0 { c.is_one() } else { c.is_zero() }));
    }

    #[test]
    fn poly_multiplication_reduces_order() {
        let s = TruncatedSeries2::from_fn(["x", "y"], 5, |_, _| rat_int(1));
        let p = parse_poly("x*y - 1").unwrap();
        let t = s.mul_poly(&p).unwrap();
        assert_eq!(t.order(), 3);
        assert_eq!(*t.coeff(1, 1).unwrap(), rat_int(0));
        assert_eq!(*t.coeff(0, 0).unwrap(), rat_int(-1));
        assert!(t.coeff(4, 0).is_err());
    }

    #[test]
    fn theta_scales_by_exponent() {
        let s = TruncatedSeries2::from_fn(["x", "y"], 4, |n, m| rat_int((n + 10 * m) as i64));
        assert_eq!(*s.theta(0).coeff(2, 1).unwrap(), rat_int(24));
        assert_eq!(*s.theta(1).coeff(2, 1).unwrap(), rat_int(12));
    }
}
