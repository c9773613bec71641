//! Rational functions in canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::mpoly::{forward_owned, MPoly};
use super::rat::{rat_to_f64, Rat};
use super::AlgebraError;

/// `num/den` with `gcd(num, den) = 1` and `den` a primitive integer
/// polynomial with positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

impl Default for RatFun {
    fn default() -> Self {
        RatFun::zero()
    }
}

impl RatFun {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return RatFun::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let f = den.integer_normalizer();
        RatFun { num: num.scale(&f), den: den.scale(&f) }
    }

    /// Build from parts already known to be coprime with normalized `den`.
    fn coprime(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            RatFun::zero()
        } else {
            RatFun { num, den }
        }
    }

    pub fn zero() -> Self {
        RatFun { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> Self {
        RatFun::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFun { num: MPoly::constant(c), den: MPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        RatFun::from_poly(MPoly::from_int(c))
    }

    pub fn var(name: &str) -> Self {
        RatFun::from_poly(MPoly::var(name))
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFun { num: p, den: MPoly::one() }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&MPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> Vec<String> {
        self.num.union_vars(&self.den)
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &RatFun) -> Result<Self, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RatFun::canonical(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn pow(&self, e: i32) -> Result<Self, AlgebraError> {
        if e >= 0 {
            Ok(RatFun { num: self.num.pow(e as u32), den: self.den.pow(e as u32) })
        } else {
            self.inv()?.pow(-e)
        }
    }

    pub fn diff(&self, var: &str) -> Self {
        if self.den.is_constant() {
            return RatFun::canonical(self.num.diff(var), self.den.clone());
        }
        let n = &(&self.num.diff(var) * &self.den) - &(&self.num * &self.den.diff(var));
        RatFun::canonical(n, self.den.pow(2))
    }

    /// `var * d/dvar`.
    pub fn theta(&self, var: &str) -> Self {
        &self.diff(var) * &RatFun::var(var)
    }

    /// Simultaneous substitution of rational functions for variables.
    pub fn substitute(&self, map: &[(&str, RatFun)]) -> Result<Self, AlgebraError> {
        let n = substitute_poly(&self.num, map);
        let d = substitute_poly(&self.den, map);
        n.checked_div(&d)
    }

    pub fn eval(&self, point: &[(&str, Rat)]) -> Result<Rat, AlgebraError> {
        let n = self.num.eval(point).ok_or_else(|| AlgebraError::Invalid("unassigned variable".into()))?;
        let d = self.den.eval(point).ok_or_else(|| AlgebraError::Invalid("unassigned variable".into()))?;
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(n / d)
    }

    pub fn rename(&self, map: &[(&str, &str)]) -> Self {
        RatFun::canonical(self.num.rename(map), self.den.rename(map))
    }

    pub fn compile(&self, vars: &[&str]) -> CompiledRatFun {
        CompiledRatFun {
            num: CompiledPoly::new(&self.num, vars),
            den: CompiledPoly::new(&self.den, vars),
        }
    }

    /// A rough size measure used for pivot selection.
    pub fn weight(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    pub fn to_canonical_string(&self) -> String {
        if self.den.is_one() {
            self.num.to_canonical_string()
        } else {
            format!("({})/({})", self.num, self.den)
        }
    }
}

/// Substitute into a polynomial, clearing denominators once.
pub fn substitute_poly(p: &MPoly, map: &[(&str, RatFun)]) -> RatFun {
    let vars = p.vars().to_vec();
    let images: Vec<Option<&RatFun>> = vars
        .iter()
        .map(|v| map.iter().find(|(n, _)| n == v).map(|(_, r)| r))
        .collect();
    let degs: Vec<u32> = vars.iter().map(|v| p.degree(v)).collect();
    let mut num_pows: Vec<Vec<MPoly>> = Vec::new();
    let mut den_pows: Vec<Vec<MPoly>> = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let (a, b) = match img {
            Some(r) => (r.num.clone(), r.den.clone()),
            None => (MPoly::var(&vars[i]), MPoly::one()),
        };
        let mut np = vec![MPoly::one()];
        let mut dp = vec![MPoly::one()];
        for k in 1..=degs[i] as usize {
            np.push(&np[k - 1] * &a);
            dp.push(&dp[k - 1] * &b);
        }
        num_pows.push(np);
        den_pows.push(dp);
    }
    let mut num = MPoly::zero();
    for (e, c) in p.terms() {
        let mut t = MPoly::constant(c.clone());
        for i in 0..vars.len() {
            let k = e[i] as usize;
            let d = degs[i] as usize;
            if k > 0 {
                t = &t * &num_pows[i][k];
            }
            if d > k {
                t = &t * &den_pows[i][d - k];
            }
        }
        num = &num + &t;
    }
    let mut den = MPoly::one();
    for i in 0..vars.len() {
        den = &den * &den_pows[i][degs[i] as usize];
    }
    RatFun::canonical(num, den)
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun::canonical(&self.num + &o.num, self.den.clone());
        }
        if self.den.is_one() {
            return RatFun::coprime(&(&self.num * &o.den) + &o.num, o.den.clone());
        }
        if o.den.is_one() {
            return RatFun::coprime(&self.num + &(&o.num * &self.den), self.den.clone());
        }
        RatFun::canonical(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, o: &RatFun) -> RatFun {
        self + &(-o)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFun { num: &self.num * &o.num, den: MPoly::one() };
        }
        RatFun::canonical(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, o: &RatFun) -> RatFun {
        self.checked_div(o).expect("division by zero rational function")
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

forward_owned!(Add, add, RatFun);
forward_owned!(Sub, sub, RatFun);
forward_owned!(Mul, mul, RatFun);
forward_owned!(Div, div, RatFun);

impl From<MPoly> for RatFun {
    fn from(p: MPoly) -> Self {
        RatFun::from_poly(p)
    }
}

#[derive(Clone, Debug)]
struct CompiledPoly {
    terms: Vec<(Vec<u32>, f64)>,
    max_exp: Vec<u32>,
}

impl CompiledPoly {
    fn new(p: &MPoly, vars: &[&str]) -> Self {
        for v in p.vars() {
            assert!(vars.contains(&v.as_str()), "variable {v} not in evaluation list");
        }
        let mut max_exp = vec![0u32; vars.len()];
        let terms = p
            .terms()
            .map(|(e, c)| {
                let exps: Vec<u32> = vars.iter().map(|v| p.exponent_of(e, v)).collect();
                for (m, &x) in max_exp.iter_mut().zip(&exps) {
                    *m = (*m).max(x);
                }
                (exps, rat_to_f64(c))
            })
            .collect();
        CompiledPoly { terms, max_exp }
    }

    fn eval(&self, x: &[Complex64]) -> Complex64 {
        let pows: Vec<Vec<Complex64>> = x
            .iter()
            .zip(&self.max_exp)
            .map(|(&v, &m)| {
                let mut p = Vec::with_capacity(m as usize + 1);
                p.push(Complex64::new(1.0, 0.0));
                for k in 1..=m as usize {
                    p.push(p[k - 1] * v);
                }
                p
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(Complex64::new(*c, 0.0), |acc, (i, &k)| acc * pows[i][k as usize])
            })
            .sum()
    }
}

/// Floating-point evaluator for a rational function.
#[derive(Clone, Debug)]
pub struct CompiledRatFun {
    num: CompiledPoly,
    den: CompiledPoly,
}

impl CompiledRatFun {
    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.num.eval(x) / self.den.eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ratfun;
    use crate::algebra::rat::rat;

    #[test]
    fn cancellation_and_normal_form() {
        let f = parse_ratfun("(2*x^2 - 2)/(-4*x - 4)").unwrap();
        assert_eq!(f.to_string(), "-1/2*x + 1/2");
        let g = parse_ratfun("(x*y)/(3*x^2)").unwrap();
        assert_eq!(g.den().to_string(), "x");
        assert_eq!(g.num().to_string(), "1/3*y");
    }

    #[test]
    fn field_operations() {
        let f = parse_ratfun("1/(x-1)").unwrap();
        let g = parse_ratfun("1/(x+1)").unwrap();
        assert_eq!((&f - &g).to_string(), "(2)/(x^2 - 1)");
        assert_eq!(&(&f / &g) * &g, f);
        assert!(RatFun::zero().inv().is_err());
    }

    #[test]
    fn derivative_quotient_rule() {
        let f = parse_ratfun("x/(1+x^2)").unwrap();
        assert_eq!(f.diff("x"), parse_ratfun("(1-x^2)/(1+x^2)^2").unwrap());
    }

    #[test]
    fn substitution() {
        let f = parse_ratfun("x^2 + y").unwrap();
        let g = f
            .substitute(&[("x", parse_ratfun("1/t").unwrap()), ("y", RatFun::var("t"))])
            .unwrap();
        assert_eq!(g, parse_ratfun("(1 + t^3)/t^2").unwrap());
        assert_eq!(g.eval(&[("t", rat(1, 2))]).unwrap(), rat(9, 2));
    }

    #[test]
    fn compiled_evaluation() {
        let f = parse_ratfun("(x^2 + 3*y)/(x - y)").unwrap();
        let c = f.compile(&["x", "y"]);
        let v = c.eval(&[Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((v - Complex64::new(7.0, 0.0)).norm() < 1e-14);
    }
}
