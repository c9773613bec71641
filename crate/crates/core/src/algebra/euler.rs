//! Differential operators in Euler form `sum c * x^a * theta^p`, with
//! `theta_i = x_i d/dx_i` and multiplication factors written on the left.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::mpoly::MPoly;
use super::rat::{rat_to_string, Rat};
use super::series::TruncatedSeries2;
use super::AlgebraError;

pub const LAMBDA: &str = "lambda";
pub const MU: &str = "mu";

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
struct OpKey {
    mult: SmallVec<[i32; 6]>,
    theta: SmallVec<[u32; 6]>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EulerOperator {
    vars: Vec<String>,
    terms: BTreeMap<OpKey, Rat>,
}

fn add_term(map: &mut BTreeMap<OpKey, Rat>, k: OpKey, c: Rat) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Coefficients of `(theta + b)^p` as `(k, C(p,k) b^(p-k))`.
fn shifted_power(p: u32, b: i32) -> Vec<(u32, Rat)> {
    (0..=p)
        .map(|k| {
            let c = binomial(BigInt::from(p), BigInt::from(k)) * BigInt::from(b).pow(p - k);
            (k, Rat::from_integer(c))
        })
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

impl EulerOperator {
    pub fn zero(vars: &[&str]) -> Self {
        EulerOperator { vars: vars.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn scalar(vars: &[&str], c: Rat) -> Self {
        let mut op = EulerOperator::zero(vars);
        let n = vars.len();
        add_term(
            &mut op.terms,
            OpKey { mult: SmallVec::from_elem(0, n), theta: SmallVec::from_elem(0, n) },
            c,
        );
        op
    }

    pub fn from_int(vars: &[&str], c: i64) -> Self {
        EulerOperator::scalar(vars, Rat::from_integer(BigInt::from(c)))
    }

    /// Single term `c * x^mult * theta^theta`.
    pub fn term(vars: &[&str], mult: &[i32], theta: &[u32], c: Rat) -> Self {
        let mut op = EulerOperator::zero(vars);
        assert_eq!(mult.len(), vars.len());
        assert_eq!(theta.len(), vars.len());
        add_term(&mut op.terms, OpKey { mult: mult.into(), theta: theta.into() }, c);
        op
    }


    /// Multiplication by the variable `name`.
    pub fn mult_var(vars: &[&str], name: &str) -> Self {
        let mut e = vec![0i32; vars.len()];
        e[vars.iter().position(|v| *v == name).expect("variable")] = 1;
        EulerOperator::term(vars, &e, &vec![0; vars.len()], Rat::one())
    }

    /// `theta` in the variable `name`.
    pub fn theta(vars: &[&str], name: &str) -> Self {
        let mut t = vec![0u32; vars.len()];
        t[vars.iter().position(|v| *v == name).expect("variable")] = 1;
        EulerOperator::term(vars, &vec![0; vars.len()], &t, Rat::one())
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as `(mult, theta, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &[u32], &Rat)> {
        self.terms.iter().map(|(k, c)| (k.mult.as_slice(), k.theta.as_slice(), c))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = EulerOperator { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            add_term(&mut out.terms, k.clone(), c * s);
        }
        out
    }

    fn check_vars(&self, o: &Self) {
        assert_eq!(self.vars, o.vars, "operators over different variables");
    }

    /// Operator composition `self ∘ o`, normal ordered.
    pub fn compose(&self, o: &Self) -> Self {
        self.check_vars(o);
        let n = self.vars.len();
        let mut out = EulerOperator { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let mult: SmallVec<[i32; 6]> = (0..n).map(|i| ka.mult[i] + kb.mult[i]).collect();
                // theta^p x^b = x^b (theta + b)^p
                let mut partial: Vec<(SmallVec<[u32; 6]>, Rat)> =
                    vec![(kb.theta.clone(), ca * cb)];
                for i in 0..n {
                    if ka.theta[i] == 0 {
                        continue;
                    }
                    let expansion = shifted_power(ka.theta[i], kb.mult[i]);
                    let mut next = Vec::with_capacity(partial.len() * expansion.len());
                    for (t, c) in &partial {
                        for (k, e) in &expansion {
                            let mut t2 = t.clone();
                            t2[i] += k;
                            next.push((t2, c * e));
                        }
                    }
                    partial = next;
                }
                for (theta, c) in partial {
                    add_term(&mut out.terms, OpKey { mult: mult.clone(), theta }, c);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let vars = self.vars();
        (0..e).fold(EulerOperator::from_int(&vars, 1), |acc, _| acc.compose(self))
    }

    /// `x^(-gamma) ∘ self ∘ x^gamma`, i.e. `theta_i -> theta_i + gamma_i`.
    pub fn conjugate_by_monomial(&self, gamma: &[i32]) -> Self {
        let vars = self.vars();
        let mut out = EulerOperator::zero(&vars);
        let n = vars.len();
        let left = EulerOperator::term(&vars, &gamma.iter().map(|g| -g).collect::<Vec<_>>(), &vec![0; n], Rat::one());
        let right = EulerOperator::term(&vars, gamma, &vec![0; n], Rat::one());
        for (k, c) in &self.terms {
            let single = EulerOperator { vars: self.vars.clone(), terms: [(k.clone(), c.clone())].into() };
            out = &out + &left.compose(&single).compose(&right);
        }
        out
    }

    /// Left multiplication by `x^e`.
    pub fn left_mul_monomial(&self, e: &[i32]) -> Self {
        let mut out = EulerOperator { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            let mult = k.mult.iter().zip(e).map(|(a, b)| a + b).collect();
            add_term(&mut out.terms, OpKey { mult, theta: k.theta.clone() }, c.clone());
        }
        out
    }

    /// Per-variable exponent needed to clear negative multiplication powers.
    pub fn denominator_exponents(&self) -> Vec<i32> {
        let mut out = vec![0i32; self.vars.len()];
        for k in self.terms.keys() {
            for (o, &a) in out.iter_mut().zip(&k.mult) {
                *o = (*o).max(-a);
            }
        }
        out
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.keys().any(|k| k.mult.iter().any(|&a| a < 0))
    }

    /// Largest total degree of the multiplication factors.
    pub fn mult_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.mult.iter().map(|&a| a.max(0) as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn theta_order(&self) -> u32 {
        self.terms.keys().map(|k| k.theta.iter().sum()).max().unwrap_or(0)
    }

    /// Rewrite in new variables: each multiplication monomial goes through
    /// `mult_image`, each `theta_i` becomes `theta_images[i]` (an operator in
    /// the target variables).
    pub fn change_variables(
        &self,
        target: &[&str],
        mult_image: impl Fn(&[i32]) -> Result<Vec<i32>, AlgebraError>,
        theta_images: &[EulerOperator],
    ) -> Result<Self, AlgebraError> {
        assert_eq!(theta_images.len(), self.vars.len());
        let mut out = EulerOperator::zero(target);
        let zero_t = vec![0u32; target.len()];
        for (k, c) in &self.terms {
            let m = mult_image(&k.mult)?;
            let mut t = EulerOperator::term(target, &m, &zero_t, c.clone());
            for (i, &p) in k.theta.iter().enumerate() {
                if p > 0 {
                    t = t.compose(&theta_images[i].pow(p));
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Coefficient polynomial of each theta monomial.
    pub fn theta_coefficients(&self) -> Result<BTreeMap<Vec<u32>, MPoly>, AlgebraError> {
        if self.is_laurent() {
            return Err(AlgebraError::LaurentOperator);
        }
        let vars = self.vars();
        let mut out: BTreeMap<Vec<u32>, MPoly> = BTreeMap::new();
        for (k, c) in &self.terms {
            let e: Vec<u32> = k.mult.iter().map(|&a| a as u32).collect();
            let t = MPoly::monomial(&vars, &e, c.clone());
            let slot = out.entry(k.theta.to_vec()).or_insert_with(MPoly::zero);
            *slot = &*slot + &t;
        }
        Ok(out)
    }

    pub fn from_theta_coefficients(vars: &[&str], coeffs: &BTreeMap<Vec<u32>, MPoly>) -> Self {
        let mut out = EulerOperator::zero(vars);
        for (theta, p) in coeffs {
            for (e, c) in p.terms() {
                let mult: SmallVec<[i32; 6]> = vars.iter().map(|v| p.exponent_of(e, v) as i32).collect();
                add_term(&mut out.terms, OpKey { mult, theta: theta.as_slice().into() }, c.clone());
            }
        }
        out
    }

    /// Apply to a bivariate series. The reliable order drops by the
    /// multiplication degree of the operator.
    pub fn apply(&self, s: &TruncatedSeries2) -> Result<TruncatedSeries2, AlgebraError> {
        if self.is_laurent() {
            return Err(AlgebraError::LaurentOperator);
        }
        let sv = s.vars();
        if self.vars.len() != 2 || self.vars[0] != sv[0] || self.vars[1] != sv[1] {
            return Err(AlgebraError::VariableMismatch(format!("{:?} vs {:?}", self.vars, sv)));
        }
        let deg = self.mult_degree();
        if deg > s.order() {
            return Err(AlgebraError::Invalid("operator degree exceeds series order".into()));
        }
        let order = s.order() - deg;
        let mut out = TruncatedSeries2::zeros(sv, order);
        for (k, c) in &self.terms {
            let (a, b) = (k.mult[0] as u32, k.mult[1] as u32);
            let (p, q) = (k.theta[0], k.theta[1]);
            for d in 0..=order {
                for m in 0..=d {
                    let n = d - m;
                    if n < a || m < b {
                        continue;
                    }
                    let (n0, m0) = (n - a, m - b);
                    let src = s.coeff(n0, m0)?;
                    if src.is_zero() {
                        continue;
                    }
                    let w = BigInt::from(n0).pow(p) * BigInt::from(m0).pow(q);
                    if w.is_zero() {
                        continue;
                    }
                    let v = out.coeff(n, m)? + c * src * Rat::from_integer(w);
                    out.set(n, m, v)?;
                }
            }
        }
        Ok(out)
    }

    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&OpKey> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let ta: u32 = a.theta.iter().sum();
            let tb: u32 = b.theta.iter().sum();
            let ma: i32 = a.mult.iter().sum();
            let mb: i32 = b.mult.iter().sum();
            (tb, &b.theta, ma, &a.mult).cmp(&(ta, &a.theta, mb, &b.mult))
        });
        let mut s = String::new();
        for (idx, k) in keys.into_iter().enumerate() {
            let c = &self.terms[k];
            let neg = c < &Rat::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut f: Vec<String> = Vec::new();
            let trivial = k.mult.iter().all(|&x| x == 0) && k.theta.iter().all(|&x| x == 0);
            if !a.is_one() || trivial {
                f.push(rat_to_string(&a));
            }
            for (i, &e) in k.mult.iter().enumerate() {
                match e {
                    0 => {}
                    1 => f.push(self.vars[i].clone()),
                    _ => f.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            for (i, &e) in k.theta.iter().enumerate() {
                match e {
                    0 => {}
                    1 => f.push(format!("theta_{}", self.vars[i])),
                    _ => f.push(format!("theta_{}^{}", self.vars[i], e)),
                }
            }
            s.push_str(&f.join("*"));
        }
        s
    }

    /// Parse an operator written with its multiplication factors to the left
    /// of every theta, e.g. `l^2 T_l^3 + m T_l (T_l - 1)`. Identifiers
    /// `theta_<var>` denote theta operators; aliases rename identifiers first.
    pub fn parse_normal_ordered(
        vars: &[&str],
        s: &str,
        aliases: &[(&str, &str)],
    ) -> Result<Self, AlgebraError> {
        let p = super::parse::parse_poly_with_aliases(s, aliases)?;
        let mut coeffs: BTreeMap<Vec<u32>, MPoly> = BTreeMap::new();
        let theta_names: Vec<String> = vars.iter().map(|v| format!("theta_{v}")).collect();
        for v in p.vars() {
            if !vars.contains(&v.as_str()) && !theta_names.contains(v) {
                return Err(AlgebraError::VariableMismatch(v.clone()));
            }
        }
        for (e, c) in p.terms() {
            let theta: Vec<u32> = theta_names.iter().map(|t| p.exponent_of(e, t)).collect();
            let mult: Vec<u32> = vars.iter().map(|v| p.exponent_of(e, v)).collect();
            let slot = coeffs.entry(theta).or_insert_with(MPoly::zero);
            *slot = &*slot + &MPoly::monomial(vars, &mult, c.clone());
        }
        Ok(EulerOperator::from_theta_coefficients(vars, &coeffs))
    }
}

impl fmt::Display for EulerOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl Add for &EulerOperator {
    type Output = EulerOperator;
    fn add(self, o: &EulerOperator) -> EulerOperator {
        self.check_vars(o);
        let mut out = self.clone();
        for (k, c) in &o.terms {
            add_term(&mut out.terms, k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &EulerOperator {
    type Output = EulerOperator;
    fn sub(self, o: &EulerOperator) -> EulerOperator {
        self + &(-o)
    }
}

impl Neg for &EulerOperator {
    type Output = EulerOperator;
    fn neg(self) -> EulerOperator {
        self.scale(&-Rat::one())
    }
}

impl Neg for EulerOperator {
    type Output = EulerOperator;
    fn neg(self) -> EulerOperator {
        -&self
    }
}

impl Mul for &EulerOperator {
    type Output = EulerOperator;
    fn mul(self, o: &EulerOperator) -> EulerOperator {
        self.compose(o)
    }
}

super::mpoly::forward_owned!(Add, add, EulerOperator);
super::mpoly::forward_owned!(Sub, sub, EulerOperator);
super::mpoly::forward_owned!(Mul, mul, EulerOperator);

/// Builders for operators in `(lambda, mu)`.
pub mod lm {
    use super::*;

    pub const VARS: [&str; 2] = [LAMBDA, MU];

    pub fn c(k: i64) -> EulerOperator {
        EulerOperator::from_int(&VARS, k)
    }
    pub fn lambda() -> EulerOperator {
        EulerOperator::mult_var(&VARS, LAMBDA)
    }
    pub fn mu() -> EulerOperator {
        EulerOperator::mult_var(&VARS, MU)
    }
    pub fn theta_lambda() -> EulerOperator {
        EulerOperator::theta(&VARS, LAMBDA)
    }
    pub fn theta_mu() -> EulerOperator {
        EulerOperator::theta(&VARS, MU)
    }
    /// Parse with `l`, `m`, `Tl`, `Tm` shorthands.
    pub fn parse(s: &str) -> Result<EulerOperator, AlgebraError> {
        EulerOperator::parse_normal_ordered(
            &VARS,
            s,
            &[("l", LAMBDA), ("m", MU), ("Tl", "theta_lambda"), ("Tm", "theta_mu")],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::lm::*;
    use super::*;

    #[test]
    fn commutation_rule() {
        // theta x = x (theta + 1)
        let lhs = &theta_lambda() * &lambda();
        let rhs = &lambda() * &(&theta_lambda() + &c(1));
        assert_eq!(lhs, rhs);
        // theta^2 x^3 = x^3 (theta + 3)^2
        let lhs = &theta_lambda().pow(2) * &lambda().pow(3);
        let t3 = &theta_lambda() + &c(3);
        assert_eq!(lhs, &lambda().pow(3) * &(&t3 * &t3));
    }

    #[test]
    fn parse_and_print() {
        let op = parse("Tl(Tl + 2Tm) - l(2Tl+5Tm+1)(2Tl+5Tm+2)").unwrap();
        let built = &(&theta_lambda() * &(&theta_lambda() + &(&c(2) * &theta_mu())))
            - &(&lambda()
                * &(&(&(&c(2) * &theta_lambda()) + &(&c(5) * &theta_mu())) + &c(1))
                * &(&(&(&c(2) * &theta_lambda()) + &(&c(5) * &theta_mu())) + &c(2)));
        assert_eq!(op, built);
        assert!(op.to_string().starts_with("theta_lambda^2"));
    }

    #[test]
    fn apply_to_series() {
        let s = TruncatedSeries2::from_fn(VARS, 4, |n, m| Rat::from_integer(BigInt::from(n + 2 * m + 1)));
        let op = &lambda() * &theta_mu();
        let r = op.apply(&s).unwrap();
        assert_eq!(r.order(), 3);
        // coefficient of l^2 m: from (1,1): 1 * (1 + 2 + 1)
        assert_eq!(*r.coeff(2, 1).unwrap(), Rat::from_integer(BigInt::from(4)));
        assert_eq!(*r.coeff(0, 2).unwrap(), Rat::zero());
    }
}
