//! Sparse multivariate polynomials with rational coefficients.
//!
//! `RawPoly` works over a fixed number of anonymous variables; `MPoly` adds
//! sorted variable names and prunes variables that do not occur.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::rat::{rat_to_string, Rat};

pub(crate) type Exps = SmallVec<[u32; 4]>;

/// Exponent vector ordered by graded lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Monomial(pub(crate) Exps);

impl Monomial {
    pub(crate) fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub(crate) fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub(crate) fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn checked_div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Exps::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    pub(crate) fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_term(map: &mut BTreeMap<Monomial, Rat>, m: Monomial, c: Rat) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
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

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct RawPoly {
    pub(crate) n: usize,
    pub(crate) terms: BTreeMap<Monomial, Rat>,
}

impl RawPoly {
    pub(crate) fn zero(n: usize) -> Self {
        RawPoly { n, terms: BTreeMap::new() }
    }

    pub(crate) fn constant(n: usize, c: Rat) -> Self {
        let mut p = RawPoly::zero(n);
        add_term(&mut p.terms, Monomial::one(n), c);
        p
    }

    pub(crate) fn var(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.0[i] = 1;
        let mut p = RawPoly::zero(n);
        p.terms.insert(m, Rat::one());
        p
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub(crate) fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.last_key_value()
    }

    pub(crate) fn add(&self, o: &RawPoly) -> RawPoly {
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            add_term(&mut out.terms, m.clone(), c.clone());
        }
        out
    }

    pub(crate) fn sub(&self, o: &RawPoly) -> RawPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            add_term(&mut out.terms, m.clone(), -c);
        }
        out
    }

    pub(crate) fn neg(&self) -> RawPoly {
        RawPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub(crate) fn scale(&self, s: &Rat) -> RawPoly {
        if s.is_zero() {
            return RawPoly::zero(self.n);
        }
        RawPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub(crate) fn mul(&self, o: &RawPoly) -> RawPoly {
        let mut out = BTreeMap::new();
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                add_term(&mut out, ma.mul(mb), ca * cb);
            }
        }
        RawPoly { n: self.n, terms: out }
    }

    pub(crate) fn mul_term(&self, m: &Monomial, c: &Rat) -> RawPoly {
        RawPoly {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub(crate) fn pow(&self, e: u32) -> RawPoly {
        let mut result = RawPoly::constant(self.n, Rat::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub(crate) fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub(crate) fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub(crate) fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    pub(crate) fn derivative(&self, i: usize) -> RawPoly {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut k = m.clone();
                k.0[i] -= 1;
                add_term(&mut out, k, c * Rat::from_integer(BigInt::from(e)));
            }
        }
        RawPoly { n: self.n, terms: out }
    }

    /// Coefficients with respect to variable `i`, indexed by its exponent.
    pub(crate) fn coeffs_in(&self, i: usize) -> Vec<RawPoly> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![RawPoly::zero(self.n); d + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            let mut k = m.clone();
            k.0[i] = 0;
            out[e].terms.insert(k, c.clone());
        }
        out
    }

    pub(crate) fn from_coeffs_in(n: usize, i: usize, coeffs: &[RawPoly]) -> RawPoly {
        let mut out = RawPoly::zero(n);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut k = m.clone();
                k.0[i] += e as u32;
                out.terms.insert(k, v.clone());
            }
        }
        out
    }

    /// Componentwise minimum of all exponent vectors.
    pub(crate) fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one(self.n);
        };
        let mut out = first.clone();
        for m in it {
            for (a, b) in out.0.iter_mut().zip(&m.0) {
                *a = (*a).min(*b);
            }
        }
        out
    }

    pub(crate) fn div_monomial(&self, m: &Monomial) -> RawPoly {
        RawPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.checked_div(m).expect("monomial divides"), c.clone()))
                .collect(),
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub(crate) fn div_exact(&self, d: &RawPoly) -> Option<RawPoly> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let dm = dm.clone();
        let dc_inv = dc.recip();
        let mut r = self.clone();
        let mut q = RawPoly::zero(self.n);
        while let Some((rm, rc)) = r.terms.last_key_value() {
            let m = rm.checked_div(&dm)?;
            let c = rc * &dc_inv;
            for (tm, tc) in &d.terms {
                add_term(&mut r.terms, tm.mul(&m), -(tc * &c));
            }
            q.terms.insert(m, c);
        }
        Some(q)
    }

    /// Factor `f` such that `f * self` has coprime integer coefficients and
    /// a positive leading coefficient.
    pub(crate) fn integer_normalizer(&self) -> Rat {
        let mut lcm_den = BigInt::one();
        for c in self.terms.values() {
            lcm_den = lcm_den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let v = c.numer() * (&lcm_den / c.denom());
            g = g.gcd(&v);
        }
        if g.is_zero() {
            return Rat::one();
        }
        let mut f = Rat::new(lcm_den, g);
        if let Some((_, lc)) = self.leading() {
            if lc.is_negative() {
                f = -f;
            }
        }
        f
    }

    pub(crate) fn normalized(&self) -> RawPoly {
        self.scale(&self.integer_normalizer())
    }

    /// Re-embed into `n_new` variables with `map[i]` the new index of old var `i`.
    pub(crate) fn remap(&self, n_new: usize, map: &[usize]) -> RawPoly {
        let mut out = RawPoly::zero(n_new);
        for (m, c) in &self.terms {
            let mut k = Monomial::one(n_new);
            for (i, &e) in m.0.iter().enumerate() {
                k.0[map[i]] += e;
            }
            add_term(&mut out.terms, k, c.clone());
        }
        out
    }
}

/// Polynomial over named variables. Variables are kept sorted and every
/// listed variable occurs in at least one term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    vars: Vec<String>,
    raw: RawPoly,
}

impl Default for MPoly {
    fn default() -> Self {
        MPoly::zero()
    }
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { vars: Vec::new(), raw: RawPoly::zero(0) }
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        MPoly { vars: Vec::new(), raw: RawPoly::constant(0, c) }
    }

    pub fn from_int(c: i64) -> Self {
        MPoly::constant(Rat::from_integer(BigInt::from(c)))
    }

    pub fn var(name: &str) -> Self {
        MPoly { vars: vec![name.to_string()], raw: RawPoly::var(1, 0) }
    }

    /// Monomial `c * prod vars[i]^exps[i]`.
    pub fn monomial(vars: &[&str], exps: &[u32], c: Rat) -> Self {
        MPoly::from_terms(vars, std::iter::once((exps.to_vec(), c)))
    }

    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let n = vars.len();
        let mut raw = RawPoly::zero(n);
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent vector length");
            add_term(&mut raw.terms, Monomial(e.into_iter().collect()), c);
        }
        MPoly::from_raw(vars.iter().map(|s| s.to_string()).collect(), raw)
    }

    pub(crate) fn from_raw(vars: Vec<String>, raw: RawPoly) -> Self {
        // sort variable names, merging duplicates
        let mut names: Vec<String> = vars.clone();
        names.sort();
        names.dedup();
        let sorted = names.len() == vars.len() && names.iter().zip(&vars).all(|(a, b)| a == b);
        let raw = if sorted {
            raw
        } else {
            let map: Vec<usize> = vars.iter().map(|v| names.binary_search(v).unwrap()).collect();
            raw.remap(names.len(), &map)
        };
        let used: Vec<bool> = (0..names.len()).map(|i| raw.uses_var(i)).collect();
        if used.iter().all(|&u| u) {
            return MPoly { vars: names, raw };
        }
        let mut new_vars = Vec::new();
        let mut keep = Vec::new();
        for (i, v) in names.into_iter().enumerate() {
            if used[i] {
                keep.push(i);
                new_vars.push(v);
            }
        }
        let mut out = RawPoly::zero(keep.len());
        for (m, c) in raw.terms {
            let k = Monomial(keep.iter().map(|&i| m.0[i]).collect());
            out.terms.insert(k, c);
        }
        MPoly { vars: new_vars, raw: out }
    }

    pub(crate) fn lifted(&self, vars: &[String]) -> Cow<'_, RawPoly> {
        if self.vars == vars {
            return Cow::Borrowed(&self.raw);
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("variable present"))
            .collect();
        Cow::Owned(self.raw.remap(vars.len(), &map))
    }

    pub(crate) fn union_vars(&self, o: &MPoly) -> Vec<String> {
        if self.vars == o.vars {
            return self.vars.clone();
        }
        let set: BTreeSet<&String> = self.vars.iter().chain(&o.vars).collect();
        set.into_iter().cloned().collect()
    }

    fn binop(&self, o: &MPoly, f: impl Fn(&RawPoly, &RawPoly) -> RawPoly) -> MPoly {
        let vars = self.union_vars(o);
        let a = self.lifted(&vars);
        let b = o.lifted(&vars);
        MPoly::from_raw(vars, f(&a, &b))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.raw.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        self.raw.constant_value()
    }

    pub fn num_terms(&self) -> usize {
        self.raw.terms.len()
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &Rat)> {
        self.raw.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    /// Exponent of `var` in each term, or 0 if the variable is absent.
    pub fn exponent_of(&self, exps: &[u32], var: &str) -> u32 {
        self.vars.iter().position(|v| v == var).map_or(0, |i| exps[i])
    }

    pub fn leading_coefficient(&self) -> Rat {
        self.raw.leading().map_or_else(Rat::zero, |(_, c)| c.clone())
    }

    pub fn degree(&self, var: &str) -> u32 {
        self.vars
            .iter()
            .position(|v| v == var)
            .map_or(0, |i| self.raw.degree_in(i))
    }

    pub fn total_degree(&self) -> u32 {
        self.raw.total_degree()
    }

    pub fn scale(&self, s: &Rat) -> MPoly {
        MPoly::from_raw(self.vars.clone(), self.raw.scale(s))
    }

    pub fn pow(&self, e: u32) -> MPoly {
        MPoly { vars: self.vars.clone(), raw: self.raw.pow(e) }
    }

    pub fn diff(&self, var: &str) -> MPoly {
        match self.vars.iter().position(|v| v == var) {
            Some(i) => MPoly::from_raw(self.vars.clone(), self.raw.derivative(i)),
            None => MPoly::zero(),
        }
    }

    /// Coefficients with respect to `var`, indexed by exponent.
    pub fn coeffs_in(&self, var: &str) -> Vec<MPoly> {
        match self.vars.iter().position(|v| v == var) {
            Some(i) => self
                .raw
                .coeffs_in(i)
                .into_iter()
                .map(|c| MPoly::from_raw(self.vars.clone(), c))
                .collect(),
            None if self.is_zero() => Vec::new(),
            None => vec![self.clone()],
        }
    }

    pub fn from_coeffs_in(var: &str, coeffs: &[MPoly]) -> MPoly {
        let x = MPoly::var(var);
        let mut out = MPoly::zero();
        let mut pw = MPoly::one();
        for c in coeffs {
            out = &out + &(c * &pw);
            pw = &pw * &x;
        }
        out
    }

    /// Exact quotient, `None` when not divisible.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        let vars = self.union_vars(d);
        let q = self.lifted(&vars).div_exact(&d.lifted(&vars))?;
        Some(MPoly::from_raw(vars, q))
    }

    pub fn gcd(&self, o: &MPoly) -> MPoly {
        let vars = self.union_vars(o);
        let g = super::gcd::gcd(&self.lifted(&vars), &o.lifted(&vars));
        MPoly::from_raw(vars, g)
    }

    /// Scalar making the polynomial primitive over the integers with a
    /// positive leading coefficient.
    pub fn integer_normalizer(&self) -> Rat {
        self.raw.integer_normalizer()
    }

    pub fn normalized(&self) -> MPoly {
        MPoly { vars: self.vars.clone(), raw: self.raw.normalized() }
    }

    /// Substitute rational values for some variables.
    pub fn eval_partial(&self, point: &[(&str, Rat)]) -> MPoly {
        let mut out = RawPoly::zero(self.vars.len());
        let idx: Vec<Option<&Rat>> = self
            .vars
            .iter()
            .map(|v| point.iter().find(|(n, _)| n == v).map(|(_, r)| r))
            .collect();
        for (m, c) in &self.raw.terms {
            let mut k = m.clone();
            let mut c = c.clone();
            for (i, val) in idx.iter().enumerate() {
                if let Some(val) = val {
                    c *= num_traits::pow((*val).clone(), m.0[i] as usize);
                    k.0[i] = 0;
                }
            }
            add_term(&mut out.terms, k, c);
        }
        MPoly::from_raw(self.vars.clone(), out)
    }

    /// Full evaluation; every variable must be assigned.
    pub fn eval(&self, point: &[(&str, Rat)]) -> Option<Rat> {
        self.eval_partial(point).constant_value()
    }

    /// Substitute polynomials for variables simultaneously.
    pub fn substitute(&self, map: &[(&str, MPoly)]) -> MPoly {
        let mut out = MPoly::zero();
        let images: Vec<MPoly> = self
            .vars
            .iter()
            .map(|v| {
                map.iter()
                    .find(|(n, _)| n == v)
                    .map_or_else(|| MPoly::var(v), |(_, p)| p.clone())
            })
            .collect();
        let mut cache: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(), p.clone()]).collect();
        for (m, c) in &self.raw.terms {
            let mut t = MPoly::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    pub fn rename(&self, map: &[(&str, &str)]) -> MPoly {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| {
                map.iter()
                    .find(|(a, _)| a == v)
                    .map_or_else(|| v.clone(), |(_, b)| b.to_string())
            })
            .collect();
        MPoly::from_raw(vars, self.raw.clone())
    }

    /// Canonical text: descending graded lexicographic order, explicit `*`
    /// and `^`.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.raw.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(rat_to_string(&a));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        self.binop(o, RawPoly::add)
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        self.binop(o, RawPoly::sub)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        self.binop(o, RawPoly::mul)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { vars: self.vars.clone(), raw: self.raw.neg() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, o: &$t) -> $t {
                (&self).$m(o)
            }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                self.$m(&o)
            }
        }
    };
}
pub(crate) use forward_owned;

forward_owned!(Add, add, MPoly);
forward_owned!(Sub, sub, MPoly);
forward_owned!(Mul, mul, MPoly);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}
