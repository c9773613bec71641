//! Formal sums `sum c_i log f_i`, used only through their derivatives.

use std::collections::BTreeMap;

use serde::Serialize;

use super::ConformalError;
use crate::algebra::{MPoly, Rat, RatFun};

/// Factors are kept primitive with positive leading coefficient and
/// pairwise distinct; constant factors are dropped since their logs have
/// zero derivative.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LogDerivativeExpr {
    terms: BTreeMap<String, (MPoly, Rat)>,
}

impl LogDerivativeExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c log f`.
    pub fn term(c: Rat, f: &MPoly) -> Result<Self, ConformalError> {
        let mut out = Self::zero();
        out.add_term(c, f)?;
        Ok(out)
    }

    /// `log f` for a rational function: log of numerator minus log of
    /// denominator.
    pub fn log(f: &RatFun) -> Result<Self, ConformalError> {
        let mut out = Self::zero();
        out.add_term(Rat::from_integer(1.into()), f.num())?;
        out.add_term(Rat::from_integer((-1).into()), f.den())?;
        Ok(out)
    }

    /// `sum c_i log f_i`.
    pub fn from_terms(terms: &[(Rat, MPoly)]) -> Result<Self, ConformalError> {
        let mut out = Self::zero();
        for (c, f) in terms {
            out.add_term(c.clone(), f)?;
        }
        Ok(out)
    }

    fn add_term(&mut self, c: Rat, f: &MPoly) -> Result<(), ConformalError> {
        if f.is_zero() {
            return Err(ConformalError::ZeroLog);
        }
        if f.is_constant() || c == Rat::from_integer(0.into()) {
            return Ok(());
        }
        let g = f.normalized();
        let key = g.to_canonical_string();
        let slot = self.terms.entry(key.clone()).or_insert((g, Rat::from_integer(0.into())));
        slot.1 += c;
        if slot.1 == Rat::from_integer(0.into()) {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (f, c) in o.terms.values() {
            out.add_term(c.clone(), f).expect("stored factors are nonzero");
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = Self::zero();
        for (f, c) in self.terms.values() {
            out.add_term(c * s, f).expect("stored factors are nonzero");
        }
        out
    }

    /// `sum c_i f_i' / f_i`.
    pub fn derivative(&self, var: &str) -> RatFun {
        self.terms.values().fold(RatFun::zero(), |acc, (f, c)| {
            let d = RatFun::new(f.diff(var), f.clone()).expect("nonzero factor");
            &acc + &d.scale(c)
        })
    }

    pub fn factors(&self) -> impl Iterator<Item = (&MPoly, &Rat)> {
        self.terms.values().map(|(f, c)| (f, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Serialize for LogDerivativeExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(String, String)> =
            self.terms.iter().map(|(k, (_, c))| (crate::algebra::rat::rat_to_string(c), k.clone())).collect();
        v.serialize(s)
    }
}
