//! Birational maps of the plane with explicit inverses, and the map taking
//! the period system to the uniformizing equation.

use crate::algebra::euler::{LAMBDA, MU};
use crate::algebra::{parse_ratfun_with_aliases, RatFun};

use super::ConformalError;

pub const X: &str = "x";
pub const Y: &str = "y";

#[derive(Debug, Clone, PartialEq)]
pub struct BirationalMap2 {
    pub source: [String; 2],
    pub target: [String; 2],
    /// Target coordinates as functions of the source ones.
    pub forward: [RatFun; 2],
    /// Source coordinates as functions of the target ones.
    pub inverse: [RatFun; 2],
}

fn parse(s: &str) -> RatFun {
    parse_ratfun_with_aliases(s, &[("l", LAMBDA), ("m", MU)]).expect("valid rational function text")
}

impl BirationalMap2 {
    pub fn new(source: [&str; 2], target: [&str; 2], forward: [RatFun; 2], inverse: [RatFun; 2]) -> Self {
        BirationalMap2 { source: source.map(String::from), target: target.map(String::from), forward, inverse }
    }

    pub fn identity(vars: [&str; 2]) -> Self {
        Self::new(vars, vars, vars.map(RatFun::var), vars.map(RatFun::var))
    }

    /// `source_i -> inverse_i`: rewrites functions of the source variables in
    /// the target ones.
    pub fn inverse_substitution(&self) -> Vec<(&str, RatFun)> {
        self.source.iter().map(String::as_str).zip(self.inverse.iter().cloned()).collect()
    }

    /// `target_i -> forward_i`.
    pub fn forward_substitution(&self) -> Vec<(&str, RatFun)> {
        self.target.iter().map(String::as_str).zip(self.forward.iter().cloned()).collect()
    }

    /// A function of the source variables rewritten in the target ones.
    pub fn push(&self, f: &RatFun) -> Result<RatFun, ConformalError> {
        Ok(f.substitute(&self.inverse_substitution())?)
    }

    /// A function of the target variables rewritten in the source ones.
    pub fn pull(&self, f: &RatFun) -> Result<RatFun, ConformalError> {
        Ok(f.substitute(&self.forward_substitution())?)
    }

    pub fn inverted(&self) -> Self {
        BirationalMap2 {
            source: self.target.clone(),
            target: self.source.clone(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &BirationalMap2) -> Result<Self, ConformalError> {
        if g.source != self.target {
            return Err(ConformalError::Variables(g.source.to_vec()));
        }
        let fw: Vec<RatFun> = g.forward.iter().map(|h| self.pull(h)).collect::<Result<_, _>>()?;
        let inv: Vec<RatFun> = self.inverse.iter().map(|h| g.push(h)).collect::<Result<_, _>>()?;
        Ok(BirationalMap2 {
            source: self.source.clone(),
            target: g.target.clone(),
            forward: fw.try_into().expect("two"),
            inverse: inv.try_into().expect("two"),
        })
    }

    /// `forward(inverse)` and `inverse(forward)` are both the identity.
    pub fn is_birational(&self) -> Result<bool, ConformalError> {
        let there = self.inverse.iter().map(|h| self.pull(h)).collect::<Result<Vec<_>, _>>()?;
        let back = self.forward.iter().map(|h| self.push(h)).collect::<Result<Vec<_>, _>>()?;
        let id_s = self.source.iter().map(|v| RatFun::var(v));
        let id_t = self.target.iter().map(|v| RatFun::var(v));
        Ok(there.into_iter().eq(id_s) && back.into_iter().eq(id_t))
    }
}

/// `f(lambda, mu) = (25 mu / (2 (lambda - 1/4)^3), -3125 mu^2 / (lambda - 1/4)^5)`.
pub fn f_map() -> BirationalMap2 {
    BirationalMap2::new(
        [LAMBDA, MU],
        [X, Y],
        [parse("25 m/(2 (l - 1/4)^3)"), parse("-3125 m^2/(l - 1/4)^5")],
        [parse("1/4 - y/(20 x^2)"), parse("-y^3/(10^5 x^5)")],
    )
}

/// Three blow-ups at `(1/4, 0)` followed by eliminating `lambda`.
pub fn psi0() -> BirationalMap2 {
    BirationalMap2::new(
        [LAMBDA, MU],
        ["u2", "u3"],
        [parse("m/(l - 1/4)^2"), parse("m/(l - 1/4)^3")],
        [parse("u2/u3 + 1/4"), parse("u2^3/u3^2")],
    )
}

/// Blow-up of the origin of the `(x, y)` plane.
pub fn psi1() -> BirationalMap2 {
    BirationalMap2::new([X, Y], [X, "s"], [parse("x"), parse("y/x")], [parse("x"), parse("x s")])
}

pub fn chi() -> BirationalMap2 {
    BirationalMap2::new(["u2", "u3"], [X, "s"], [parse("25/2 u3"), parse("-250 u2")], [parse("-s/250"), parse("2 x/25")])
}

/// `psi1^-1 . chi . psi0`.
pub fn f_factored() -> Result<BirationalMap2, ConformalError> {
    psi0().then(&chi())?.then(&psi1().inverted())
}
