//! Period series, the GKZ system and its reduction to two variables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::euler::{lm, LAMBDA, MU};
use crate::algebra::linalg::{integer_nullspace, rref, solve_particular};
use crate::algebra::rat::factorial;
use crate::algebra::{AlgebraError, EulerOperator, MPoly, Rat, TruncatedSeries2};

pub const SERIES_VARS: [&str; 2] = [LAMBDA, MU];
pub const GKZ_VARS: [&str; 6] = ["a1", "a2", "a3", "a4", "a5", "a6"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PeriodError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("zero kernel vector")]
    ZeroKernelVector,
    #[error("vector {0:?} is not in the kernel of A")]
    NotInKernel(Vec<i64>),
    #[error("monomial {0:?} is not a product of the chosen coordinates")]
    NotInLattice(Vec<i32>),
    #[error("invalid reduction data: {0}")]
    InvalidReduction(String),
    #[error("no second operator in the ansatz (kernel dimension {kernel}, L1 multiples {multiples})")]
    NoSolution { kernel: usize, multiples: usize },
}

/// `(-1)^m (5m+2n)! / (n! (m!)^3 (2m+n)!)`.
pub fn period_coefficient(n: u32, m: u32) -> Rat {
    let (n, m) = (n as u64, m as u64);
    let num = factorial(5 * m + 2 * n);
    let fm = factorial(m);
    let den = factorial(n) * &fm * &fm * &fm * factorial(2 * m + n);
    let v = num / den;
    Rat::from_integer(if m % 2 == 1 { -v } else { v })
}

/// Closed-form coefficients through total degree `order`.
pub fn period_series(order: u32) -> TruncatedSeries2 {
    let max = 5 * order as u64 + 1;
    let facts: Vec<BigInt> = {
        let mut f = Vec::with_capacity(max as usize + 1);
        f.push(BigInt::one());
        for k in 1..=max {
            let next = &f[k as usize - 1] * BigInt::from(k);
            f.push(next);
        }
        f
    };
    let idx: Vec<(u32, u32)> = (0..=order).flat_map(|d| (0..=d).map(move |m| (d - m, m))).collect();
    let vals: BTreeMap<(u32, u32), Rat> = idx
        .par_iter()
        .map(|&(n, m)| {
            let (n, m) = (n as usize, m as usize);
            let den = &facts[n] * &facts[m] * &facts[m] * &facts[m] * &facts[2 * m + n];
            let v = &facts[5 * m + 2 * n] / den;
            ((n as u32, m as u32), Rat::from_integer(if m % 2 == 1 { -v } else { v }))
        })
        .collect();
    TruncatedSeries2::from_fn(SERIES_VARS, order, |n, m| vals[&(n, m)].clone())
}

/// Coefficients generated from the operators alone, starting from
/// `c(0,0) = 1`: the first operator advances `n`, the second supplies the
/// `n = 0` column via `c(0,m) = -10 c(2,m-1) / m^2`.
pub fn series_from_recurrences(order: u32) -> TruncatedSeries2 {
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    let r = |x: i64| Rat::from_integer(BigInt::from(x));
    for m in 0..=order as i64 {
        let len = (order as i64 - m + 3) as usize;
        let mut col = vec![Rat::zero(); len];
        col[0] = if m == 0 {
            Rat::one()
        } else {
            let prev = &cols[(m - 1) as usize][2];
            let f = r(2) * r(1) * r(2 * 2 + 5 * (m - 1) + 1);
            -(f * prev) / r(m * m * m)
        };
        for n in 1..len as i64 {
            let num = r((2 * n + 5 * m - 1) * (2 * n + 5 * m));
            let den = r(n * (n + 2 * m));
            col[n as usize] = &col[n as usize - 1] * num / den;
        }
        cols.push(col);
    }
    TruncatedSeries2::from_fn(SERIES_VARS, order, |n, m| cols[m as usize][n as usize].clone())
}

pub fn l1() -> EulerOperator {
    lm::parse("Tl(Tl + 2Tm) - l(2Tl + 5Tm + 1)(2Tl + 5Tm + 2)").expect("valid operator text")
}

pub fn l2() -> EulerOperator {
    lm::parse("l^2 Tm^3 + m Tl(Tl - 1)(2Tl + 5Tm + 1)").expect("valid operator text")
}

pub fn l3() -> EulerOperator {
    lm::parse(
        "l^2(4Tl^2 - 2Tl Tm + 5Tm^2) - 8l^3(1 + 3Tl + 5Tm + 2Tl^2 + 5Tl Tm) + 25m Tl(Tl - 1)",
    )
    .expect("valid operator text")
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnihilationReport {
    pub checked_order: u32,
    pub nonzero: Vec<(u32, u32)>,
}

impl AnnihilationReport {
    pub fn annihilates(&self) -> bool {
        self.nonzero.is_empty()
    }
}

pub fn verify_annihilation(op: &EulerOperator, s: &TruncatedSeries2) -> Result<AnnihilationReport, PeriodError> {
    let r = op.apply(s)?;
    let nonzero = r.iter().filter(|(_, _, c)| !c.is_zero()).map(|(n, m, _)| (n, m)).collect();
    Ok(AnnihilationReport { checked_order: r.order(), nonzero })
}

/// Input of the GKZ system `A theta Phi = beta Phi`, box operators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GkzData {
    pub a: Vec<Vec<i64>>,
    pub beta: Vec<i64>,
    pub kernel: Vec<Vec<i64>>,
}

impl Default for GkzData {
    fn default() -> Self {
        GkzData {
            a: vec![
                vec![1, 1, 1, 1, 1, 1],
                vec![0, 1, 0, 0, 0, -1],
                vec![0, 0, 1, 0, 0, -1],
                vec![0, 0, 0, 1, -1, -2],
            ],
            beta: vec![-1, 0, 0, 0],
            kernel: vec![vec![2, 0, 0, -1, -1, 0], vec![1, -1, -1, 0, 2, -1]],
        }
    }
}

/// Coordinates `lambda = a^l`, `mu = a^m` and the prefactor `Phi = a^g eta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
    pub prefactor: Vec<i64>,
}

impl Default for Reduction {
    fn default() -> Self {
        Reduction {
            lambda: vec![-2, 0, 0, 1, 1, 0],
            mu: vec![-5, 1, 1, 2, 0, 1],
            prefactor: vec![-1, 0, 0, 0, 0, 0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GkzOperatorKind {
    Torus(usize),
    Box(Vec<i64>),
}

#[derive(Debug, Clone)]
pub struct GkzOperator {
    pub kind: GkzOperatorKind,
    pub op: EulerOperator,
}

fn in_kernel(a: &[Vec<i64>], v: &[i64]) -> bool {
    a.iter().all(|row| row.iter().zip(v).map(|(x, y)| x * y).sum::<i64>() == 0)
}

fn falling(vars: &[&str], j: usize, k: u32) -> EulerOperator {
    let n = vars.len();
    let mut t = vec![0u32; n];
    t[j] = 1;
    let theta = EulerOperator::term(vars, &vec![0; n], &t, Rat::one());
    (0..k).fold(EulerOperator::from_int(vars, 1), |acc, i| {
        acc.compose(&(&theta - &EulerOperator::from_int(vars, i as i64)))
    })
}

/// `d^u` written in Euler form: `a^(-u) prod theta_j (theta_j - 1) ... (theta_j - u_j + 1)`.
fn partial_power(u: &[i64]) -> EulerOperator {
    let neg: Vec<i32> = u.iter().map(|&x| -(x as i32)).collect();
    let mut op = EulerOperator::term(&GKZ_VARS, &neg, &[0; 6], Rat::one());
    for (j, &k) in u.iter().enumerate() {
        op = op.compose(&falling(&GKZ_VARS, j, k as u32));
    }
    op
}

/// Box operator `d^(u-) - d^(u+)` for `v = u+ - u-`.
pub fn box_operator(v: &[i64]) -> Result<EulerOperator, PeriodError> {
    if v.iter().all(|&x| x == 0) {
        return Err(PeriodError::ZeroKernelVector);
    }
    let plus: Vec<i64> = v.iter().map(|&x| x.max(0)).collect();
    let minus: Vec<i64> = v.iter().map(|&x| (-x).max(0)).collect();
    Ok(&partial_power(&minus) - &partial_power(&plus))
}

pub fn gkz_operators(data: &GkzData) -> Result<Vec<GkzOperator>, PeriodError> {
    let mut out = Vec::new();
    for (i, row) in data.a.iter().enumerate() {
        let mut op = EulerOperator::from_int(&GKZ_VARS, -data.beta[i]);
        for (j, &c) in row.iter().enumerate() {
            op = &op + &EulerOperator::theta(&GKZ_VARS, GKZ_VARS[j]).scale(&Rat::from_integer(c.into()));
        }
        out.push(GkzOperator { kind: GkzOperatorKind::Torus(i), op });
    }
    for v in &data.kernel {
        if !in_kernel(&data.a, v) {
            return Err(PeriodError::NotInKernel(v.clone()));
        }
        out.push(GkzOperator { kind: GkzOperatorKind::Box(v.clone()), op: box_operator(v)? });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct HolonomicSystem {
    /// Reduced operators in `(lambda, mu)`, one per box operator.
    pub operators: Vec<EulerOperator>,
    /// Whether every torus operator reduced to zero.
    pub torus_vanishes: bool,
}

/// Express `alpha` as `a * l + b * m`.
fn lattice_coords(alpha: &[i32], l: &[i64], m: &[i64]) -> Result<Vec<i32>, PeriodError> {
    let n = alpha.len();
    for i in 0..n {
        for j in i + 1..n {
            let det = l[i] * m[j] - l[j] * m[i];
            if det == 0 {
                continue;
            }
            let (x, y) = (alpha[i] as i64, alpha[j] as i64);
            let an = x * m[j] - y * m[i];
            let bn = l[i] * y - l[j] * x;
            if an % det != 0 || bn % det != 0 {
                return Err(PeriodError::NotInLattice(alpha.to_vec()));
            }
            let (a, b) = (an / det, bn / det);
            if (0..n).all(|k| a * l[k] + b * m[k] == alpha[k] as i64) {
                return Ok(vec![a as i32, b as i32]);
            }
            return Err(PeriodError::NotInLattice(alpha.to_vec()));
        }
    }
    Err(PeriodError::InvalidReduction("coordinate exponents are dependent".into()))
}

pub fn reduce_to_two_vars(
    data: &GkzData,
    ops: &[GkzOperator],
    red: &Reduction,
) -> Result<HolonomicSystem, PeriodError> {
    if !in_kernel(&data.a, &red.lambda) || !in_kernel(&data.a, &red.mu) {
        return Err(PeriodError::InvalidReduction("coordinates must lie in the kernel of A".into()));
    }
    let ag: Vec<i64> = data.a.iter().map(|r| r.iter().zip(&red.prefactor).map(|(x, y)| x * y).sum()).collect();
    if ag != data.beta {
        return Err(PeriodError::InvalidReduction("prefactor must satisfy A g = beta".into()));
    }
    let gamma: Vec<i32> = red.prefactor.iter().map(|&x| x as i32).collect();
    let theta_images: Vec<EulerOperator> = (0..6)
        .map(|j| {
            &lm::theta_lambda().scale(&Rat::from_integer(red.lambda[j].into()))
                + &lm::theta_mu().scale(&Rat::from_integer(red.mu[j].into()))
        })
        .collect();
    let mut operators = Vec::new();
    let mut torus_vanishes = true;
    for g in ops {
        let mut op = g.op.clone();
        if let GkzOperatorKind::Box(v) = &g.kind {
            let minus: Vec<i32> = v.iter().map(|&x| (-x).max(0) as i32).collect();
            op = op.left_mul_monomial(&minus);
        }
        let op = op.conjugate_by_monomial(&gamma);
        let reduced = op.change_variables(
            &SERIES_VARS,
            |alpha| lattice_coords(alpha, &red.lambda, &red.mu).map_err(|e| AlgebraError::Invalid(e.to_string())),
            &theta_images,
        )?;
        let clear = reduced.denominator_exponents();
        let reduced = reduced.left_mul_monomial(&clear);
        match g.kind {
            GkzOperatorKind::Torus(_) => torus_vanishes &= reduced.is_zero(),
            GkzOperatorKind::Box(_) => operators.push(reduced),
        }
    }
    Ok(HolonomicSystem { operators, torus_vanishes })
}

/// Theta monomials of order at most two, in ansatz order.
pub const SECOND_ORDER_SLOTS: [(u32, u32); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

#[derive(Debug, Clone)]
pub struct SecondOperator {
    /// Canonical representative modulo left multiples of the first operator.
    pub operator: EulerOperator,
    pub kernel_dim: usize,
    pub multiples_dim: usize,
    /// `operator = scale * L3 + multiplier * L1` when such a decomposition exists.
    pub l3_scale: Option<Rat>,
    pub l1_multiplier: Option<MPoly>,
}

fn monomials_upto(d: i64) -> Vec<(u32, u32)> {
    if d < 0 {
        return Vec::new();
    }
    let d = d as u32;
    (0..=d).flat_map(|t| (0..=t).map(move |b| (t - b, b))).collect()
}

fn operator_coordinates(op: &EulerOperator, monos: &[(u32, u32)]) -> Option<Vec<Rat>> {
    let mut v = vec![Rat::zero(); SECOND_ORDER_SLOTS.len() * monos.len()];
    for (mult, theta, c) in op.terms() {
        if mult.iter().any(|&x| x < 0) {
            return None;
        }
        let s = SECOND_ORDER_SLOTS.iter().position(|&(p, q)| p == theta[0] && q == theta[1])?;
        let k = monos.iter().position(|&(a, b)| a == mult[0] as u32 && b == mult[1] as u32)?;
        v[s * monos.len() + k] = c.clone();
    }
    Some(v)
}

fn coordinates_to_operator(v: &[Rat], monos: &[(u32, u32)]) -> EulerOperator {
    let mut op = EulerOperator::zero(&SERIES_VARS);
    for (s, &(p, q)) in SECOND_ORDER_SLOTS.iter().enumerate() {
        for (k, &(a, b)) in monos.iter().enumerate() {
            let c = &v[s * monos.len() + k];
            if !c.is_zero() {
                op = &op + &EulerOperator::term(&SERIES_VARS, &[a as i32, b as i32], &[p, q], c.clone());
            }
        }
    }
    op
}

/// Search for second-order operators with polynomial coefficients of degree
/// at most `degree` annihilating the period series through `order`, modulo
/// left multiples of the first operator.
pub fn find_second_operator(degree: u32, order: u32) -> Result<SecondOperator, PeriodError> {
    let eta = period_series(order);
    let monos = monomials_upto(degree as i64);
    let cols = SECOND_ORDER_SLOTS.len() * monos.len();
    let eqs: Vec<(u32, u32)> = (0..=order).flat_map(|d| (0..=d).map(move |m| (d - m, m))).collect();
    let rows: Vec<Vec<BigInt>> = eqs
        .par_iter()
        .map(|&(n, m)| {
            let mut row = vec![BigInt::zero(); cols];
            for (s, &(p, q)) in SECOND_ORDER_SLOTS.iter().enumerate() {
                for (k, &(a, b)) in monos.iter().enumerate() {
                    if n < a || m < b {
                        continue;
                    }
                    let (n0, m0) = (n - a, m - b);
                    let c = eta.coeff(n0, m0).expect("within order");
                    let w = BigInt::from(n0).pow(p) * BigInt::from(m0).pow(q);
                    row[s * monos.len() + k] = c.numer() * w;
                }
            }
            row
        })
        .collect();
    let kernel = integer_nullspace(&rows, cols);
    let first = l1();
    let multiples: Vec<Vec<Rat>> = monomials_upto(degree as i64 - 1)
        .into_iter()
        .map(|(a, b)| {
            let p = EulerOperator::term(&SERIES_VARS, &[a as i32, b as i32], &[0, 0], Rat::one());
            operator_coordinates(&p.compose(&first), &monos).expect("multiple lies in the ansatz")
        })
        .collect();
    let mut m_rref = multiples.clone();
    let pivots = rref(&mut m_rref);
    let multiples_dim = pivots.len();
    if kernel.len() <= multiples_dim {
        return Err(PeriodError::NoSolution { kernel: kernel.len(), multiples: multiples_dim });
    }
    // reduce each kernel vector modulo the multiples; keep the first survivor
    let reduce = |v: &[Rat]| -> Vec<Rat> {
        let mut v = v.to_vec();
        for (r, &p) in pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(&m_rref[r]) {
                *x -= &f * y;
            }
        }
        v
    };
    let mut rep = kernel
        .iter()
        .map(|k| reduce(k))
        .find(|v| v.iter().any(|x| !x.is_zero()))
        .ok_or(PeriodError::NoSolution { kernel: kernel.len(), multiples: multiples_dim })?;
    // normalize: leading coefficient of the theta_mu^2 slot (else first nonzero) is 1
    let slot = 5 * monos.len();
    let lead = (slot..slot + monos.len())
        .rev()
        .find(|&i| !rep[i].is_zero())
        .or_else(|| rep.iter().position(|x| !x.is_zero()))
        .expect("nonzero");
    let f = rep[lead].recip();
    for x in rep.iter_mut() {
        *x *= &f;
    }
    let operator = coordinates_to_operator(&rep, &monos);
    let (l3_scale, l1_multiplier) = match operator_coordinates(&l3(), &monos) {
        Some(l3v) => {
            let mut a: Vec<Vec<Rat>> = vec![Vec::new(); cols];
            for (i, row) in a.iter_mut().enumerate() {
                row.push(l3v[i].clone());
                for mv in &multiples {
                    row.push(mv[i].clone());
                }
            }
            match solve_particular(&a, &rep) {
                Some(x) => {
                    let mm = monomials_upto(degree as i64 - 1);
                    let p = MPoly::from_terms(
                        &SERIES_VARS,
                        mm.iter().zip(&x[1..]).map(|(&(a, b), c)| (vec![a, b], c.clone())),
                    );
                    (Some(x[0].clone()), Some(p))
                }
                None => (None, None),
            }
        }
        None => (None, None),
    };
    Ok(SecondOperator { operator, kernel_dim: kernel.len(), multiples_dim, l3_scale, l1_multiplier })
}

/// Sign of a coefficient, for reporting.
pub fn sign_pattern(s: &TruncatedSeries2) -> bool {
    s.iter().all(|(_, m, c)| if m % 2 == 0 { c.is_positive() } else { c.is_negative() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat_int;

    #[test]
    fn closed_form_values() {
        assert_eq!(period_coefficient(0, 0), rat_int(1));
        assert_eq!(period_coefficient(1, 0), rat_int(2));
        assert_eq!(period_coefficient(0, 1), rat_int(-60));
        assert_eq!(period_coefficient(1, 1), rat_int(-840));
        assert_eq!(period_coefficient(2, 0), rat_int(6));
    }

    #[test]
    fn table_agrees_with_pointwise() {
        let s = period_series(8);
        for (n, m, c) in s.iter() {
            assert_eq!(*c, period_coefficient(n, m));
        }
    }

    #[test]
    fn recurrences_reproduce_closed_form() {
        assert_eq!(series_from_recurrences(12), period_series(12));
    }

    #[test]
    fn box_operator_of_first_kernel_vector() {
        let b = box_operator(&[2, 0, 0, -1, -1, 0]).unwrap();
        // d4 d5 - d1^2 in Euler form
        let expected = &EulerOperator::term(&GKZ_VARS, &[0, 0, 0, -1, -1, 0], &[0, 0, 0, 1, 1, 0], Rat::one())
            - &(&EulerOperator::term(&GKZ_VARS, &[-2, 0, 0, 0, 0, 0], &[2, 0, 0, 0, 0, 0], Rat::one())
                - &EulerOperator::term(&GKZ_VARS, &[-2, 0, 0, 0, 0, 0], &[1, 0, 0, 0, 0, 0], Rat::one()));
        assert_eq!(b, expected);
        assert_eq!(box_operator(&[0; 6]).unwrap_err(), PeriodError::ZeroKernelVector);
    }

    #[test]
    fn non_kernel_vector_rejected() {
        let mut d = GkzData::default();
        d.kernel.push(vec![1, 0, 0, 0, 0, 0]);
        assert!(matches!(gkz_operators(&d), Err(PeriodError::NotInKernel(_))));
    }

    #[test]
    fn identity_change_of_variables_keeps_box() {
        let b = box_operator(&[1, -1, -1, 0, 2, -1]).unwrap();
        let thetas: Vec<EulerOperator> = GKZ_VARS.iter().map(|v| EulerOperator::theta(&GKZ_VARS, v)).collect();
        let same = b.change_variables(&GKZ_VARS, |a| Ok(a.to_vec()), &thetas).unwrap();
        assert_eq!(same, b);
    }
}
