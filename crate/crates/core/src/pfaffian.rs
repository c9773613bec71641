//! Pfaffian (connection) form of the rank-four system and its singular locus.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::euler::{LAMBDA, MU};
use crate::algebra::linalg::{mat_mul, solve, solve_polynomial};
use crate::algebra::parse::parse_poly_with_aliases;
use crate::algebra::{parse_ratfun_with_aliases, AlgebraError, EulerOperator, MPoly, RatFun, TruncatedSeries2};

pub type Matrix = Vec<Vec<RatFun>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PfaffianError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("relations are not solvable for the non-frame monomials in frame {0:?}")]
    Singular(Vec<(u32, u32)>),
    #[error("frame {0:?} is not closed under theta at the available order")]
    FrameNotClosed(Vec<(u32, u32)>),
}

/// `(1, theta_l, theta_m, theta_l^2)`.
pub const THETA_FRAME: [(u32, u32); 4] = [(0, 0), (1, 0), (0, 1), (2, 0)];

/// Operator `sum r_{k,l} theta_l^k theta_m^l` with rational-function
/// coefficients written on the left.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RfOperator {
    pub terms: BTreeMap<(u32, u32), RatFun>,
}

impl RfOperator {
    pub fn from_euler(op: &EulerOperator) -> Result<Self, AlgebraError> {
        let coeffs = op.theta_coefficients()?;
        Ok(RfOperator {
            terms: coeffs.into_iter().map(|(k, p)| ((k[0], k[1]), RatFun::from_poly(p))).collect(),
        })
    }

    /// `theta_var ∘ self`.
    pub fn theta_left(&self, var: &str) -> Self {
        let mut out: BTreeMap<(u32, u32), RatFun> = BTreeMap::new();
        let mut add = |k: (u32, u32), r: RatFun| {
            if r.is_zero() {
                return;
            }
            let e = out.entry(k).or_insert_with(RatFun::zero);
            *e = &*e + &r;
        };
        for (&(k, l), r) in &self.terms {
            add((k, l), r.theta(var));
            let next = if var == LAMBDA { (k + 1, l) } else { (k, l + 1) };
            add(next, r.clone());
        }
        out.retain(|_, r| !r.is_zero());
        RfOperator { terms: out }
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }
}

/// Connection in a frame of theta monomials: `theta_l phi = A phi`,
/// `theta_m phi = B phi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    pub frame: Vec<(u32, u32)>,
    pub a: Matrix,
    pub b: Matrix,
}

/// Derive the connection from two operators by eliminating every theta
/// monomial of order at most three outside the frame.
pub fn derive_connection(ops: &[EulerOperator], frame: &[(u32, u32)]) -> Result<Connection, PfaffianError> {
    let mut rels: Vec<RfOperator> = Vec::new();
    for op in ops {
        let r = RfOperator::from_euler(op)?;
        rels.push(r.theta_left(LAMBDA));
        rels.push(r.theta_left(MU));
        rels.push(r);
    }
    let max = rels.iter().map(RfOperator::order).max().unwrap_or(0);
    let monos: Vec<(u32, u32)> = (0..=max).flat_map(|d| (0..=d).map(move |l| (d - l, l))).collect();
    let outside: Vec<(u32, u32)> = monos.iter().copied().filter(|m| !frame.contains(m)).collect();
    if outside.len() != rels.len() {
        return Err(PfaffianError::Singular(frame.to_vec()));
    }
    let coef = |r: &RfOperator, m: &(u32, u32)| r.terms.get(m).cloned().unwrap_or_else(RatFun::zero);
    let n_mat: Matrix = rels.iter().map(|r| outside.iter().map(|m| coef(r, m)).collect()).collect();
    let f_mat: Matrix = rels.iter().map(|r| frame.iter().map(|m| -coef(r, m)).collect()).collect();
    let poly = |m: &Matrix| -> Option<Vec<Vec<MPoly>>> {
        m.iter().map(|r| r.iter().map(|x| x.as_polynomial().cloned()).collect()).collect()
    };
    let sol = match (poly(&n_mat), poly(&f_mat)) {
        (Some(n), Some(f)) => solve_polynomial(&n, &f),
        _ => solve(&n_mat, &f_mat),
    }
    .ok_or_else(|| PfaffianError::Singular(frame.to_vec()))?;
    let express = |m: (u32, u32)| -> Result<Vec<RatFun>, PfaffianError> {
        if let Some(j) = frame.iter().position(|&f| f == m) {
            let mut v = vec![RatFun::zero(); frame.len()];
            v[j] = RatFun::one();
            return Ok(v);
        }
        let i = outside.iter().position(|&o| o == m).ok_or_else(|| PfaffianError::FrameNotClosed(frame.to_vec()))?;
        Ok(sol[i].clone())
    };
    let a = frame.iter().map(|&(k, l)| express((k + 1, l))).collect::<Result<_, _>>()?;
    let b = frame.iter().map(|&(k, l)| express((k, l + 1))).collect::<Result<_, _>>()?;
    Ok(Connection { frame: frame.to_vec(), a, b })
}

fn theta_mat(m: &Matrix, var: &str) -> Matrix {
    m.iter().map(|r| r.iter().map(|x| x.theta(var)).collect()).collect()
}

fn mat_sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

/// `theta_m(A) - theta_l(B) + A B - B A`, zero for an integrable system.
pub fn integrability_residual(a: &Matrix, b: &Matrix) -> Matrix {
    let lhs = mat_sub(&theta_mat(a, MU), &theta_mat(b, LAMBDA));
    let comm = mat_sub(&mat_mul(a, b), &mat_mul(b, a));
    lhs.iter().zip(&comm).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn common_denominator(m: &Matrix) -> MPoly {
    let mut den = MPoly::one();
    for x in m.iter().flatten() {
        let g = den.gcd(x.den());
        den = (&den * x.den()).div_exact(&g).expect("lcm");
    }
    den
}

fn cleared(m: &Matrix, den: &MPoly) -> Vec<Vec<MPoly>> {
    let d = RatFun::from_poly(den.clone());
    m.iter()
        .map(|r| r.iter().map(|x| (&d * x).as_polynomial().cloned().expect("common denominator")).collect())
        .collect()
}

fn poly_theta(p: &MPoly, var: &str) -> MPoly {
    &p.diff(var) * &MPoly::var(var)
}

fn poly_mat_mul(a: &[Vec<MPoly>], b: &[Vec<MPoly>]) -> Vec<Vec<MPoly>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(MPoly::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

/// The integrability residual with all denominators cleared:
/// with `A = P/D`, `B = Q/E` this is `D^2 E^2` times the residual.
pub fn integrability_residual_cleared(a: &Matrix, b: &Matrix) -> Vec<Vec<MPoly>> {
    let (d, e) = (common_denominator(a), common_denominator(b));
    let (p, q) = (cleared(a, &d), cleared(b, &e));
    let (d_mu, e_l) = (poly_theta(&d, MU), poly_theta(&e, LAMBDA));
    let (e2, d2, de) = (&e * &e, &d * &d, &d * &e);
    let pq = poly_mat_mul(&p, &q);
    let qp = poly_mat_mul(&q, &p);
    let n = p.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let t1 = &(&poly_theta(&p[i][j], MU) * &d) - &(&p[i][j] * &d_mu);
                    let t2 = &(&poly_theta(&q[i][j], LAMBDA) * &e) - &(&q[i][j] * &e_l);
                    let t3 = &pq[i][j] - &qp[i][j];
                    &(&(&t1 * &e2) - &(&t2 * &d2)) + &(&t3 * &de)
                })
                .collect()
        })
        .collect()
}

pub fn is_integrable(a: &Matrix, b: &Matrix) -> bool {
    integrability_residual_cleared(a, b).iter().flatten().all(MPoly::is_zero)
}

pub fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().all(|r| r.iter().all(RatFun::is_zero))
}

/// Numerical residual at sample points, max absolute entry.
pub fn integrability_residual_numeric(a: &Matrix, b: &Matrix, points: &[[num_complex::Complex64; 2]]) -> f64 {
    let vars = [LAMBDA, MU];
    let comp = |m: &Matrix| -> Vec<Vec<crate::algebra::CompiledRatFun>> {
        m.iter().map(|r| r.iter().map(|x| x.compile(&vars)).collect()).collect()
    };
    let (ca, cb) = (comp(a), comp(b));
    let (cta, ctb) = (comp(&theta_mat(a, MU)), comp(&theta_mat(b, LAMBDA)));
    let mut worst: f64 = 0.0;
    for p in points {
        let ev = |m: &Vec<Vec<crate::algebra::CompiledRatFun>>| -> nalgebra::Matrix4<num_complex::Complex64> {
            nalgebra::Matrix4::from_fn(|i, j| m[i][j].eval(p))
        };
        let (am, bm) = (ev(&ca), ev(&cb));
        let r = ev(&cta) - ev(&ctb) + am * bm - bm * am;
        let scale = 1.0 + am.norm() * bm.norm();
        worst = worst.max(r.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale);
    }
    worst
}

fn aliases() -> [(&'static str, &'static str); 2] {
    [("l", LAMBDA), ("m", MU)]
}

pub fn s4() -> MPoly {
    parse_poly_with_aliases("1 - 15l - 100l^2", &aliases()).expect("valid")
}

pub fn t4() -> MPoly {
    parse_poly_with_aliases("l^2(4l - 1)^3 - 2(2 + 25l(20l - 1))m - 3125m^2", &aliases()).expect("valid")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EntryIssue {
    /// Parentheses did not balance; an unmatched trailing `)` was dropped.
    UnbalancedRepaired,
    /// Symbols other than the two coordinates occur.
    UndefinedSymbols(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct TranscribedEntry {
    pub name: String,
    pub row: usize,
    pub col: usize,
    pub text: &'static str,
    /// Denominator written below the numerator.
    pub den: &'static str,
    pub value: Option<RatFun>,
    pub issues: Vec<EntryIssue>,
}

const A_ENTRIES: [(&str, usize, usize, &str, &str); 8] = [
    ("a11", 2, 0, "l(1+20l)", "s4"),
    ("a12", 2, 1, "6l^2+120l^3+125m", "2 l s4"),
    ("a13", 2, 2, "5l(3+40l)", "2 s4"),
    ("a14", 2, 3, "-(l+16l^2-80l^3+125m)", "2 l s4"),
    ("a21", 3, 0, "-l^3(2+2125m+l(-17+616l-2320l^2+2500(9+80l)m))", "s4 t4"),
    (
        "a22",
        3,
        1,
        "-(-2l^3(-1+4l)(8+5l(-13+4l(83+40l))) + (-16+5l(94+5l(59+10l(-73+20l(37+160l)))))m +3125(-4+5l(21+200l))m^2)",
        "2 s4 t4",
    ),
    ("a23", 3, 2, "-l^3(22+26875m+l(-47+300000m+100l(51+4l(-49+20l)+20000m)))", "2 s4 t4"),
    ("a24", 3, 3, "12r4 s4+3r4(15l-2)+2s4(-3(1-4l)^2 l^2(-1+10l)+75l(-1+40l)m)", "2 s4 t4"),
];

const B_ENTRIES: [(&str, usize, usize, &str, &str); 12] = [
    ("b11", 1, 0, "l(1+20l)", "s4"),
    ("b12", 1, 1, "6l^2+120l^3+125m", "2 l s4"),
    ("b13", 1, 2, "5l(3+40l)", "2 s4"),
    ("b14", 1, 3, "-(l+16l^2-80l^3+125m)", "2 l s4"),
    ("b21", 2, 0, "-2l(-1+4l)", "s4"),
    ("b22", 2, 1, "-(6l^3(-1+4l)-5m+50l m)", "l^2 s4"),
    ("b23", 2, 2, "-l(-11+20l)", "s4"),
    ("b24", 2, 3, "-((1-4l)^2 l^2-(5-50l)m)", "l^2 s4"),
    (
        "b31",
        3,
        0,
        "-(4(1-4l)^2 l^4(7+20l) -l(-4+25l(-3+2l(-7+20l(1+80l))))m +3125l(1+20l)m^2)",
        "t4 s4",
    ),
    (
        "b32",
        3,
        1,
        "-(24(1-4l)^2 l^5(7+20l)-2l(-4+5l(8+l(-43+10l(-57+20l(7+160l)))))m -125(-4+25l(-3+32l(1+10l)))m^2+390625m^3))",
        "2 l t4 s4",
    ),
    (
        "b33",
        3,
        2,
        "-(4l^3(-1+4l)(-1+2l(-32+25l(1+12l)))+15625l(3+40l)m^2 -5l(-12+5l(-1+10l)(33+20l(23+160l)))m)",
        "2 t4 s4",
    ),
    (
        "b34",
        3,
        3,
        "-(4l^4(-1+4l)^3(7+20l)+3l(-4+l(31-490l+76000l^3))m +250(-2+25l(-2+l(11+260l)))m^2-390625m^3)",
        "2 l t4 s4",
    ),
];

fn denominator(text: &str) -> RatFun {
    let s = text.replace("s4", &format!("({})", s4())).replace("t4", &format!("({})", t4()));
    parse_ratfun_with_aliases(&s, &[("lambda", LAMBDA), ("mu", MU), ("l", LAMBDA)]).expect("valid denominator")
}

/// Drop unmatched closing parentheses.
fn balance(text: &str) -> (String, bool) {
    let mut depth = 0i32;
    let mut out = String::with_capacity(text.len());
    let mut repaired = false;
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' if depth == 0 => {
                repaired = true;
                continue;
            }
            ')' => depth -= 1,
            _ => {}
        }
        out.push(ch);
    }
    (out, repaired)
}

fn parse_entry(name: &str, row: usize, col: usize, text: &'static str, den: &'static str) -> TranscribedEntry {
    let mut issues = Vec::new();
    let (fixed, repaired) = balance(text);
    if repaired {
        issues.push(EntryIssue::UnbalancedRepaired);
    }
    // s4 inside numerators is the polynomial s4
    let expanded = fixed.replace("s4", &format!("({})", s4()));
    let value = parse_ratfun_with_aliases(&expanded, &aliases()).ok().and_then(|num| {
        let extra: Vec<String> = num.vars().into_iter().filter(|v| v != LAMBDA && v != MU).collect();
        if !extra.is_empty() {
            issues.push(EntryIssue::UndefinedSymbols(extra));
            return None;
        }
        Some(&num / &denominator(den))
    });
    TranscribedEntry { name: name.to_string(), row, col, text, den, value, issues }
}

/// The printed connection; entries that cannot be read are `None`.
#[derive(Debug, Clone)]
pub struct TranscribedConnection {
    pub a: Vec<Vec<Option<RatFun>>>,
    pub b: Vec<Vec<Option<RatFun>>>,
    pub entries: Vec<TranscribedEntry>,
}

pub fn transcribed_connection() -> TranscribedConnection {
    let unit = |i: usize| -> Vec<Option<RatFun>> {
        (0..4).map(|j| Some(if i == j { RatFun::one() } else { RatFun::zero() })).collect()
    };
    let mut a = vec![unit(1), unit(3), vec![None; 4], vec![None; 4]];
    let mut b = vec![unit(2), vec![None; 4], vec![None; 4], vec![None; 4]];
    let mut entries = Vec::new();
    for (name, r, c, t, d) in A_ENTRIES {
        let e = parse_entry(name, r, c, t, d);
        a[r][c] = e.value.clone();
        entries.push(e);
    }
    for (name, r, c, t, d) in B_ENTRIES {
        let e = parse_entry(name, r, c, t, d);
        b[r][c] = e.value.clone();
        entries.push(e);
    }
    TranscribedConnection { a, b, entries }
}

/// The printed numerator expression for `a24`, solved for `r4`:
/// `r4 = (N - 2 s4 q) / (12 s4 + 3(15l - 2))`, `N` the derived numerator.
pub fn solve_r4(derived_a24: &RatFun) -> RatFun {
    let num = derived_a24 * &denominator("2 s4 t4");
    let q = parse_ratfun_with_aliases("-3(1-4l)^2 l^2(-1+10l)+75l(-1+40l)m", &aliases()).expect("valid");
    let s = RatFun::from_poly(s4());
    let coeff = &(&s * &RatFun::from_int(12)) + &parse_ratfun_with_aliases("3(15l-2)", &aliases()).expect("valid");
    &(&num - &(&(&s * &RatFun::from_int(2)) * &q)) / &coeff
}

/// Theta-frame connection checked against a series solution: for each row
/// `i`, `D_i theta phi_i - sum_j (D_i M_ij) phi_j` must vanish, with `D_i` the
/// common denominator of the row. Returns the order reached for every row.
pub fn series_check(m: &Matrix, frame: &[(u32, u32)], var: usize, eta: &TruncatedSeries2) -> Result<Vec<Option<u32>>, AlgebraError> {
    let phis: Vec<TruncatedSeries2> = frame
        .iter()
        .map(|&(k, l)| (0..k).fold((0..l).fold(eta.clone(), |s, _| s.theta(1)), |s, _| s.theta(0)))
        .collect();
    let mut out = Vec::new();
    for (i, row) in m.iter().enumerate() {
        let mut den = MPoly::one();
        for x in row {
            let g = den.gcd(x.den());
            den = (&den * x.den()).div_exact(&g).expect("lcm");
        }
        let dr = RatFun::from_poly(den.clone());
        let lhs = phis[i].theta(var).mul_poly(&den)?;
        let mut acc = lhs;
        for (j, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let p = (&dr * x).as_polynomial().cloned().expect("cleared");
            acc = acc.sub(&phis[j].mul_poly(&p)?)?;
        }
        out.push(if acc.is_zero() { Some(acc.order()) } else { None });
    }
    Ok(out)
}

/// Reconstruct the last diagonal entry of the lambda-matrix from the series:
/// `A[4][4] = (theta_l phi_4 - sum_{j<4} A_4j phi_j) / phi_4`, multiplied by
/// `2 s4 t4` and truncated to a polynomial of total degree `max_deg`.
pub fn reconstruct_corner_numerator(a: &Matrix, eta: &TruncatedSeries2, max_deg: u32) -> Result<(MPoly, bool), AlgebraError> {
    let frame = THETA_FRAME;
    let phis: Vec<TruncatedSeries2> = frame
        .iter()
        .map(|&(k, l)| (0..k).fold((0..l).fold(eta.clone(), |s, _| s.theta(1)), |s, _| s.theta(0)))
        .collect();
    let den = &MPoly::from_int(2) * &(&s4() * &t4());
    // row denominator for the known entries
    let mut rden = den.clone();
    for x in &a[3][..3] {
        let g = rden.gcd(x.den());
        rden = (&rden * x.den()).div_exact(&g).expect("lcm");
    }
    let rr = RatFun::from_poly(rden.clone());
    let mut rhs = phis[3].theta(0).mul_poly(&rden)?;
    for j in 0..3 {
        let p = (&rr * &a[3][j]).as_polynomial().cloned().expect("cleared");
        rhs = rhs.sub(&phis[j].mul_poly(&p)?)?;
    }
    // rhs = rden * A44 * phi4; phi4 and rhs both vanish on the lambda = 0 column
    let quotient = rhs.div_first_var()?.mul(&phis[3].div_first_var()?.inverse()?)?;
    let extra = RatFun::from_poly(den.clone()) / RatFun::from_poly(rden.clone());
    let extra = extra.as_polynomial().cloned().ok_or(AlgebraError::NotPolynomial)?;
    let scaled = quotient.mul_poly(&extra)?;
    let poly = MPoly::from_terms(
        &[LAMBDA, MU],
        scaled.iter().filter(|(n, m, _)| n + m <= max_deg).map(|(n, m, c)| (vec![n, m], c.clone())),
    );
    let tail_zero = scaled.iter().all(|(n, m, c)| n + m <= max_deg || c.is_zero());
    Ok((poly, tail_zero))
}

/// Pairwise coprime factors that generate the same multiplicative
/// structure as the inputs (a gcd-free basis).
pub fn coprime_basis(polys: &[MPoly]) -> Vec<MPoly> {
    let mut basis: Vec<MPoly> = Vec::new();
    let mut inputs: Vec<MPoly> = Vec::new();
    for p in polys {
        let p = p.normalized();
        if !inputs.contains(&p) {
            inputs.push(p);
        }
    }
    for p in &inputs {
        let mut pending = vec![p.normalized()];
        while let Some(q) = pending.pop() {
            if q.is_constant() {
                continue;
            }
            let mut split = None;
            for (i, b) in basis.iter().enumerate() {
                let g = q.gcd(b);
                if !g.is_constant() {
                    split = Some((i, g));
                    break;
                }
            }
            match split {
                None => basis.push(q),
                Some((i, g)) => {
                    let b = basis.remove(i);
                    let bq = b.div_exact(&g).expect("gcd divides");
                    let qq = q.div_exact(&g).expect("gcd divides");
                    pending.push(g.clone());
                    pending.push(bq);
                    pending.push(qq);
                }
            }
        }
        // merge duplicates
        let mut seen: Vec<MPoly> = Vec::new();
        for b in basis.drain(..) {
            if !seen.contains(&b) {
                seen.push(b);
            }
        }
        basis = seen;
    }
    basis.sort_by_key(|p| (p.total_degree(), p.to_string()));
    basis
}

/// Denominator factors of a connection.
pub fn denominator_factors(c: &Connection) -> Vec<MPoly> {
    let dens: Vec<MPoly> = c.a.iter().chain(&c.b).flatten().map(|x| x.den().clone()).collect();
    coprime_basis(&dens)
}

#[derive(Debug, Clone)]
pub struct GaugeAttempt {
    pub exponents: Vec<i32>,
    pub removes: bool,
}

/// Conjugate by `diag(s^e_i)`: `A' = G A G^-1 + theta_l(G) G^-1`.
pub fn diagonal_gauge(c: &Connection, s: &MPoly, e: &[i32]) -> Result<Connection, AlgebraError> {
    let sr = RatFun::from_poly(s.clone());
    let g: Vec<RatFun> = e.iter().map(|&k| sr.pow(k)).collect::<Result<_, _>>()?;
    let tr = |m: &Matrix, var: &str| -> Result<Matrix, AlgebraError> {
        let mut out = vec![vec![RatFun::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = &(&g[i] * &m[i][j]) / &g[j];
            }
            out[i][i] = &out[i][i] + &(&g[i].theta(var) / &g[i]);
        }
        Ok(out)
    };
    Ok(Connection { frame: c.frame.clone(), a: tr(&c.a, LAMBDA)?, b: tr(&c.b, MU)? })
}

/// Try all diagonal gauges `s^e` with `e_i` in `{-1, 0, 1}` (first fixed to 0).
pub fn search_diagonal_gauge(c: &Connection, s: &MPoly) -> Result<Vec<GaugeAttempt>, AlgebraError> {
    let mut out = Vec::new();
    for code in 0..27 {
        let e = vec![0, code % 3 - 1, (code / 3) % 3 - 1, (code / 9) % 3 - 1];
        let g = diagonal_gauge(c, s, &e)?;
        let removes = g.a.iter().chain(&g.b).flatten().all(|x| x.den().gcd(s).is_constant());
        out.push(GaugeAttempt { exponents: e, removes });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SingularLocus {
    /// Factors appearing in every frame's connection, plus the coordinate
    /// axes coming from `theta = x d/dx`.
    pub components: Vec<MPoly>,
    /// Factors that disappear in some frame, with that frame.
    pub apparent: Vec<(MPoly, Vec<(u32, u32)>)>,
}

pub const ALTERNATIVE_FRAMES: [[(u32, u32); 4]; 3] = [
    [(0, 0), (1, 0), (0, 1), (2, 0)],
    [(0, 0), (1, 0), (0, 1), (1, 1)],
    [(0, 0), (1, 0), (0, 1), (0, 2)],
];

type Frame = Vec<(u32, u32)>;

pub fn singular_locus(ops: &[EulerOperator]) -> Result<SingularLocus, PfaffianError> {
    let mut per_frame: Vec<(Frame, Vec<MPoly>)> = Vec::new();
    for f in ALTERNATIVE_FRAMES {
        match derive_connection(ops, &f) {
            Ok(c) => per_frame.push((f.to_vec(), denominator_factors(&c))),
            Err(PfaffianError::Singular(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let all: BTreeSet<String> = per_frame.iter().flat_map(|(_, fs)| fs.iter().map(|p| p.to_string())).collect();
    let mut components: Vec<MPoly> = Vec::new();
    let mut apparent = Vec::new();
    for key in all {
        let poly = per_frame
            .iter()
            .flat_map(|(_, fs)| fs.iter())
            .find(|p| p.to_string() == key)
            .expect("present")
            .clone();
        match per_frame.iter().find(|(_, fs)| !fs.contains(&poly)) {
            None => components.push(poly),
            Some((f, _)) => apparent.push((poly, f.clone())),
        }
    }
    for axis in [MPoly::var(LAMBDA), MPoly::var(MU)] {
        if !components.contains(&axis) {
            components.push(axis);
        }
    }
    components.sort_by_key(|p| (p.total_degree(), p.to_string()));
    Ok(SingularLocus { components, apparent })
}

/// `t4` vanishes on `lambda = (a-1)(a+1)/5`, `mu = (2a-3)^3 (a+1)^2 / 3125`.
pub fn t4_parametrization_residual() -> RatFun {
    let lam = parse_ratfun_with_aliases("(a-1)(a+1)/5", &[]).expect("valid");
    let mu = parse_ratfun_with_aliases("(2a-3)^3(a+1)^2/3125", &[]).expect("valid");
    crate::algebra::ratfun::substitute_poly(&t4(), &[(LAMBDA, lam), (MU, mu)])
}

pub fn is_zero_ratfun(x: &RatFun) -> bool {
    x.num().is_zero() || x.num().terms().all(|(_, c)| c.is_zero())
}
