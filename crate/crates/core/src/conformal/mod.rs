//! Rank-4 second-order systems `Z_XX = L Z_XY + A Z_X + B Z_Y + P Z`,
//! `Z_YY = M Z_XY + C Z_X + D Z_Y + Q Z`: coordinate transport, the
//! coefficients fixed by a normalization factor, and the comparison of the
//! period system with the uniformizing equation of the Hilbert modular
//! orbifold for `Q(sqrt 5)`.

pub mod birational;
pub mod integrability;
pub mod klein;
pub mod logexpr;
pub mod transcribed;

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::Serialize;

use crate::algebra::{AlgebraError, EulerOperator, MPoly, RatFun};

pub use birational::BirationalMap2;
pub use integrability::{integrability_numerators, is_integrable};
pub use logexpr::LogDerivativeExpr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConformalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("degenerate conformal structure: 1 - LM vanishes identically")]
    DegenerateStructure,
    #[error("degenerate Jacobian")]
    DegenerateJacobian,
    #[error("log of zero")]
    ZeroLog,
    #[error("operator does not have order 2")]
    Order,
    #[error("map does not act on the variables {0:?}")]
    Variables(Vec<String>),
}

pub const COEFFICIENT_NAMES: [&str; 8] = ["L", "M", "A", "B", "C", "D", "P", "Q"];

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderSystem {
    pub vars: [String; 2],
    pub l: RatFun,
    pub m: RatFun,
    pub a: RatFun,
    pub b: RatFun,
    pub c: RatFun,
    pub d: RatFun,
    pub p: RatFun,
    pub q: RatFun,
}

impl SecondOrderSystem {
    /// Coefficients in the order `L, M, A, B, C, D, P, Q`.
    pub fn new(vars: [&str; 2], coeffs: [RatFun; 8]) -> Result<Self, ConformalError> {
        let [l, m, a, b, c, d, p, q] = coeffs;
        if (&RatFun::one() - &(&l * &m)).is_zero() {
            return Err(ConformalError::DegenerateStructure);
        }
        Ok(SecondOrderSystem { vars: [vars[0].into(), vars[1].into()], l, m, a, b, c, d, p, q })
    }

    pub fn coefficients(&self) -> [&RatFun; 8] {
        [&self.l, &self.m, &self.a, &self.b, &self.c, &self.d, &self.p, &self.q]
    }

    pub fn named(&self) -> impl Iterator<Item = (&'static str, &RatFun)> {
        COEFFICIENT_NAMES.into_iter().zip(self.coefficients())
    }

    fn x(&self) -> &str {
        &self.vars[0]
    }

    fn y(&self) -> &str {
        &self.vars[1]
    }
}

impl Serialize for SecondOrderSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(9))?;
        map.serialize_entry("vars", &self.vars)?;
        for (name, f) in self.named() {
            map.serialize_entry(name, &f.to_canonical_string())?;
        }
        map.end()
    }
}

/// `sum_k S(n,k) x^k d^k`, the expansion of `theta^n` (Stirling numbers of
/// the second kind).
fn stirling2(n: u32, k: u32) -> i64 {
    match (n, k) {
        (0, 0) => 1,
        (0, _) | (_, 0) => 0,
        _ => k as i64 * stirling2(n - 1, k) + stirling2(n - 1, k - 1),
    }
}

/// Coefficients of `d^(i,j)` for an operator of order at most 2.
fn partial_coefficients(op: &EulerOperator) -> Result<BTreeMap<(u32, u32), MPoly>, ConformalError> {
    let vars = op.vars();
    let (x, y) = (vars[0], vars[1]);
    let mut out: BTreeMap<(u32, u32), MPoly> = BTreeMap::new();
    for (theta, c) in op.theta_coefficients()? {
        if theta[0] + theta[1] > 2 {
            return Err(ConformalError::Order);
        }
        for k in 0..=theta[0] {
            for l in 0..=theta[1] {
                let s = stirling2(theta[0], k) * stirling2(theta[1], l);
                if s == 0 {
                    continue;
                }
                let mono = MPoly::monomial(&[x, y], &[k, l], crate::algebra::rat_int(s));
                let slot = out.entry((k, l)).or_insert_with(MPoly::zero);
                *slot = &*slot + &(&mono * &c);
            }
        }
    }
    Ok(out)
}

/// Solve two second-order equations `sum c_ij d^(i,j) z = 0` for `z_XX`
/// and `z_YY`. Each equation is given by its coefficients on
/// `[z_XX, z_XY, z_YY, z_X, z_Y, z]`.
pub fn solve_for_pure_seconds(vars: [&str; 2], e1: &[RatFun; 6], e2: &[RatFun; 6]) -> Result<SecondOrderSystem, ConformalError> {
    let det = &(&e1[0] * &e2[2]) - &(&e1[2] * &e2[0]);
    if det.is_zero() {
        return Err(ConformalError::Order);
    }
    // index in the solved rows: z_XY, z_X, z_Y, z
    let rest = [1, 3, 4, 5];
    let xx: Vec<RatFun> = rest
        .iter()
        .map(|&k| (&(&(-&e1[k]) * &e2[2]) + &(&e2[k] * &e1[2])).checked_div(&det))
        .collect::<Result<_, _>>()?;
    let yy: Vec<RatFun> = rest
        .iter()
        .map(|&k| (&(&(-&e2[k]) * &e1[0]) + &(&e1[k] * &e2[0])).checked_div(&det))
        .collect::<Result<_, _>>()?;
    let [l, a, b, p]: [RatFun; 4] = xx.try_into().expect("four entries");
    let [m, c, d, q]: [RatFun; 4] = yy.try_into().expect("four entries");
    SecondOrderSystem::new(vars, [l, m, a, b, c, d, p, q])
}

/// The second-order system equivalent to two Euler operators of order 2.
pub fn system_from_operators(ops: [&EulerOperator; 2]) -> Result<SecondOrderSystem, ConformalError> {
    let vars = ops[0].vars();
    let rows = ops
        .iter()
        .map(|op| {
            let t = partial_coefficients(op)?;
            let get = |i, j| t.get(&(i, j)).cloned().map(RatFun::from_poly).unwrap_or_else(RatFun::zero);
            Ok([get(2, 0), get(1, 1), get(0, 2), get(1, 0), get(0, 1), get(0, 0)])
        })
        .collect::<Result<Vec<_>, ConformalError>>()?;
    solve_for_pure_seconds([vars[0], vars[1]], &rows[0], &rows[1])
}

/// The period system in `(lambda, mu)`, derived from the two operators.
pub fn derived_our_system() -> Result<SecondOrderSystem, ConformalError> {
    system_from_operators([&crate::periods::l1(), &crate::periods::l3()])
}

/// Change of coordinates `(X, Y) -> (U, V)` by the transformation formulas
/// of Sasaki and Yoshida. The result is in the target variables of `map`.
pub fn sy_transport(sys: &SecondOrderSystem, map: &BirationalMap2) -> Result<SecondOrderSystem, ConformalError> {
    if map.source != sys.vars {
        return Err(ConformalError::Variables(map.source.to_vec()));
    }
    let (x, y) = (sys.x(), sys.y());
    let (u, v) = (&map.forward[0], &map.forward[1]);
    // Every quantity below is a pointwise expression in the derivatives of
    // the map and the coefficients, so each is moved to the target
    // variables first; the arithmetic then stays small.
    let push = |f: &RatFun| map.push(f);
    let (ux, uy, vx, vy) = (u.diff(x), u.diff(y), v.diff(x), v.diff(y));
    let (uxx, uxy, uyy) = (push(&ux.diff(x))?, push(&ux.diff(y))?, push(&uy.diff(y))?);
    let (vxx, vxy, vyy) = (push(&vx.diff(x))?, push(&vx.diff(y))?, push(&vy.diff(y))?);
    let (ux, uy, vx, vy) = (push(&ux)?, push(&uy)?, push(&vx)?, push(&vy)?);
    let [l, m, ca, cb, cc, cd, cp, cq] = sys.coefficients().map(push);
    let (l, m, ca, cb, cc, cd, cp, cq) = (&l?, &m?, &ca?, &cb?, &cc?, &cd?, &cp?, &cq?);

    let delta = &(&ux * &vy) - &(&uy * &vx);
    if delta.is_zero() {
        return Err(ConformalError::DegenerateJacobian);
    }
    let two = RatFun::from_int(2);
    let lam = &(&(l * &(&vy * &vy)) - &(&two * &(&vx * &vy))) + &(m * &(&vx * &vx));
    let mu = &(&(l * &(&uy * &uy)) - &(&two * &(&ux * &uy))) + &(m * &(&ux * &ux));
    let nu = &(&(&(l * &(&uy * &vy)) - &(&ux * &vy)) - &(&uy * &vx)) + &(m * &(&ux * &vx));
    if nu.is_zero() {
        return Err(ConformalError::DegenerateStructure);
    }
    let alpha = (&(&vx * &vx) - &(l * &(&vx * &vy))).checked_div(&delta)?;
    let beta = (&(&vy * &vy) - &(m * &(&vx * &vy))).checked_div(&delta)?;
    let gamma = (&(&ux * &ux) - &(l * &(&ux * &uy))).checked_div(&delta)?;
    let dlt = (&(&uy * &uy) - &(m * &(&ux * &uy))).checked_div(&delta)?;

    let r = |fxx: &RatFun, fxy: &RatFun, fx: &RatFun, fy: &RatFun| -> RatFun {
        fxx - &(&(&(l * fxy) + &(ca * fx)) + &(cb * fy))
    };
    let s = |fyy: &RatFun, fxy: &RatFun, fx: &RatFun, fy: &RatFun| -> RatFun {
        fyy - &(&(&(m * fxy) + &(cc * fx)) + &(cd * fy))
    };
    let (ru, su) = (r(&uxx, &uxy, &ux, &uy), s(&uyy, &uxy, &ux, &uy));
    let (rv, sv) = (r(&vxx, &vxy, &vx, &vy), s(&vyy, &vxy, &vx, &vy));

    let over_nu = |f: RatFun| f.checked_div(&nu);
    let bar = [
        over_nu(-lam)?,
        over_nu(-mu)?,
        over_nu(&(&ru * &beta) - &(&su * &alpha))?,
        over_nu(&(&rv * &beta) - &(&sv * &alpha))?,
        over_nu(&(&su * &gamma) - &(&ru * &dlt))?,
        over_nu(&(&sv * &gamma) - &(&rv * &dlt))?,
        over_nu(&(&alpha * cq) - &(&beta * cp))?,
        over_nu(&(&dlt * cp) - &(&gamma * cq))?,
    ];
    SecondOrderSystem::new([&map.target[0], &map.target[1]], bar)
}

/// `A, B, C, D` determined by the conformal structure `(L, M)` and the
/// normalization factor `e^(2 theta)`, given as `theta`.
pub fn abcd_from_normalization(
    vars: [&str; 2],
    l: &RatFun,
    m: &RatFun,
    theta: &LogDerivativeExpr,
) -> Result<[RatFun; 4], ConformalError> {
    let (x, y) = (vars[0], vars[1]);
    let one_minus = &RatFun::one() - &(l * m);
    let xi = LogDerivativeExpr::log(&one_minus)?;
    let log_l = LogDerivativeExpr::log(l)?;
    let log_m = LogDerivativeExpr::log(m)?;
    let q = |n: i64, d: i64| crate::algebra::rat(n, d);
    let half = RatFun::constant(q(1, 2));

    // xi/4 + theta
    let e1 = xi.scale(&q(1, 4)).plus(theta);
    // log L - xi/4 + theta
    let e2 = log_l.plus(&xi.scale(&q(-1, 4))).plus(theta);
    // log L - 3 xi/4 - theta
    let e3 = log_l.plus(&xi.scale(&q(-3, 4))).plus(&theta.scale(&q(-1, 1)));
    let e4 = log_m.plus(&xi.scale(&q(-3, 4))).plus(&theta.scale(&q(-1, 1)));
    let e5 = log_m.plus(&xi.scale(&q(-1, 4))).plus(theta);

    let a = &e1.derivative(x) - &(&(&half * l) * &e2.derivative(y));
    let b = &(&half * l) * &e3.derivative(x);
    let c = &(&half * m) * &e4.derivative(y);
    let d = &e1.derivative(y) - &(&(&half * m) * &e5.derivative(x));
    Ok([a, b, c, d])
}

/// In the frame `(z, z_X, z_Y, z_XY)` the system reads `d phi = (Ox dX +
/// Oy dY) phi`. Returns the 16 entries of `d_Y Ox - d_X Oy + Ox Oy - Oy Ox`,
/// all zero iff the solution space is 4-dimensional.
pub fn integrability_residual(sys: &SecondOrderSystem) -> Result<Vec<RatFun>, ConformalError> {
    let (x, y) = (sys.x(), sys.y());
    let z = RatFun::zero;
    let one = RatFun::one;
    let xx = [sys.p.clone(), sys.a.clone(), sys.b.clone(), sys.l.clone()];
    let yy = [sys.q.clone(), sys.c.clone(), sys.d.clone(), sys.m.clone()];
    let add = |a: &[RatFun; 4], b: &[RatFun; 4]| -> [RatFun; 4] { std::array::from_fn(|i| &a[i] + &b[i]) };
    let scale = |k: &RatFun, a: &[RatFun; 4]| -> [RatFun; 4] { std::array::from_fn(|i| k * &a[i]) };
    // basis vectors of z, z_X, z_Y, z_XY
    let e = |i: usize| -> [RatFun; 4] { std::array::from_fn(|j| if i == j { one() } else { z() }) };

    // z_XXY = L w + a, with w = z_XYY
    let a_vec = add(
        &add(&scale(&sys.l.diff(y), &e(3)), &scale(&sys.a.diff(y), &e(1))),
        &add(
            &add(&scale(&sys.a, &e(3)), &scale(&sys.b.diff(y), &e(2))),
            &add(&scale(&sys.b, &yy), &add(&scale(&sys.p.diff(y), &e(0)), &scale(&sys.p, &e(2)))),
        ),
    );
    // z_XYY = M u + b, with u = z_XXY
    let b_vec = add(
        &add(&scale(&sys.m.diff(x), &e(3)), &scale(&sys.c.diff(x), &e(1))),
        &add(
            &add(&scale(&sys.c, &xx), &scale(&sys.d.diff(x), &e(2))),
            &add(&scale(&sys.d, &e(3)), &add(&scale(&sys.q.diff(x), &e(0)), &scale(&sys.q, &e(1)))),
        ),
    );
    let det = &one() - &(&sys.l * &sys.m);
    let u: Vec<RatFun> =
        add(&a_vec, &scale(&sys.l, &b_vec)).iter().map(|f| f.checked_div(&det)).collect::<Result<_, _>>()?;
    let u: [RatFun; 4] = u.try_into().expect("four");
    let w = add(&scale(&sys.m, &u), &b_vec);

    let ox = [e(1), xx.clone(), e(3), u];
    let oy = [e(2), e(3), yy.clone(), w];
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let mut r = &ox[i][j].diff(y) - &oy[i][j].diff(x);
            for k in 0..4 {
                r = &r + &(&(&ox[i][k] * &oy[k][j]) - &(&oy[i][k] * &ox[k][j]));
            }
            out.push(r);
        }
    }
    Ok(out)
}


#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub name: String,
    pub ok: bool,
    /// `computed - printed` when they differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<String>,
}

impl Comparison {
    pub fn new(name: impl Into<String>, computed: &RatFun, printed: &RatFun) -> Self {
        let ok = computed == printed;
        Comparison { name: name.into(), ok, difference: (!ok).then(|| (computed - printed).to_canonical_string()) }
    }
}

fn compare_systems(prefix: &str, computed: &SecondOrderSystem, printed: &SecondOrderSystem) -> Vec<Comparison> {
    computed.named().zip(printed.coefficients()).map(|((n, c), p)| Comparison::new(format!("{prefix}{n}"), c, p)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    /// Printed system against the one derived from the two operators.
    pub derivation: Vec<Comparison>,
    pub f_birational: bool,
    pub f_factorization: bool,
    /// The period coefficients rewritten in `(x, y)`.
    pub pulled_back: Vec<Comparison>,
    pub first_derivatives: Vec<Comparison>,
    pub second_derivatives: Vec<Comparison>,
    /// Transported coefficients against the uniformizing equation.
    pub transported: Vec<Comparison>,
    /// Transported `(L, M)` against Sato's conformal structure.
    pub conformal: Vec<Comparison>,
    /// One entry per transported coefficient that differs from print.
    pub errata: Vec<Erratum>,
}

/// A printed coefficient that disagrees with the transport, judged by
/// integrability of the printed system with and without the replacement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Erratum {
    pub coefficient: String,
    pub printed: String,
    pub transported: String,
    pub printed_integrable: bool,
    pub transported_integrable: bool,
}

impl TransportReport {
    pub fn all_ok(&self) -> bool {
        self.f_birational
            && self.f_factorization
            && [&self.derivation, &self.pulled_back, &self.first_derivatives, &self.second_derivatives, &self.transported, &self.conformal]
                .iter()
                .all(|v| v.iter().all(|c| c.ok))
    }
}

pub fn full_transport_check() -> Result<TransportReport, ConformalError> {
    let ours = transcribed::our_system();
    let f = birational::f_map();
    let (lam, mu) = (crate::algebra::euler::LAMBDA, crate::algebra::euler::MU);

    let derivation = compare_systems("", &derived_our_system()?, &ours);
    let f_birational = f.is_birational()?;
    let f_factorization = birational::f_factored()? == f;

    let pulled_back = ours
        .coefficients()
        .iter()
        .zip(transcribed::our_coefficients_in_xy())
        .map(|(c, (name, printed))| Ok(Comparison::new(name, &f.push(c)?, &printed)))
        .collect::<Result<Vec<_>, ConformalError>>()?;

    let [fx, fy] = &f.forward;
    let firsts = [fx.diff(lam), fy.diff(lam), fx.diff(mu), fy.diff(mu)];
    let first_derivatives = firsts
        .iter()
        .zip(transcribed::first_derivatives())
        .map(|(c, (name, printed))| Ok(Comparison::new(name, &f.push(c)?, &printed)))
        .collect::<Result<Vec<_>, ConformalError>>()?;
    let seconds = [
        fx.diff(lam).diff(lam),
        fy.diff(lam).diff(lam),
        fx.diff(mu).diff(mu),
        fy.diff(mu).diff(mu),
        fx.diff(lam).diff(mu),
        fy.diff(lam).diff(mu),
    ];
    let second_derivatives = seconds
        .iter()
        .zip(transcribed::second_derivatives())
        .map(|(c, (name, printed))| Ok(Comparison::new(name, &f.push(c)?, &printed)))
        .collect::<Result<Vec<_>, ConformalError>>()?;

    let moved = sy_transport(&ours, &f)?;
    let uni = transcribed::uniformizing_system();
    let transported = compare_systems("bar ", &moved, &uni);
    let mut errata = Vec::new();
    if transported.iter().any(|c| !c.ok) {
        let printed_integrable = is_integrable(&uni)?;
        for (i, (name, got)) in moved.named().enumerate() {
            let printed = uni.coefficients()[i];
            if got == printed {
                continue;
            }
            let mut coeffs = uni.coefficients().map(RatFun::clone);
            coeffs[i] = got.clone();
            let fixed = SecondOrderSystem::new([&uni.vars[0], &uni.vars[1]], coeffs)?;
            errata.push(Erratum {
                coefficient: name.to_string(),
                printed: printed.to_canonical_string(),
                transported: got.to_canonical_string(),
                printed_integrable,
                transported_integrable: is_integrable(&fixed)?,
            });
        }
    }
    let [sl, sm] = transcribed::sato_conformal();
    let conformal = vec![Comparison::new("bar L vs Sato", &moved.l, &sl), Comparison::new("bar M vs Sato", &moved.m, &sm)];
    Ok(TransportReport {
        derivation,
        f_birational,
        f_factorization,
        pulled_back,
        first_derivatives,
        second_derivatives,
        transported,
        conformal,
        errata,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizationReport {
    /// `A, B, C, D` from our normalization factor against the printed `A1..D1`.
    pub ours: Vec<Comparison>,
    /// The same from Sato's factor against the printed `As..Ds`.
    pub sato: Vec<Comparison>,
    /// Each printed system, and the transported one, is integrable.
    pub integrable: Vec<(String, bool)>,
}

impl NormalizationReport {
    pub fn all_ok(&self) -> bool {
        self.ours.iter().chain(&self.sato).all(|c| c.ok) && self.integrable.iter().all(|(_, ok)| *ok)
    }
}

pub fn normalization_check() -> Result<NormalizationReport, ConformalError> {
    let vars = [birational::X, birational::Y];
    let uni = transcribed::uniformizing_system();
    let sato = transcribed::sato_system();
    let cmp = |sys: &SecondOrderSystem, theta: &LogDerivativeExpr, suffix: &str| -> Result<Vec<Comparison>, ConformalError> {
        let got = abcd_from_normalization(vars, &sys.l, &sys.m, theta)?;
        Ok(got
            .iter()
            .zip([&sys.a, &sys.b, &sys.c, &sys.d])
            .zip(["A", "B", "C", "D"])
            .map(|((g, p), n)| Comparison::new(format!("{n}{suffix}"), g, p))
            .collect())
    };
    let ours = cmp(&uni, &transcribed::our_normalization(), "1")?;
    let sato_cmp = cmp(&sato, &transcribed::sato_normalization(), "s")?;
    let moved = sy_transport(&transcribed::our_system(), &birational::f_map())?;
    let integrable = vec![
        ("period system".to_string(), is_integrable(&transcribed::our_system())?),
        ("uniformizing system".to_string(), is_integrable(&uni)?),
        ("Sato system".to_string(), is_integrable(&sato)?),
        ("transported period system".to_string(), is_integrable(&moved)?),
    ];
    Ok(NormalizationReport { ours, sato: sato_cmp, integrable })
}
