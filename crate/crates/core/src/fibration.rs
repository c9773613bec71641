//! Elliptic fibration of the family: Kodaira normal forms, discriminants,
//! singular fibres and the section.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::euler::{LAMBDA, MU};
use crate::algebra::parse::parse_poly_with_aliases;
use crate::algebra::ratfun::substitute_poly;
use crate::algebra::roots::{dense_coefficients, poly_roots};
use crate::algebra::{parse_ratfun_with_aliases, AlgebraError, MPoly, Rat, RatFun};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FibrationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("point on singular locus")]
    SingularPoint,
    #[error("root isolation failed")]
    RootIsolation,
}

const ALIASES: [(&str, &str); 2] = [("l", LAMBDA), ("m", MU)];

fn p(s: &str) -> MPoly {
    parse_poly_with_aliases(s, &ALIASES).expect("valid polynomial text")
}

fn r(s: &str) -> RatFun {
    parse_ratfun_with_aliases(s, &ALIASES).expect("valid rational function text")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chart {
    /// Affine coordinate `z`.
    Z,
    /// `z1 = 1/z`.
    Z1,
}

impl Chart {
    pub fn var(self) -> &'static str {
        match self {
            Chart::Z => "z",
            Chart::Z1 => "z1",
        }
    }
}

/// `y^2 = 4x^3 - g2 x - g3` over one chart of the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KodairaModel {
    pub chart: Chart,
    pub g2: MPoly,
    pub g3: MPoly,
}

impl KodairaModel {
    pub fn var(&self) -> &'static str {
        self.chart.var()
    }

    pub fn discriminant(&self) -> MPoly {
        &self.g2.pow(3) - &self.g3.pow(2).scale(&Rat::from_integer(27.into()))
    }
}

pub fn kodaira_model(chart: Chart) -> KodairaModel {
    match chart {
        Chart::Z => KodairaModel {
            chart,
            g2: &p("18l^4+432l m z+72l^3 z(1+z)+108l^2 z^2(1+z)^2+72l z^3(1+z)^3+18z^2(1+z)(24m+z^2(1+z)^3)")
                * &p("1/216"),
            g3: &p("l^6+36l^3 m z+6l^5 z(1+z)+108l^2 m z^2(1+z)+15l^4 z^2(1+z)^2+108l m z^3(1+z)^2+20l^3 z^3(1+z)^3+15l^2 z^4(1+z)^4+6l z^5(1+z)^5+z^2(216m^2+36m z^2(1+z)^3+z^4(1+z)^6)")
                * &p("-1/216"),
        },
        Chart::Z1 => KodairaModel {
            chart,
            g2: p("2m z1^5(1+z1+l z1^2)+1/12(1+z1+l z1^2)^4"),
            g3: -p("1/6 m z1^5(1+z1+l z1^2)^3+1/216(1+z1+l z1^2)^6+m^2 z1^10"),
        },
    }
}

/// The printed discriminants `D_0` and `D_inf`.
pub fn printed_discriminant(chart: Chart) -> MPoly {
    match chart {
        Chart::Z => p("64m^3 z^3(l^3+3l^2 z+27m z+3l z^2+3l^2 z^2+z^3+6l z^3+3z^4+3l z^4+3z^5+z^6)"),
        Chart::Z1 => p("64m^3 z1^15(1+3z1+3z1^2+3l z1^2+z1^3+6l z1^3+3l z1^4+3l^2 z1^4+3l^2 z1^5+27m z1^5+l^3 z1^6)"),
    }
}

/// `x y z^2 (x + y + z + 1) + lambda x y z + mu`.
pub fn family_equation() -> MPoly {
    p("x y z^2(x+y+z+1)+l x y z+m")
}

/// Right-hand side of the intermediate cubic form in `x0`.
pub fn pre_kodaira_rhs() -> MPoly {
    p("4x0^3+(l^2+2l z+z^2+2l z^2+2z^3+z^4)x0^2+(-2l m z-2m z^2-2m z^3)x0+m^2 z^2")
}

#[derive(Debug, Clone, Serialize)]
pub struct SubstitutionReport {
    /// `(y1^2 - rhs(x0)) / F` in canonical form; a Laurent monomial when the
    /// first transformation is correct.
    pub first_step_quotient: String,
    pub first_step_ok: bool,
    /// Shift exactly as printed reproduces the Kodaira form.
    pub printed_shift_ok: bool,
    /// Shift with `2 lambda z` in place of the printed `2 lambda mu`.
    pub corrected_shift_ok: bool,
    /// Chart change maps the `z` form onto the `z1` form.
    pub chart_change_ok: bool,
}

fn is_laurent_monomial(f: &RatFun) -> bool {
    f.num().num_terms() == 1 && f.den().num_terms() == 1
}

fn kodaira_rhs(model: &KodairaModel, x: &RatFun) -> RatFun {
    let g2 = RatFun::from_poly(model.g2.clone());
    let g3 = RatFun::from_poly(model.g3.clone());
    &(&(&RatFun::from_int(4) * &x.pow(3).expect("positive power")) - &(&g2 * x)) - &g3
}

pub fn substitution_chain() -> SubstitutionReport {
    let f = RatFun::from_poly(family_equation());
    let x0 = r("-m/x");
    let y1 = r("m/(x^2 z)(2x y z^2+(l x z+x z^2+x^2 z^2+x z^3))");
    let rhs = substitute_poly(&pre_kodaira_rhs(), &[("x0", x0.clone())]);
    let diff = &y1.pow(2).expect("power") - &rhs;
    let q = &diff / &f;
    let first_step_ok = is_laurent_monomial(&q);

    let model = kodaira_model(Chart::Z);
    let check_shift = |shift: &str| -> bool {
        let s = r(shift);
        // x0 = x1 - shift, compare rhs(x0) with the Kodaira form in x1
        let x0_of_x1 = &RatFun::var("x1") - &s;
        let lhs = substitute_poly(&pre_kodaira_rhs(), &[("x0", x0_of_x1)]);
        lhs == kodaira_rhs(&model, &RatFun::var("x1"))
    };
    let printed_shift_ok = check_shift("1/12(l^2+2l m+z^2+2l z^2+2z^3+z^4)");
    let corrected_shift_ok = check_shift("1/12(l^2+2l z+z^2+2l z^2+2z^3+z^4)");

    // x2 = x0 z1^4 + (1+z1+l z1^2)^2/12, y2 = z1^6 y1, z = 1/z1:
    // y2^2 - K_inf(x2) must equal z1^12 (y1^2 - rhs(x0)).
    let z_of_z1 = r("1/z1");
    let rhs_z1 = substitute_poly(&pre_kodaira_rhs(), &[("z", z_of_z1)]);
    let x0_of_x2 = &(&RatFun::var("x2") - &r("1/12(1+z1+l z1^2)^2")) / &r("z1^4");
    let lhs = &substitute_poly(rhs_z1.num(), &[("x0", x0_of_x2.clone())])
        / &substitute_poly(rhs_z1.den(), &[("x0", x0_of_x2)]);
    let scaled = &lhs * &r("z1^12");
    let chart_change_ok = scaled == kodaira_rhs(&kodaira_model(Chart::Z1), &RatFun::var("x2"));
    SubstitutionReport {
        first_step_quotient: q.to_string(),
        first_step_ok,
        printed_shift_ok,
        corrected_shift_ok,
        chart_change_ok,
    }
}

/// `h2(z1) = z1^8 g2(1/z1)`, `h3(z1) = z1^12 g3(1/z1)`.
pub fn chart_relation_holds() -> bool {
    let g = kodaira_model(Chart::Z);
    let h = kodaira_model(Chart::Z1);
    let inv = [("z", r("1/z1"))];
    let h2 = &substitute_poly(&g.g2, &inv) * &r("z1^8");
    let h3 = &substitute_poly(&g.g3, &inv) * &r("z1^12");
    h2 == RatFun::from_poly(h.g2) && h3 == RatFun::from_poly(h.g3)
}

/// Constant `c` with printed discriminant `= c (g2^3 - 27 g3^2)`, if any.
pub fn discriminant_constant(chart: Chart) -> Option<Rat> {
    let m = kodaira_model(chart);
    let q = &RatFun::from_poly(printed_discriminant(chart)) / &RatFun::from_poly(m.discriminant());
    q.constant_value()
}

pub fn j_invariant(model: &KodairaModel) -> RatFun {
    let g = model.g2.pow(3);
    &RatFun::from_poly(g) / &RatFun::from_poly(model.discriminant())
}

/// Order of the pole (positive) or zero (negative) of `f` at `var = 0`.
pub fn pole_order_at_zero(f: &RatFun, var: &str) -> i64 {
    let low = |p: &MPoly| p.terms().map(|(e, _)| p.exponent_of(e, var)).min().unwrap_or(0) as i64;
    low(f.den()) - low(f.num())
}

/// Section `x1 = (lambda + z + z^2)^2 / 12`, `y1 = mu z` substituted into
/// the Kodaira form; zero when the section lies on the surface.
pub fn section_residual(x1: &str, y1: &str) -> RatFun {
    let model = kodaira_model(Chart::Z);
    let x = r(x1);
    let y = r(y1);
    &y.pow(2).expect("power") - &kodaira_rhs(&model, &x)
}

pub const SECTION_X: &str = "1/12(l^2+2l z+z^2+2l z^2+2z^3+z^4)";
pub const SECTION_Y: &str = "m z";

/// The section identity, checked symbolically in `(lambda, mu, z)`.
pub fn verify_section() -> bool {
    section_residual(SECTION_X, SECTION_Y).is_zero()
}

/// Section residual evaluated exactly at one point.
pub fn section_residual_at(lambda: &Rat, mu: &Rat, z: &Rat) -> Rat {
    let model = kodaira_model(Chart::Z);
    let pt = [(LAMBDA, lambda.clone()), (MU, mu.clone()), ("z", z.clone())];
    let x = p(SECTION_X).eval(&pt).expect("full evaluation");
    let y = p(SECTION_Y).eval(&pt).expect("full evaluation");
    let g2 = model.g2.eval(&pt).expect("full evaluation");
    let g3 = model.g3.eval(&pt).expect("full evaluation");
    &y * &y - (Rat::from_integer(4.into()) * &x * &x * &x - g2 * &x - g3)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum KodairaType {
    Smooth,
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
    NonMinimal,
    Unknown,
}

impl KodairaType {
    pub fn from_orders(v2: u32, v3: u32, vd: u32) -> Self {
        use KodairaType::*;
        if v2 >= 4 && v3 >= 6 {
            return NonMinimal;
        }
        match (v2, v3, vd) {
            (_, _, 0) => Smooth,
            (0, 0, n) => I(n),
            (a, 1, 2) if a >= 1 => II,
            (1, b, 3) if b >= 2 => III,
            (a, 2, 4) if a >= 2 => IV,
            (a, b, 6) if a >= 2 && b >= 3 => IStar(0),
            (2, 3, n) if n > 6 => IStar(n - 6),
            (a, 4, 8) if a >= 3 => IVStar,
            (3, b, 9) if b >= 5 => IIIStar,
            (a, 5, 10) if a >= 4 => IIStar,
            _ => Unknown,
        }
    }

    pub fn euler_number(&self) -> Option<u32> {
        use KodairaType::*;
        Some(match self {
            Smooth => 0,
            I(n) => *n,
            II => 2,
            III => 3,
            IV => 4,
            IStar(n) => n + 6,
            IVStar => 8,
            IIIStar => 9,
            IIStar => 10,
            NonMinimal | Unknown => return None,
        })
    }

    pub fn symbol(&self) -> String {
        use KodairaType::*;
        match self {
            Smooth => "smooth".into(),
            I(n) => format!("I{n}"),
            II => "II".into(),
            III => "III".into(),
            IV => "IV".into(),
            IStar(n) => format!("I{n}*"),
            IVStar => "IV*".into(),
            IIIStar => "III*".into(),
            IIStar => "II*".into(),
            NonMinimal => "non-minimal".into(),
            Unknown => "unknown".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberReport {
    pub chart: Chart,
    /// `"0"` for the chart origin, otherwise a decimal complex root.
    pub location: String,
    pub ord_g2: u32,
    pub ord_g3: u32,
    pub ord_delta: u32,
    pub kodaira_type: String,
    pub euler_contribution: Option<u32>,
}

fn order_at_zero(p: &MPoly, var: &str) -> u32 {
    if p.is_zero() {
        return u32::MAX;
    }
    p.terms().map(|(e, _)| p.exponent_of(e, var)).min().unwrap_or(0)
}

fn strip_power(p: &MPoly, var: &str) -> MPoly {
    let k = order_at_zero(p, var);
    if k == 0 {
        return p.clone();
    }
    p.div_exact(&MPoly::monomial(&[var], &[k], Rat::from_integer(1.into()))).expect("monomial divides")
}

/// Yun's square-free decomposition of a univariate polynomial.
pub fn squarefree_decomposition(f: &MPoly, var: &str) -> Vec<(MPoly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.diff(var);
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let mut c = df.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.diff(var);
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.normalized(), i));
        }
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b.diff(var);
        i += 1;
    }
    out
}

/// Split the roots of square-free `p` by the vanishing order of `f`.
fn split_by_order(p: &MPoly, f: &MPoly, var: &str) -> Vec<(MPoly, u32)> {
    let mut out = Vec::new();
    let mut rest = p.clone();
    let mut g = f.clone();
    let mut k = 0;
    while !rest.is_constant() {
        if g.is_zero() {
            out.push((rest.clone(), u32::MAX));
            break;
        }
        let common = rest.gcd(&g);
        let here = rest.div_exact(&common).expect("gcd divides");
        if !here.is_constant() {
            out.push((here, k));
        }
        rest = common;
        g = g.diff(var);
        k += 1;
    }
    out
}

fn format_root(z: Complex64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

fn specialize(m: &MPoly, lambda: &Rat, mu: &Rat) -> MPoly {
    m.eval_partial(&[(LAMBDA, lambda.clone()), (MU, mu.clone())])
}

/// Every singular fibre of the surface at a rational parameter point.
pub fn classify_fibers(lambda: &Rat, mu: &Rat) -> Result<Vec<FiberReport>, FibrationError> {
    let t4 = crate::pfaffian::t4();
    let t = t4.eval(&[(LAMBDA, lambda.clone()), (MU, mu.clone())]).expect("full evaluation");
    if lambda.is_zero() || mu.is_zero() || t.is_zero() {
        return Err(FibrationError::SingularPoint);
    }
    let mut out = Vec::new();
    for chart in [Chart::Z, Chart::Z1] {
        let model = kodaira_model(chart);
        let v = chart.var();
        let g2 = specialize(&model.g2, lambda, mu);
        let g3 = specialize(&model.g3, lambda, mu);
        let delta = specialize(&model.discriminant(), lambda, mu);
        let (o2, o3, od) = (order_at_zero(&g2, v), order_at_zero(&g3, v), order_at_zero(&delta, v));
        let ty = KodairaType::from_orders(o2, o3, od);
        if ty != KodairaType::Smooth {
            out.push(FiberReport {
                chart,
                location: "0".into(),
                ord_g2: o2,
                ord_g3: o3,
                ord_delta: od,
                kodaira_type: ty.symbol(),
                euler_contribution: ty.euler_number(),
            });
        }
        if chart == Chart::Z1 {
            // the remaining roots of the second chart are those of the first
            break;
        }
        let rest = strip_power(&delta, v);
        for (piece, kd) in squarefree_decomposition(&rest, v) {
            for (q2, k2) in split_by_order(&piece, &g2, v) {
                for (q3, k3) in split_by_order(&q2, &g3, v) {
                    let ty = KodairaType::from_orders(k2, k3, kd);
                    let roots = poly_roots(&dense_coefficients(&q3, v)).ok_or(FibrationError::RootIsolation)?;
                    let mut roots = roots;
                    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite"));
                    for z in roots {
                        out.push(FiberReport {
                            chart,
                            location: format_root(z),
                            ord_g2: k2,
                            ord_g3: k3,
                            ord_delta: kd,
                            kodaira_type: ty.symbol(),
                            euler_contribution: ty.euler_number(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Sum of Euler contributions; `None` if some fibre type is not classified.
pub fn euler_sum(fibers: &[FiberReport]) -> Option<u32> {
    fibers.iter().map(|f| f.euler_contribution).sum()
}

/// Multiset of fibre symbols, sorted.
pub fn type_multiset(fibers: &[FiberReport]) -> Vec<String> {
    let mut v: Vec<String> = fibers.iter().map(|f| f.kodaira_type.clone()).collect();
    v.sort();
    v
}
