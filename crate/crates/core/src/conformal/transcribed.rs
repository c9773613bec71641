//! Coefficients, normalization factors and intermediate tables as printed.

use crate::algebra::euler::{LAMBDA, MU};
use crate::algebra::{parse_poly, parse_ratfun_with_aliases, rat, RatFun};

use super::birational::{X, Y};
use super::{LogDerivativeExpr, SecondOrderSystem};

/// `W`, `E` and `G` stand for the common denominator factors.
fn r(s: &str) -> RatFun {
    let s = s
        .replace('W', "(l + 16 l^2 - 80 l^3 + 125 m)")
        .replace('E', "(36 x^2 - 32 x - y)")
        .replace('G', "(240 x^4 - 88 x^2 y + 8 y^2 - x y^2)");
    parse_ratfun_with_aliases(&s, &[("l", LAMBDA), ("m", MU)]).expect("valid rational function text")
}

fn system(vars: [&str; 2], texts: [&str; 8]) -> SecondOrderSystem {
    SecondOrderSystem::new(vars, texts.map(r)).expect("nondegenerate")
}

/// The period system in `(lambda, mu)`.
pub fn our_system() -> SecondOrderSystem {
    system(
        [LAMBDA, MU],
        [
            "2 m (-1 + 15 l + 100 l^2)/W",
            "2 (l^2 - 8 l^3 + 16 l^4 + 5 m - 50 l m)/(m W)",
            "(-1 + 10 l)(1 + 20 l)/W",
            "5 m (3 + 40 l)/W",
            "-5 (-1 + 10 l)/(m W)",
            "(-l - 20 l^2 + 96 l^3 - 200 m)/(m W)",
            "2 (1 + 20 l)/W",
            "-10/(m W)",
        ],
    )
}

/// The uniformizing equation with the normalization factor matching the
/// period system.
pub fn uniformizing_system() -> SecondOrderSystem {
    system(
        [X, Y],
        [
            "-20 (4 x^2 + 3 x y - 4 y)/E",
            "-2 (54 x^3 - 50 x^2 - 3 x y + 2 y)/(5 y E)",
            "-2 (20 x^3 - 8 x y + 9 x^2 y + y^2)/(x y E)",
            "10 y (-8 + 3 x)/(x E)",
            "-2 (-25 x^2 + 27 x^3 + 2 y - 3 x y)/(5 y^2 E)",
            "-2 (-120 x^2 + 135 x^3 - 2 y - 3 x y)/(5 x y E)",
            "-2 (8 x - y)/(25 x E)",
            "-2 (-10 + 9 x)/(25 x y E)",
        ],
    )
}

/// Sato's conformal structure `(L, M)`, printed separately from the system
/// above.
pub fn sato_conformal() -> [RatFun; 2] {
    ["-20 (4 x^2 + 3 x y - 4 y)/(36 x^2 - 32 x - y)", "-2 (54 x^3 - 50 x^2 - 3 x y + 2 y)/(5 y (36 x^2 - 32 x - y))"]
        .map(r)
}

/// Sato's uniformizing equation.
pub fn sato_system() -> SecondOrderSystem {
    let [l, m] = sato_conformal();
    let rest = [
        "-20 (3 x - 2)/E",
        "-10 (8 x + 3 y)/E",
        "(3 x - 2)/(5 y E)",
        "(-198 x^2 + 180 x + 7 y)/(5 y E)",
        "-3/E",
        "3/(100 y E)",
    ]
    .map(r);
    let [a, b, c, d, p, q] = rest;
    SecondOrderSystem::new([X, Y], [l, m, a, b, c, d, p, q]).expect("nondegenerate")
}

fn quintic() -> crate::algebra::MPoly {
    super::klein::branch_quintic()
}

/// `theta` with `e^(2 theta) = x^4 (-36 x^2 + 32 x + y) / (y^(5/2) K^(3/2))`.
pub fn our_normalization() -> LogDerivativeExpr {
    LogDerivativeExpr::from_terms(&[
        (rat(4, 1), parse_poly("x").expect("valid")),
        (rat(1, 1), parse_poly("-36 x^2 + 32 x + y").expect("valid")),
        (rat(-5, 2), parse_poly("y").expect("valid")),
        (rat(-3, 2), quintic()),
    ])
    .expect("nonzero factors")
    .scale(&rat(1, 2))
}

/// `theta` with `e^(2 theta) = (-36 x^2 + 32 x + y) / (y^(1/2) K^(3/2))`.
/// The printed denominator has one closing parenthesis too many.
pub fn sato_normalization() -> LogDerivativeExpr {
    LogDerivativeExpr::from_terms(&[
        (rat(1, 1), parse_poly("-36 x^2 + 32 x + y").expect("valid")),
        (rat(-1, 2), parse_poly("y").expect("valid")),
        (rat(-3, 2), quintic()),
    ])
    .expect("nonzero factors")
    .scale(&rat(1, 2))
}

/// The coefficients of the period system rewritten in `(x, y)`.
pub fn our_coefficients_in_xy() -> [(&'static str, RatFun); 8] {
    [
        ("L0", "-y^2 (4 x^2 - y)(9 x^2 - y)/(250 x^3 G)"),
        ("M0", "-4000 x^3 (100 x^4 - 40 x^2 y + 3 x^3 y + 4 y^2 - x y^2)/(y^2 G)"),
        ("A0", "400 x^2 (3 x^2 - y)(6 x^2 - y)/(y G)"),
        ("B0", "-y^2 (13 x^2 - 2 y)/(25 x G)"),
        ("C0", "2 10^8 x^9 (3 x^2 - y)/(y^4 G)"),
        ("D0", "160000 x^5 (175 x^4 - 65 x^2 y + 6 y^2 - x y^2)/(y^3 G)"),
        ("P0", "1600 x^4 (6 x^2 - y)/(y G)"),
        ("Q0", "8 10^8 x^11/(y^4 G)"),
    ]
    .map(|(n, s)| (n, r(s)))
}

/// Derivatives of `f` in `lambda, mu`, written in `(x, y)`.
pub fn first_derivatives() -> [(&'static str, RatFun); 4] {
    [
        ("x_lambda", "60 x^3/y"),
        ("y_lambda", "100 x^2"),
        ("x_mu", "-10^5 x^6/y^3"),
        ("y_mu", "-2 10^5 x^5/y^2"),
    ]
    .map(|(n, s)| (n, r(s)))
}

pub fn second_derivatives() -> [(&'static str, RatFun); 6] {
    [
        ("x_lambda_lambda", "4800 x^5/y^2"),
        ("y_lambda_lambda", "12000 x^4/y"),
        ("x_mu_mu", "0"),
        ("y_mu_mu", "2 10^10 x^10/y^5"),
        ("x_lambda_mu", "-6 10^6 x^8/y^4"),
        ("y_lambda_mu", "-2 10^7 x^7/y^3"),
    ]
    .map(|(n, s)| (n, r(s)))
}
