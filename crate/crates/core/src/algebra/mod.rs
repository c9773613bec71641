//! Exact algebra: rationals, multivariate polynomials, rational functions,
//! truncated bivariate series and Euler operators.

pub mod euler;
mod gcd;
pub mod linalg;
pub mod mpoly;
pub mod parse;
pub mod rat;
pub mod ratfun;
pub mod roots;
pub mod series;

pub use euler::EulerOperator;
pub use mpoly::MPoly;
pub use parse::{parse_poly, parse_ratfun, parse_ratfun_with_aliases};
pub use rat::{rat, rat_int, Rat, RatOp};
pub use ratfun::{CompiledRatFun, RatFun};
pub use series::TruncatedSeries2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expression is not a polynomial")]
    NotPolynomial,
    #[error("operator has negative multiplication exponents")]
    LaurentOperator,
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("series coefficient not available at ({0},{1})")]
    OutOfOrder(u32, u32),
    #[error("{0}")]
    Invalid(String),
}
