//! Numerical analytic continuation of the Pfaffian system along closed
//! paths, and conjugation-invariant evidence about the monodromy group.

pub mod invariants;
pub mod loops;

use nalgebra::{Matrix4, SVector};
use num_complex::Complex64;
use ode_solvers::{Dopri5, OutputType, System};
use serde::Serialize;

use crate::algebra::euler::{LAMBDA, MU};
use crate::algebra::{CompiledRatFun, RatFun};
use crate::pfaffian::{derive_connection, Connection, PfaffianError, THETA_FRAME};

pub use invariants::{char_poly, invariant_form, monodromy_invariants, InvariantForm, MonodromyInvariants};
pub use loops::{default_base_point, loop_library, trivial_loop, LoopFile, LoopSpec, Segment};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MonodromyError {
    #[error(transparent)]
    Pfaffian(#[from] PfaffianError),
    #[error("step size underflow at t = {0} (path too close to the singular locus?)")]
    StepUnderflow(f64),
    #[error("non-finite values during integration")]
    NonFinite,
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("path not closed: {0}")]
    NotClosed(String),
    #[error("path touches the singular locus: {0}")]
    TooClose(String),
    #[error("malformed loop: {0}")]
    Malformed(String),
    #[error("double root of t4 over the base lambda; resample the base point")]
    DoubleRoot,
    #[error("base point on the singular locus")]
    BasePoint,
    #[error("root isolation failed")]
    RootIsolation,
}

pub type CMatrix = Matrix4<Complex64>;

/// The connection with coordinate derivatives: `d phi = (A / lambda) phi dlambda + (B / mu) phi dmu`.
#[derive(Clone, Debug)]
pub struct NumericConnection {
    a: Vec<CompiledRatFun>,
    b: Vec<CompiledRatFun>,
}

impl NumericConnection {
    pub fn from_connection(c: &Connection) -> Self {
        let compile = |m: &[Vec<RatFun>], var: &str| -> Vec<CompiledRatFun> {
            let v = RatFun::var(var);
            m.iter().flatten().map(|x| (x / &v).compile(&[LAMBDA, MU])).collect()
        };
        NumericConnection { a: compile(&c.a, LAMBDA), b: compile(&c.b, MU) }
    }

    pub fn derived() -> Result<Self, PfaffianError> {
        let c = derive_connection(&[crate::periods::l1(), crate::periods::l3()], &THETA_FRAME)?;
        Ok(Self::from_connection(&c))
    }

    /// `Omega(p)(dp)`.
    pub fn omega(&self, p: [Complex64; 2], dp: [Complex64; 2]) -> CMatrix {
        let x = [p[0], p[1]];
        CMatrix::from_fn(|i, j| {
            let k = 4 * i + j;
            let mut v = Complex64::new(0.0, 0.0);
            if dp[0] != Complex64::new(0.0, 0.0) {
                v += self.a[k].eval(&x) * dp[0];
            }
            if dp[1] != Complex64::new(0.0, 0.0) {
                v += self.b[k].eval(&x) * dp[1];
            }
            v
        })
    }
}

pub const FRAME: &str = "(1, theta_lambda, theta_mu, theta_lambda^2)";

type State = SVector<f64, 32>;

fn to_state(m: &CMatrix) -> State {
    State::from_fn(|k, _| {
        let z = m[k / 2];
        if k % 2 == 0 {
            z.re
        } else {
            z.im
        }
    })
}

fn from_state(y: &State) -> CMatrix {
    CMatrix::from_fn(|i, j| {
        let k = 2 * (i + 4 * j);
        Complex64::new(y[k], y[k + 1])
    })
}

struct PathSystem<'a> {
    conn: &'a NumericConnection,
    path: loops::Path,
}

impl System<f64, State> for PathSystem<'_> {
    fn system(&self, t: f64, y: &State, dy: &mut State) {
        let (p, dp) = self.path.at(t);
        *dy = to_state(&(self.conn.omega(p, dp) * from_state(y)));
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StepStats {
    pub evaluations: u64,
    pub accepted: u64,
    pub rejected: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FundamentalMatrix {
    #[serde(serialize_with = "invariants::ser_matrix")]
    pub value: CMatrix,
    /// Basis of the solution vector at the base point.
    pub frame: &'static str,
    pub condition: f64,
    /// Accumulated local error bound: `tol` per accepted step, scaled by the
    /// largest norm of `Y` seen at a segment end.
    pub error_estimate: f64,
    pub stats: StepStats,
}

fn condition_number(m: &CMatrix) -> f64 {
    let s = m.svd(false, false).singular_values;
    s.max() / s.min()
}

/// Local tolerance handed to the stepper, relative to the requested `tol`.
/// Global error over a loop runs about a hundred local errors, so this makes
/// `tol` a rough bound on the error of the returned matrix.
pub const LOCAL_TOL_FACTOR: f64 = 1e-2;

/// Transport matrix `Y(1)` of `dY = Omega Y`, `Y(0) = I`, along the loop.
pub fn continue_along(conn: &NumericConnection, spec: &LoopSpec, tol: f64) -> Result<FundamentalMatrix, MonodromyError> {
    let paths = spec.paths()?;
    let mut y = CMatrix::identity();
    let mut stats = StepStats::default();
    let mut ymax: f64 = 1.0;
    let local = tol * LOCAL_TOL_FACTOR;
    for path in paths {
        if let loops::Path::Arc { winding, .. } = path {
            if winding == 0.0 {
                continue;
            }
        }
        let sys = PathSystem { conn, path };
        let mut solver = Dopri5::from_param(
            sys,
            0.0,
            1.0,
            1.0,
            to_state(&y),
            local,
            local,
            0.9,
            0.04,
            0.2,
            10.0,
            0.05,
            0.0,
            2_000_000,
            u32::MAX,
            OutputType::Sparse,
        );
        let st = solver.integrate().map_err(|e| match e {
            ode_solvers::dop_shared::IntegrationError::StepSizeUnderflow { x } => MonodromyError::StepUnderflow(x),
            other => MonodromyError::Integration(other.to_string()),
        })?;
        stats.evaluations += st.num_eval as u64;
        stats.accepted += st.accepted_steps as u64;
        stats.rejected += st.rejected_steps as u64;
        let last = solver.y_out().last().ok_or(MonodromyError::Integration("no output".into()))?;
        y = from_state(last);
        ymax = ymax.max(y.norm());
        if y.iter().any(|z| !z.is_finite()) {
            return Err(MonodromyError::NonFinite);
        }
    }
    Ok(FundamentalMatrix {
        condition: condition_number(&y),
        value: y,
        frame: FRAME,
        error_estimate: local * stats.accepted.max(1) as f64 * ymax,
        stats,
    })
}

/// Reject loops that come within `eps` of the singular locus.
pub fn check_clearance(spec: &LoopSpec, eps: f64) -> Result<f64, MonodromyError> {
    let m = spec.samples(400)?.into_iter().map(loops::clearance).fold(f64::INFINITY, f64::min);
    if m < eps {
        return Err(MonodromyError::TooClose(format!("{}: clearance {m:.3e} < {eps:.1e}", spec.name)));
    }
    Ok(m)
}
