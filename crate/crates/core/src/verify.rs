//! Check suites over every module and the JSON report they feed.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::euler::{LAMBDA, MU};
use crate::algebra::{rat_int, Rat};
use crate::conformal::{self, Comparison};
use crate::fibration::{self, Chart};
use crate::lattice::{self, qsqrt5, LatticeData, LatticeError};
use crate::monodromy::{self, CMatrix, LoopSpec, NumericConnection};
use crate::periods;
use crate::pfaffian;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A numerical result that met its thresholds.
    Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: Value,
}

impl Check {
    pub fn exact(name: &str, ok: bool, details: Value) -> Self {
        Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, details }
    }

    pub fn numeric(name: &str, ok: bool, details: Value) -> Self {
        Check { name: name.into(), status: if ok { Status::Evidence } else { Status::Fail }, details }
    }

    pub fn error(name: &str, e: impl std::fmt::Display) -> Self {
        Check { name: name.into(), status: Status::Fail, details: json!({ "error": e.to_string() }) }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataFile {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub command: String,
    /// Copied from the configuration so that reports stay reproducible.
    pub timestamp: Option<String>,
    pub inputs: Value,
    pub checks: Vec<Check>,
    pub data_files: Vec<DataFile>,
    pub flags: Vec<String>,
}

impl VerificationReport {
    pub fn new(command: &str, timestamp: Option<String>, inputs: Value) -> Self {
        VerificationReport {
            schema: SCHEMA,
            command: command.into(),
            timestamp,
            inputs,
            checks: Vec::new(),
            data_files: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Check::failed)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn s<T: ToString>(x: T) -> String {
    x.to_string()
}

fn rat_str(r: &Rat) -> String {
    crate::algebra::rat::rat_to_string(r)
}

// ---------------------------------------------------------------- series

pub fn coefficient_table(order: u32) -> Vec<(u32, u32, String)> {
    periods::period_series(order).iter().map(|(n, m, c)| (n, m, rat_str(c))).collect()
}

pub fn series_suite(order: u32) -> Vec<Check> {
    let mut out = Vec::new();
    let c01 = periods::period_coefficient(0, 1);
    let c11 = periods::period_coefficient(1, 1);
    out.push(Check::exact("series.c01", c01 == rat_int(-60), json!({ "value": rat_str(&c01), "expected": "-60" })));
    out.push(Check::exact("series.c11", c11 == rat_int(-840), json!({ "value": rat_str(&c11), "expected": "-840" })));
    let eta = periods::period_series(order);
    out.push(Check::exact(
        "series.recurrences",
        periods::series_from_recurrences(order) == eta,
        json!({ "order": order }),
    ));
    for (name, op) in [("L1", periods::l1()), ("L2", periods::l2()), ("L3", periods::l3())] {
        let check = format!("series.annihilation.{name}");
        out.push(match periods::verify_annihilation(&op, &eta) {
            Ok(r) => Check::exact(
                &check,
                r.annihilates(),
                json!({ "operator": s(&op), "series_order": order, "reliable_order": r.checked_order, "nonzero": r.nonzero }),
            ),
            Err(e) => Check::error(&check, e),
        });
    }
    let data = periods::GkzData::default();
    out.push(
        match periods::gkz_operators(&data)
            .and_then(|ops| periods::reduce_to_two_vars(&data, &ops, &periods::Reduction::default()))
        {
            Ok(sys) => {
                let ok = sys.torus_vanishes && sys.operators == [periods::l1(), periods::l2()];
                Check::exact(
                    "series.gkz_reduction",
                    ok,
                    json!({ "operators": sys.operators.iter().map(s).collect::<Vec<_>>(), "torus_vanishes": sys.torus_vanishes }),
                )
            }
            Err(e) => Check::error("series.gkz_reduction", e),
        },
    );
    out
}

pub fn operator_suite() -> Vec<Check> {
    let name = "operators.second_operator";
    vec![match periods::find_second_operator(3, 24) {
        Ok(f) => Check::exact(
            name,
            f.kernel_dim == f.multiples_dim + 1 && f.l3_scale.is_some(),
            json!({
                "operator": s(&f.operator),
                "kernel_dim": f.kernel_dim,
                "l1_multiples_dim": f.multiples_dim,
                "l3_scale": f.l3_scale.as_ref().map(rat_str),
                "l1_multiplier": f.l1_multiplier.as_ref().map(s),
            }),
        ),
        Err(e) => Check::error(name, e),
    }]
}

// -------------------------------------------------------------- pfaffian

pub fn pfaffian_suite() -> Vec<Check> {
    let mut out = Vec::new();
    let c = match pfaffian::derive_connection(&[periods::l1(), periods::l3()], &pfaffian::THETA_FRAME) {
        Ok(c) => c,
        Err(e) => return vec![Check::error("pfaffian.derivation", e)],
    };
    out.push(Check::exact("pfaffian.derivation", true, json!({ "frame": monodromy::FRAME })));

    let eta = periods::period_series(20);
    let mut min_order = u32::MAX;
    let mut failed = None;
    for (m, var) in [(&c.a, 0), (&c.b, 1)] {
        match pfaffian::series_check(m, &pfaffian::THETA_FRAME, var, &eta) {
            Ok(orders) => {
                for o in orders {
                    min_order = min_order.min(o.unwrap_or(0));
                }
            }
            Err(e) => failed = Some(e),
        }
    }
    out.push(match failed {
        Some(e) => Check::error("pfaffian.series_oracle", e),
        None => Check::exact("pfaffian.series_oracle", min_order >= 10, json!({ "verified_through_order": min_order, "required": 10 })),
    });

    let residual = pfaffian::integrability_residual_cleared(&c.a, &c.b);
    let nonzero = residual.iter().flatten().filter(|p| !p.is_zero()).count();
    out.push(Check::exact("pfaffian.integrability", nonzero == 0, json!({ "identities": 16, "nonzero": nonzero })));

    let t = pfaffian::transcribed_connection();
    let mut unreadable = Vec::new();
    let mut mismatched = Vec::new();
    let mut repaired = Vec::new();
    for e in &t.entries {
        let derived = if e.name.starts_with('a') { &c.a[e.row][e.col] } else { &c.b[e.row][e.col] };
        if e.issues.contains(&pfaffian::EntryIssue::UnbalancedRepaired) {
            repaired.push(e.name.clone());
        }
        match &e.value {
            None => unreadable.push(e.name.clone()),
            Some(v) if v != derived => mismatched.push(json!({
                "entry": e.name,
                "printed": v.to_canonical_string(),
                "derived": derived.to_canonical_string(),
            })),
            Some(_) => {}
        }
    }
    out.push(Check::exact(
        "pfaffian.printed_entries",
        unreadable.iter().all(|n| n == "a24"),
        json!({
            "entries": t.entries.len(),
            "unreadable": unreadable,
            "repaired_parentheses": repaired,
            "mismatched_transcriptions": mismatched,
            "policy": "derived entries are used; mismatches are reported",
        }),
    ));

    let r4 = pfaffian::solve_r4(&c.a[3][3]);
    let t4 = crate::algebra::RatFun::from_poly(pfaffian::t4());
    out.push(Check::exact("pfaffian.r4", r4 == t4, json!({ "r4": r4.to_canonical_string() })));

    out.extend(singular_locus_suite());
    out
}

pub fn singular_locus_suite() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(match pfaffian::singular_locus(&[periods::l1(), periods::l3()]) {
        Ok(sl) => {
            let names: Vec<String> = sl.components.iter().map(s).collect();
            let want = [s(LAMBDA), s(MU), s(pfaffian::t4())];
            Check::exact(
                "pfaffian.singular_locus",
                names == want,
                json!({
                    "components": names,
                    "apparent": sl.apparent.iter().map(|(p, f)| json!({ "factor": s(p), "absent_in_frame": f })).collect::<Vec<_>>(),
                }),
            )
        }
        Err(e) => Check::error("pfaffian.singular_locus", e),
    });
    let r = pfaffian::t4_parametrization_residual();
    out.push(Check::exact(
        "pfaffian.t4_parametrization",
        pfaffian::is_zero_ratfun(&r),
        json!({ "residual": r.to_canonical_string() }),
    ));
    out
}

// ------------------------------------------------------------- fibration

pub fn fibers_check(lambda: &Rat, mu: &Rat) -> Check {
    let name = "fibration.fibres";
    match fibration::classify_fibers(lambda, mu) {
        Ok(f) => {
            let types = fibration::type_multiset(&f);
            let euler = fibration::euler_sum(&f);
            let want = ["I1", "I1", "I1", "I1", "I1", "I1", "I15", "I3"];
            Check::exact(
                name,
                types == want && euler == Some(24),
                json!({ "lambda": rat_str(lambda), "mu": rat_str(mu), "types": types, "euler_sum": euler, "fibres": f }),
            )
        }
        Err(e) => Check::error(name, e),
    }
}

pub fn fibration_suite() -> Vec<Check> {
    let mut out = Vec::new();
    let sc = fibration::substitution_chain();
    let chart = fibration::chart_relation_holds();
    out.push(Check::exact(
        "fibration.substitution_chain",
        sc.first_step_ok && sc.corrected_shift_ok && sc.chart_change_ok && chart,
        json!({ "report": sc, "chart_relation": chart }),
    ));
    let cz = fibration::discriminant_constant(Chart::Z);
    let cz1 = fibration::discriminant_constant(Chart::Z1);
    out.push(Check::exact(
        "fibration.discriminants",
        cz.is_some() && cz == cz1,
        json!({ "constant_z": cz.as_ref().map(rat_str), "constant_z1": cz1.as_ref().map(rat_str) }),
    ));
    out.push(fibers_check(&rat_int(1), &rat_int(1)));
    let pz = fibration::pole_order_at_zero(&fibration::j_invariant(&fibration::kodaira_model(Chart::Z)), Chart::Z.var());
    let pz1 = fibration::pole_order_at_zero(&fibration::j_invariant(&fibration::kodaira_model(Chart::Z1)), Chart::Z1.var());
    out.push(Check::exact("fibration.j_poles", pz == 3 && pz1 == 15, json!({ "z": pz, "z1": pz1 })));
    out.push(Check::exact(
        "fibration.section",
        fibration::verify_section(),
        json!({ "x": fibration::SECTION_X, "y": fibration::SECTION_Y }),
    ));
    out
}

// --------------------------------------------------------------- lattice

pub fn load_lattice(data_dir: Option<&Path>) -> Result<LatticeData, LatticeError> {
    match data_dir {
        Some(d) => LatticeData::load(d),
        None => Ok(LatticeData::embedded()),
    }
}

pub fn lattice_data_files(d: &LatticeData) -> Vec<DataFile> {
    d.checksums.iter().map(|(f, h)| DataFile { file: f.clone(), sha256: h.clone() }).collect()
}

pub fn lattice_suite(data: &Result<LatticeData, LatticeError>) -> Vec<Check> {
    let d = match data {
        Ok(d) => d,
        Err(e) => {
            let file = match e {
                LatticeError::Checksum { file, .. } | LatticeError::Io { file, .. } | LatticeError::Malformed { file, .. } => {
                    Some(file.clone())
                }
                _ => None,
            };
            return vec![Check {
                name: "lattice.data".into(),
                status: Status::Fail,
                details: json!({ "error": e.to_string(), "file": file }),
            }];
        }
    };
    let mut out = vec![Check::exact("lattice.data", true, json!({ "files": lattice_data_files(d) }))];
    let det = lattice::gram_det(&d.m1);
    out.push(Check::exact(
        "lattice.det_m1",
        det == (-5).into() && lattice::primitivity_by_det(&d.m1),
        json!({ "det": s(&det), "square_free": lattice::primitivity_by_det(&d.m1) }),
    ));
    let det_u = lattice::gram_det(&d.u);
    let cong = lattice::congruence_check(&d.m1, &lattice::m0(), &d.u);
    out.push(Check::exact(
        "lattice.congruence",
        cong == Ok(true) && det_u.magnitude() == &1u32.into(),
        json!({ "det_u": s(&det_u), "tU_M1_U_eq_M0": cong.as_ref().ok() }),
    ));
    let a = lattice::transcendental_form();
    let (da, sa) = (lattice::gram_det(&a), lattice::gram_signature(&a));
    out.push(Check::exact(
        "lattice.transcendental_form",
        da == 5.into() && sa == (2, 2),
        json!({ "det": s(&da), "signature": sa }),
    ));
    let mut gens = Vec::new();
    let mut all = true;
    for (name, g) in lattice::generators() {
        match lattice::orthogonal_membership(&g) {
            Ok(m) => {
                all &= m.member;
                gens.push(json!({ "name": name, "member": m.member, "plus": m.plus }));
            }
            Err(e) => return vec![Check::error("lattice.generators", e)],
        }
    }
    out.push(Check::exact("lattice.generators", all, json!({ "generators": gens })));
    let want: qsqrt5::Q5Matrix = (0..4).map(|i| (0..4).map(|j| qsqrt5::Q5::from_int(a[(i, j)])).collect()).collect();
    let split = qsqrt5::block_diag(&qsqrt5::hyperbolic_plane(), &qsqrt5::w_block());
    out.push(Check::exact("lattice.w_block", split == want, json!({ "identity": "A = U + W U tW over Q(sqrt 5)" })));
    out
}

// ------------------------------------------------------------- conformal

fn comparisons(name: &str, cs: &[Comparison]) -> Check {
    let bad: Vec<&Comparison> = cs.iter().filter(|c| !c.ok).collect();
    Check::exact(name, bad.is_empty(), json!({ "compared": cs.len(), "mismatched": bad }))
}

pub fn conformal_suite() -> Vec<Check> {
    let mut out = Vec::new();
    match conformal::full_transport_check() {
        Ok(r) => {
            out.push(comparisons("conformal.derivation", &r.derivation));
            out.push(Check::exact("conformal.f_birational", r.f_birational, json!({})));
            out.push(Check::exact("conformal.f_factorization", r.f_factorization, json!({})));
            let tables: Vec<Comparison> =
                r.pulled_back.iter().chain(&r.first_derivatives).chain(&r.second_derivatives).cloned().collect();
            out.push(comparisons("conformal.derivative_tables", &tables));
            out.push(comparisons("conformal.conformal_structure", &r.conformal));
            for c in &r.transported {
                let coef = c.name.trim_start_matches("bar ");
                let erratum = r.errata.iter().find(|e| e.coefficient == coef);
                out.push(Check::exact(
                    &format!("conformal.transport.{coef}"),
                    c.ok,
                    json!({ "difference": c.difference, "erratum": erratum }),
                ));
            }
        }
        Err(e) => out.push(Check::error("conformal.transport", e)),
    }
    match conformal::normalization_check() {
        Ok(r) => {
            out.push(comparisons("conformal.normalization.ours", &r.ours));
            out.push(comparisons("conformal.normalization.sato", &r.sato));
            let needed = ["period system", "Sato system", "transported period system"];
            let ok = r.integrable.iter().filter(|(n, _)| needed.contains(&n.as_str())).all(|(_, i)| *i);
            let map: serde_json::Map<String, Value> = r.integrable.iter().map(|(n, i)| (n.clone(), json!(i))).collect();
            out.push(Check::exact("conformal.integrability", ok, Value::Object(map)));
        }
        Err(e) => out.push(Check::error("conformal.normalization", e)),
    }
    out.push(Check::exact("conformal.klein_relation", conformal::klein::klein_relation_check(), json!({ "degree": 30 })));
    out.push(Check::exact(
        "conformal.klein_branch",
        conformal::klein::branch_is_d_squared(&conformal::klein::klein_invariants()),
        json!({ "identity": "A^15 K(B/A^3, C/A^5) = -144 D^2" }),
    ));
    out.push(match conformal::klein::discriminant_image() {
        Ok(d) => Check::exact("conformal.discriminant_image", true, json!({ "reported": d })),
        Err(e) => Check::error("conformal.discriminant_image", e),
    });
    out
}

// ------------------------------------------------------------- monodromy

/// Thresholds for the numerical evidence.
pub const TRIVIAL_LOOP_TOL: f64 = 1e-8;
pub const DET_TOL: f64 = 1e-8;
pub const CHAR_POLY_TOL: f64 = 1e-6;
pub const FORM_TOL: f64 = 1e-6;
/// Above this integration tolerance the evidence is flagged as weak.
pub const LOW_CONFIDENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SuiteError {
    #[error("no loops")]
    NoLoops,
    #[error(transparent)]
    Monodromy(#[from] monodromy::MonodromyError),
}

pub struct MonodromyOutcome {
    pub checks: Vec<Check>,
    pub flags: Vec<String>,
}

pub fn monodromy_suite(loops: &[LoopSpec], tol: f64, radius: usize) -> Result<MonodromyOutcome, SuiteError> {
    if loops.is_empty() {
        return Err(SuiteError::NoLoops);
    }
    let conn = NumericConnection::derived().map_err(monodromy::MonodromyError::from)?;
    let mut checks = Vec::new();
    let mut flags = Vec::new();
    if tol > LOW_CONFIDENCE_TOL {
        flags.push(format!("low-confidence evidence: tol {tol:e} is above {LOW_CONFIDENCE_TOL:e}"));
    }
    let base = monodromy::loops::c(loops[0].base[0]);
    let base = [base, monodromy::loops::c(loops[0].base[1])];
    checks.push(match monodromy::continue_along(&conn, &monodromy::trivial_loop(base), tol) {
        Ok(m) => {
            let r = (m.value - CMatrix::identity()).norm();
            Check::numeric("monodromy.trivial_loop", r < TRIVIAL_LOOP_TOL, json!({ "residual": r, "tolerance": TRIVIAL_LOOP_TOL }))
        }
        Err(e) => Check::error("monodromy.trivial_loop", e),
    });

    use rayon::prelude::*;
    let results: Vec<_> = loops.par_iter().map(|l| monodromy::continue_along(&conn, l, tol)).collect();
    let mut mats = Vec::new();
    let mut invs = Vec::new();
    for (l, r) in loops.iter().zip(results) {
        let name = format!("monodromy.loop.{}", l.name);
        match r {
            Ok(m) => {
                let inv = monodromy::monodromy_invariants(&m);
                let ok = inv.det_abs_error < DET_TOL && inv.char_poly_residual < CHAR_POLY_TOL;
                checks.push(Check::numeric(
                    &name,
                    ok,
                    json!({
                        "target": l.target,
                        "char_poly": inv.char_poly,
                        "char_poly_residual": inv.char_poly_residual,
                        "char_poly_tolerance": CHAR_POLY_TOL,
                        "det_abs_error": inv.det_abs_error,
                        "det_tolerance": DET_TOL,
                        "fundamental_matrix": m,
                    }),
                ));
                mats.push(m.value);
                invs.push(inv);
            }
            Err(e) => checks.push(Check::error(&name, e)),
        }
    }
    if !mats.is_empty() {
        let f = monodromy::invariant_form(&mats, FORM_TOL);
        // A subset of loops can leave the form underdetermined; the signature
        // only means something once it is unique.
        let unique = f.symmetric.dimension == 1;
        let ok = f.symmetric.dimension >= 1
            && f.symmetric.residual < FORM_TOL
            && (!unique || f.symmetric_signature == Some((2, 2)));
        checks.push(Check::numeric(
            "monodromy.invariant_form",
            ok,
            json!({
                "dimension": f.symmetric.dimension,
                "unique": unique,
                "residual": f.symmetric.residual,
                "tolerance": FORM_TOL,
                "signature": f.symmetric_signature,
                "hermitian_signature": f.hermitian_signature,
                "reality_residual": f.reality_residual,
            }),
        ));
        if radius > 0 {
            let gens: Vec<_> = lattice::generators().into_iter().map(|(_, g)| g).collect();
            let ids = monodromy::invariants::identify(&invs, &gens, radius);
            let ok = ids.iter().all(|i| i.char_poly_matches > 0);
            checks.push(Check::numeric(
                "monodromy.identification",
                ok,
                json!({ "radius": radius, "per_loop": ids, "note": "characteristic polynomials only; completeness of generation is not checked" }),
            ));
        }
    }
    Ok(MonodromyOutcome { checks, flags })
}

/// The full exact suite, modules run in parallel, checks in a fixed order.
pub fn exact_suite(series_order: u32, lattice_data: &Result<LatticeData, LatticeError>) -> Vec<Check> {
    use rayon::prelude::*;
    let jobs: Vec<Box<dyn Fn() -> Vec<Check> + Send + Sync + '_>> = vec![
        Box::new(move || series_suite(series_order)),
        Box::new(operator_suite),
        Box::new(pfaffian_suite),
        Box::new(fibration_suite),
        Box::new(|| lattice_suite(lattice_data)),
        Box::new(conformal_suite),
    ];
    jobs.par_iter().map(|j| j()).collect::<Vec<_>>().into_iter().flatten().collect()
}
