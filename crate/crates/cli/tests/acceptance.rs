//! Acceptance criteria 1-9, one line each. Exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use k3period::monodromy::{default_base_point, loop_library};
use k3period::verify::{self, Check, Status};

struct Outcome {
    ok: bool,
    note: String,
}

fn from_checks(checks: &[Check], names: &[&str]) -> Outcome {
    let mut missing = Vec::new();
    let mut failed = Vec::new();
    for n in names {
        match checks.iter().find(|c| c.name == *n) {
            None => missing.push(n.to_string()),
            Some(c) if c.status == Status::Fail => failed.push(format!("{} {}", c.name, c.details)),
            Some(_) => {}
        }
    }
    let ok = missing.is_empty() && failed.is_empty();
    let note = if ok {
        format!("{} checks", names.len())
    } else {
        format!("missing {missing:?}; failed: {}", failed.join("; "))
    };
    Outcome { ok, note }
}

fn c1() -> Outcome {
    let checks = verify::series_suite(12);
    from_checks(&checks, &["series.annihilation.L1", "series.annihilation.L2", "series.annihilation.L3", "series.gkz_reduction"])
}

fn c2() -> Outcome {
    let checks = verify::operator_suite();
    let mut o = from_checks(&checks, &["operators.second_operator"]);
    let d = &checks[0].details;
    o.note = format!(
        "found {} = {} L3 + ({}) L1; kernel {} of which {} are L1 multiples",
        d["operator"], d["l3_scale"], d["l1_multiplier"], d["kernel_dim"], d["l1_multiples_dim"]
    );
    o
}

fn c3() -> Outcome {
    let checks = verify::pfaffian_suite();
    let mut o = from_checks(&checks, &["pfaffian.series_oracle", "pfaffian.integrability", "pfaffian.printed_entries", "pfaffian.r4"]);
    if o.ok {
        let d = &checks.iter().find(|c| c.name == "pfaffian.printed_entries").expect("present").details;
        let mism: Vec<String> =
            d["mismatched_transcriptions"].as_array().into_iter().flatten().map(|m| m["entry"].to_string()).collect();
        o.note = format!("a24 flagged, reported transcription mismatches {mism:?}, repaired {}", d["repaired_parentheses"]);
    }
    o
}

fn c4() -> Outcome {
    from_checks(&verify::singular_locus_suite(), &["pfaffian.singular_locus", "pfaffian.t4_parametrization"])
}

fn c5() -> Outcome {
    from_checks(
        &verify::fibration_suite(),
        &["fibration.substitution_chain", "fibration.discriminants", "fibration.fibres", "fibration.section"],
    )
}

fn c6() -> Outcome {
    let data = verify::load_lattice(None);
    from_checks(
        &verify::lattice_suite(&data),
        &["lattice.det_m1", "lattice.congruence", "lattice.transcendental_form", "lattice.generators", "lattice.w_block"],
    )
}

fn c7() -> Outcome {
    let lib = match loop_library(default_base_point()) {
        Ok(l) => l,
        Err(e) => return Outcome { ok: false, note: e.to_string() },
    };
    if lib.len() != 4 {
        return Outcome { ok: false, note: format!("library has {} loops", lib.len()) };
    }
    match verify::monodromy_suite(&lib, 1e-10, 0) {
        Ok(out) => {
            let mut names = vec!["monodromy.trivial_loop".to_string(), "monodromy.invariant_form".to_string()];
            names.extend(lib.iter().map(|l| format!("monodromy.loop.{}", l.name)));
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let mut o = from_checks(&out.checks, &refs);
            let form = out.checks.iter().find(|c| c.name == "monodromy.invariant_form");
            if o.ok && form.is_some_and(|c| c.details["unique"] != true) {
                o = Outcome { ok: false, note: "invariant form is not unique".into() };
            }
            if o.ok {
                let polys: Vec<String> = out
                    .checks
                    .iter()
                    .filter(|c| c.name.starts_with("monodromy.loop."))
                    .map(|c| c.details["char_poly"].to_string())
                    .collect();
                o.note = format!("char polys {}, form signature (2,2)", polys.join(" "));
            }
            o
        }
        Err(e) => Outcome { ok: false, note: e.to_string() },
    }
}

fn c8() -> Outcome {
    let checks = verify::conformal_suite();
    let names = [
        "conformal.conformal_structure",
        "conformal.transport.L",
        "conformal.transport.M",
        "conformal.transport.A",
        "conformal.transport.B",
        "conformal.transport.C",
        "conformal.transport.D",
        "conformal.transport.P",
        "conformal.transport.Q",
        "conformal.normalization.ours",
        "conformal.normalization.sato",
        "conformal.klein_relation",
        "conformal.f_birational",
        "conformal.f_factorization",
    ];
    from_checks(&checks, &names)
}

fn verify_all_bytes(exe: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(exe)
        .args(["verify-all", "--json", "-"])
        .env_remove("K3PERIOD_DATA_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    if out.stdout.is_empty() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(out.stdout)
}

fn c9() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_k3period");
    match (verify_all_bytes(exe), verify_all_bytes(exe)) {
        (Ok(a), Ok(b)) => Outcome {
            ok: a == b,
            note: format!("{} bytes{}", a.len(), if a == b { ", identical" } else { ", DIFFERENT" }),
        },
        (Err(e), _) | (_, Err(e)) => Outcome { ok: false, note: e },
    }
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 9] = [
        (1, "series and holonomy", Duration::from_secs(10), c1),
        (2, "second operator rediscovery", Duration::from_secs(60), c2),
        (3, "Pfaffian system", Duration::from_secs(120), c3),
        (4, "singular locus", Duration::from_secs(10), c4),
        (5, "fibration", Duration::from_secs(30), c5),
        (6, "lattice", Duration::from_secs(5), c6),
        (7, "monodromy evidence", Duration::from_secs(300), c7),
        (8, "coordinate transport", Duration::from_secs(120), c8),
        (9, "report stability", Duration::from_secs(600), c9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut all = true;
    for (n, title, budget, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|a| a == &n.to_string()) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        let dt = t.elapsed();
        let ok = o.ok && dt <= budget;
        all &= ok;
        let over = if dt > budget { " OVER BUDGET" } else { "" };
        println!(
            "criterion {n} {}: {title} ({:.1} s of {} s{over}) {}",
            if ok { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            budget.as_secs(),
            o.note
        );
    }
    if !all {
        std::process::exit(1);
    }
}
