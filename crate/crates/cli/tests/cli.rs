use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_k3period"));
    c.env_remove("K3PERIOD_DATA_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn status<'a>(report: &'a Value, name: &str) -> &'a str {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["status"]
        .as_str()
        .unwrap()
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data")
}

fn corrupted_copy() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for f in ["m1.txt", "u.txt", "SHA256SUMS"] {
        std::fs::copy(data_dir().join(f), dir.path().join(f)).unwrap();
    }
    let m1 = dir.path().join("m1.txt");
    let text = std::fs::read_to_string(&m1).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let before = lines[2].clone();
    lines[2] = lines[2].replacen("-2", "-3", 1);
    assert_ne!(before, lines[2]);
    std::fs::write(&m1, lines.join("\n") + "\n").unwrap();
    dir
}

#[test]
fn verify_all_reports_only_the_p_misprint() {
    let out = run(&["verify-all", "--json", "-"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "verify-all");
    let checks = r["checks"].as_array().unwrap();
    let failed: Vec<&str> =
        checks.iter().filter(|c| c["status"] == "fail").map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(failed, ["conformal.transport.P"]);
    assert!(checks.iter().filter(|c| c["status"] == "pass").count() >= 40);
    assert_eq!(r["data_files"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_byte_stable() {
    let a = run(&["lattice", "--json", "-"]);
    let b = run(&["lattice", "--json", "-"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_file_output_and_timestamp_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{ "timestamp": "2020-01-01T00:00:00Z" }"#).unwrap();
    let report = dir.path().join("r.json");
    let out = bin()
        .args(["--config", cfg.to_str().unwrap(), "--json", report.to_str().unwrap(), "fibers"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["timestamp"], "2020-01-01T00:00:00Z");
}

#[test]
fn corrupted_data_via_env_names_the_file() {
    let dir = corrupted_copy();
    let out = bin().env("K3PERIOD_DATA_DIR", dir.path()).args(["lattice"]).output().unwrap();
    assert_ne!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("m1.txt") && err.contains("checksum"), "{err}");
}

#[test]
fn corrupted_data_via_config_names_the_file() {
    let dir = corrupted_copy();
    let cfg = dir.path().join("cfg.json");
    let body = serde_json::json!({ "data_dir": dir.path() });
    std::fs::write(&cfg, body.to_string()).unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "verify-all", "--json", "-"]);
    assert_ne!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(status(&r, "lattice.data"), "fail");
    assert!(r.to_string().contains("m1.txt"));
}

#[test]
fn clean_data_dir_passes() {
    let out = bin().env("K3PERIOD_DATA_DIR", data_dir()).args(["lattice", "--json", "-"]).output().unwrap();
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(status(&r, "lattice.det_m1"), "pass");
    assert!(r.to_string().contains("-5"));
}

#[test]
fn series_table_starts_with_known_coefficients() {
    let out = run(&["series", "--order", "8"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("c(0, 1) = -60"), "{text}");
    assert!(text.contains("c(1, 1) = -840"), "{text}");
}

#[test]
fn fibers_at_a_generic_point() {
    let out = run(&["fibers", "--lambda", "1", "--mu", "1", "--json", "-"]);
    assert!(out.status.success());
    assert_eq!(status(&json(&out), "fibration.fibres"), "pass");
}

#[test]
fn fibers_on_the_singular_locus_fail() {
    let out = run(&["fibers", "--lambda", "0", "--mu", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_rational_is_an_input_error() {
    let out = run(&["fibers", "--lambda", "one"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_config_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{ "series_ordr": 3 }"#).unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "series"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed config"));
}

#[test]
fn empty_loop_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let loops = dir.path().join("loops.json");
    std::fs::write(&loops, r#"{ "loops": [] }"#).unwrap();
    let out = run(&["monodromy", "--loops", loops.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no loops"));
}

#[test]
fn loop_file_round_trip() {
    use k3period::monodromy::{default_base_point, loop_library, LoopFile};
    let file = LoopFile { tol: None, loops: loop_library(default_base_point()).unwrap()[1..2].to_vec() };
    let dir = tempfile::tempdir().unwrap();
    let loops = dir.path().join("loops.json");
    std::fs::write(&loops, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    let out = run(&["monodromy", "--loops", loops.to_str().unwrap(), "--radius", "0", "--json", "-"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let name = format!("monodromy.loop.{}", file.loops[0].name);
    assert_eq!(status(&r, &name), "evidence");
    assert_eq!(status(&r, "monodromy.trivial_loop"), "evidence");
    assert_eq!(status(&r, "monodromy.invariant_form"), "evidence");
    let form = &r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "monodromy.invariant_form").unwrap();
    assert_eq!(form["details"]["unique"], false);
}

#[test]
fn loose_tolerance_is_flagged() {
    let out = run(&["monodromy", "--tol", "1e-2", "--radius", "0", "--json", "-"]);
    let r = json(&out);
    let flags = r["flags"].as_array().unwrap();
    assert!(!flags.is_empty());
    assert!(flags[0].as_str().unwrap().contains("confidence"));
}
