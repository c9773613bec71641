use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use k3period::algebra::Rat;
use k3period::monodromy::{default_base_point, loop_library, LoopFile};
use k3period::verify::{self, Check, DataFile, Status, VerificationReport};

/// Overrides `data_dir` from the configuration.
const DATA_DIR_ENV: &str = "K3PERIOD_DATA_DIR";

#[derive(Parser)]
#[command(name = "k3period", version, about = "Verification suites for the periods of a two-parameter K3 family")]
struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report to this path, or to stdout with `-`.
    #[arg(long, global = true)]
    json: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every exact check: series, operators, Pfaffian system, fibration, lattice, transport.
    VerifyAll,
    /// Period coefficients and the operators that annihilate them.
    Series {
        #[arg(long)]
        order: Option<u32>,
    },
    /// Singular fibres at a rational parameter point.
    Fibers {
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
    },
    /// Lattice data checks: determinant, congruence, transcendental form, generators.
    Lattice,
    /// Connection matrices, integrability and the singular locus.
    Pfaffian,
    /// Numerical monodromy along a loop file, or the default library.
    Monodromy {
        /// JSON loop file; defaults to the built-in library.
        #[arg(long)]
        loops: Option<PathBuf>,
        /// Integration tolerance; above 1e-6 the report is flagged low-confidence.
        #[arg(long)]
        tol: Option<f64>,
        /// Word length of the group ball used for identification; 0 skips it.
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Transport to the uniformizing coordinates, normalization and Klein checks.
    Conformal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct Config {
    series_order: u32,
    data_dir: Option<PathBuf>,
    timestamp: Option<String>,
    fibers: FibersConfig,
    monodromy: MonodromyConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FibersConfig {
    lambda: String,
    mu: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct MonodromyConfig {
    loops: Option<PathBuf>,
    tol: f64,
    radius: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            series_order: 12,
            data_dir: None,
            timestamp: None,
            fibers: FibersConfig::default(),
            monodromy: MonodromyConfig::default(),
        }
    }
}

impl Default for FibersConfig {
    fn default() -> Self {
        FibersConfig { lambda: "1".into(), mu: "1".into() }
    }
}

impl Default for MonodromyConfig {
    fn default() -> Self {
        MonodromyConfig { loops: None, tol: 1e-10, radius: 3 }
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<Config> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("malformed config {}", p.display()))?
        }
        None => Config::default(),
    };
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        cfg.data_dir = Some(dir.into());
    }
    Ok(cfg)
}

fn parse_rat(s: &str) -> Result<Rat> {
    s.trim().parse::<Rat>().map_err(|e| anyhow::anyhow!("not a rational number: {s:?} ({e})"))
}

fn report(command: &str, cfg: &Config, inputs: serde_json::Value, checks: Vec<Check>) -> VerificationReport {
    let mut r = VerificationReport::new(command, cfg.timestamp.clone(), inputs);
    r.checks = checks;
    r
}

fn lattice_report(command: &str, cfg: &Config, inputs: serde_json::Value, extra: impl FnOnce(&Result<k3period::lattice::LatticeData, k3period::lattice::LatticeError>) -> Vec<Check>) -> VerificationReport {
    let data = verify::load_lattice(cfg.data_dir.as_deref());
    let mut r = report(command, cfg, inputs, extra(&data));
    r.data_files = match &data {
        Ok(d) => verify::lattice_data_files(d),
        Err(_) => Vec::<DataFile>::new(),
    };
    r
}

fn run(cli: &Cli) -> Result<VerificationReport> {
    let cfg = load_config(cli.config.as_ref())?;
    Ok(match &cli.command {
        Command::VerifyAll => {
            let inputs = json!({ "config": cfg });
            lattice_report("verify-all", &cfg, inputs, |d| verify::exact_suite(cfg.series_order, d))
        }
        Command::Series { order } => {
            let order = order.unwrap_or(cfg.series_order);
            let mut checks = verify::series_suite(order);
            let table: Vec<_> = verify::coefficient_table(order).into_iter().map(|(n, m, c)| json!([n, m, c])).collect();
            checks.push(Check { name: "series.table".into(), status: Status::Pass, details: json!({ "order": order, "c": table }) });
            report("series", &cfg, json!({ "order": order }), checks)
        }
        Command::Fibers { lambda, mu } => {
            let l = lambda.clone().unwrap_or(cfg.fibers.lambda.clone());
            let m = mu.clone().unwrap_or(cfg.fibers.mu.clone());
            let check = verify::fibers_check(&parse_rat(&l)?, &parse_rat(&m)?);
            report("fibers", &cfg, json!({ "lambda": l, "mu": m }), vec![check])
        }
        Command::Lattice => lattice_report("lattice", &cfg, json!({ "data_dir": cfg.data_dir }), verify::lattice_suite),
        Command::Pfaffian => report("pfaffian", &cfg, json!({}), verify::pfaffian_suite()),
        Command::Conformal => report("conformal", &cfg, json!({}), verify::conformal_suite()),
        Command::Monodromy { loops, tol, radius } => {
            let path = loops.clone().or(cfg.monodromy.loops.clone());
            let (specs, file_tol) = match &path {
                Some(p) => {
                    let text = std::fs::read_to_string(p).with_context(|| format!("cannot read loop file {}", p.display()))?;
                    let f: LoopFile = serde_json::from_str(&text).with_context(|| format!("malformed loop file {}", p.display()))?;
                    (f.loops, f.tol)
                }
                None => (loop_library(default_base_point())?, None),
            };
            let tol = tol.or(file_tol).unwrap_or(cfg.monodromy.tol);
            let radius = radius.unwrap_or(cfg.monodromy.radius);
            let out = verify::monodromy_suite(&specs, tol, radius)?;
            let inputs = json!({ "loops": path, "loop_count": specs.len(), "tol": tol, "radius": radius });
            let mut r = report("monodromy", &cfg, inputs, out.checks);
            r.flags = out.flags;
            r
        }
    })
}

fn summary(r: &VerificationReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let tag = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Evidence => "evidence",
        };
        s.push_str(&format!("{tag:>8}  {}\n", c.name));
        if c.name == "series.table" {
            for row in c.details["c"].as_array().into_iter().flatten() {
                s.push_str(&format!("          c({}, {}) = {}\n", row[0], row[1], row[2].as_str().unwrap_or("?")));
            }
        }
    }
    for f in &r.flags {
        s.push_str(&format!("    flag  {f}\n"));
    }
    s.push_str(&format!(
        "{}: {} pass, {} evidence, {} fail\n",
        r.command,
        r.count(Status::Pass),
        r.count(Status::Evidence),
        r.count(Status::Fail)
    ));
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match cli.json.as_deref() {
        Some("-") => print!("{}", r.to_json()),
        Some(path) => {
            if let Err(e) = std::fs::write(path, r.to_json()) {
                eprintln!("error: cannot write {path}: {e}");
                return ExitCode::from(2);
            }
            eprint!("{}", summary(&r));
        }
        None => print!("{}", summary(&r)),
    }
    for c in r.checks.iter().filter(|c| c.failed()) {
        eprintln!("failed: {} {}", c.name, c.details);
    }
    if r.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
