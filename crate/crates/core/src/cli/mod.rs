//! The `nehari` command line: `solve`, `check`, `fiber` and `oracle` subcommands driven by a
//! configuration file.
//!
//! Exit codes: 0 success, 1 stalled run or failed sampled check, 2 hypothesis failure before a
//! solve, 64 malformed configuration or usage, 73 output write failure.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{DomainConfig, OracleConfig, RawConfig, RunConfig};

use crate::error::{Error, Result};
use crate::fiber::{project_with_scan, ScanTrace};
use crate::functionals::{Functional, Operator};
use crate::grid::write_field_csv;
use crate::solver::{multi_start, random_init};
use crate::verify::{check_abstract, check_anisotropic, check_kirchhoff, check_quasilinear, radial_shooting, CheckReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_CONFIG: i32 = 64;
pub const EXIT_WRITE: i32 = 73;

#[derive(Debug, Parser)]
#[command(name = "nehari", version, about = "Nehari manifold ground states and hypothesis audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Audit the hypotheses, then compute a ground state by multi-start minimization.
    Solve(RunArgs),
    /// Audit the family and abstract hypotheses and print a table.
    Check(RunArgs),
    /// Project one seeded direction onto the Nehari set and dump the fiber scan.
    Fiber(RunArgs),
    /// Solve the radial shooting problem for the configured pure power.
    Oracle(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Solve even when a hypothesis check fails.
    #[arg(long)]
    pub force: bool,
    /// Overrides `solver.seed` and `fiber.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides `output.dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    let (args, command): (&RunArgs, fn(&RunConfig, &RunArgs) -> i32) = match &cli.command {
        Command::Solve(a) => (a, run_solve),
        Command::Check(a) => (a, run_check),
        Command::Fiber(a) => (a, run_fiber),
        Command::Oracle(a) => (a, run_oracle),
    };
    match load(args) {
        Ok(cfg) => command(&cfg, args),
        Err(e) => report_error(&e),
    }
}

/// Reads the configuration file and applies the command-line overrides.
pub fn load(args: &RunArgs) -> Result<RunConfig> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", args.config.display())))?;
    let mut raw = RawConfig::parse(&text)?;
    if let Some(seed) = args.seed {
        raw.set("solver.seed", seed.to_string());
        raw.set("fiber.seed", seed.to_string());
    }
    if let Some(out) = &args.out {
        raw.set("output.dir", out.display().to_string());
    }
    RunConfig::from_raw(&raw)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Config { .. } | Error::Parameter(_) => EXIT_CONFIG,
        Error::Io(_) => EXIT_WRITE,
        Error::HypothesisViolation { .. } => EXIT_HYPOTHESIS,
        _ => EXIT_FAIL,
    }
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    if let Error::HypothesisViolation { trace, .. } = e {
        eprintln!("{}", trace_table(trace, 12));
    }
    exit_code(e)
}

fn trace_table(trace: &ScanTrace, rows: usize) -> String {
    let stride = (trace.t.len() / rows.max(1)).max(1);
    let mut out = format!("{:>14} {:>14} {:>14}\n", "t", "gamma", "slope");
    for k in (0..trace.t.len()).step_by(stride) {
        let _ = writeln!(out, "{:>14.6e} {:>14.6e} {:>14.6e}", trace.t[k], trace.gamma[k], trace.slope[k]);
    }
    out
}

/// Family conditions and the sampled abstract conditions.
pub fn audit(cfg: &RunConfig, functional: &Functional) -> Result<CheckReport> {
    let dim = cfg.domain.dim;
    let f = &cfg.nonlinearity;
    let mut report = match &cfg.operator {
        Operator::Quasilinear(op) => check_quasilinear(op, cfg.alpha, f, dim),
        Operator::Kirchhoff(op) => check_kirchhoff(op, cfg.alpha, f),
        Operator::Anisotropic(op) => check_anisotropic(op.exponents(), cfg.alpha, f, dim),
    };
    report.extend(check_abstract(functional, cfg.check_directions, &cfg.scan, cfg.check_seed)?);
    Ok(report)
}

fn output_path(cfg: &RunConfig, suffix: &str) -> Result<PathBuf> {
    fs::create_dir_all(&cfg.out_dir)?;
    Ok(cfg.out_dir.join(format!("{}_{suffix}", cfg.prefix)))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn trace_csv(trace: &ScanTrace) -> String {
    let mut out = String::from("t,gamma,slope\n");
    for k in 0..trace.t.len() {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", trace.t[k], trace.gamma[k], trace.slope[k]);
    }
    out
}

/// Writes every `(suffix, text)` pair, mapping failures to exit 73.
fn write_all(cfg: &RunConfig, files: &[(&str, String)]) -> std::result::Result<Vec<PathBuf>, i32> {
    let mut written = Vec::new();
    for (suffix, text) in files {
        let path = output_path(cfg, suffix).and_then(|p| write_text(&p, text).map(|_| p));
        match path {
            Ok(p) => written.push(p),
            Err(e) => {
                eprintln!("error: cannot write {}_{suffix} in {}: {e}", cfg.prefix, cfg.out_dir.display());
                return Err(EXIT_WRITE);
            }
        }
    }
    Ok(written)
}

pub fn run_solve(cfg: &RunConfig, args: &RunArgs) -> i32 {
    let functional = match cfg.functional() {
        Ok(f) => f,
        Err(e) => return report_error(&e),
    };
    let pre = match audit(cfg, &functional) {
        Ok(r) => r,
        Err(e) => return report_error(&e),
    };
    if pre.has_failure() {
        let mut failed = CheckReport::new();
        for e in pre.failures() {
            failed.record(&e.id, e.status, e.witness.clone(), e.notes.clone());
        }
        eprint!("{}", failed.to_table());
        if !args.force {
            eprintln!("error: hypothesis check failed; rerun with --force to solve anyway");
            return EXIT_HYPOTHESIS;
        }
        eprintln!("warning: solving despite failed hypotheses (--force)");
    }
    let mut report = match multi_start(&functional, cfg.starts, cfg.solver.seed, &cfg.solver) {
        Ok(r) => r,
        Err(e) => return report_error(&e),
    };
    let mut summary = pre;
    summary.extend(std::mem::take(&mut report.hypothesis_summary));
    report.hypothesis_summary = summary;
    let mut state = Vec::new();
    if let Err(e) = write_field_csv(&report.ground_state, &mut state) {
        return report_error(&e);
    }
    let files = [
        ("state.csv", String::from_utf8(state).expect("csv is utf-8")),
        ("report.json", json(&report)),
    ];
    if let Err(code) = write_all(cfg, &files) {
        return code;
    }
    println!(
        "c = {:.12e}  residual = {:.3e}  iterations = {}  spread = {:.3e}  seed = {}",
        report.c_value,
        report.final_residual,
        report.iterations,
        report.spread.unwrap_or(0.0),
        report.seed
    );
    if report.converged {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub fn run_check(cfg: &RunConfig, _args: &RunArgs) -> i32 {
    let report = match cfg.functional().and_then(|f| audit(cfg, &f)) {
        Ok(r) => r,
        Err(e) => return report_error(&e),
    };
    print!("{}", report.to_table());
    if let Err(code) = write_all(cfg, &[("check.json", json(&report))]) {
        return code;
    }
    if report.has_failure() {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}

pub fn run_fiber(cfg: &RunConfig, _args: &RunArgs) -> i32 {
    let functional = match cfg.functional() {
        Ok(f) => f,
        Err(e) => return report_error(&e),
    };
    let direction = random_init(functional.grid(), cfg.fiber_seed, cfg.solver.modes, cfg.solver.nonnegative_start);
    match project_with_scan(&functional, &direction, cfg.solver.projection_tolerance, &cfg.scan) {
        Ok((t_u, diag)) => {
            let files = [("fiber.csv", trace_csv(&diag.scan)), ("fiber.json", json(&diag))];
            if let Err(code) = write_all(cfg, &files) {
                return code;
            }
            println!(
                "t_u = {t_u:.12e}  slope = {:.3e}  sign changes = {}  max on scan = {}",
                diag.slope_at_root, diag.sign_changes_observed, diag.global_max_on_scan
            );
            if diag.sign_changes_observed == 1 && diag.global_max_on_scan {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(Error::HypothesisViolation { message, trace }) => {
            eprintln!("error: hypothesis violation: {message}");
            if let Err(code) = write_all(cfg, &[("fiber.csv", trace_csv(&trace))]) {
                return code;
            }
            EXIT_FAIL
        }
        Err(e) => report_error(&e),
    }
}

pub fn run_oracle(cfg: &RunConfig, _args: &RunArgs) -> i32 {
    let o = &cfg.oracle;
    let profile = match radial_shooting(&cfg.nonlinearity, o.dim, o.radius, o.tol) {
        Ok(p) => p,
        Err(e) => return report_error(&e),
    };
    let mut csv = String::from("r,u\n");
    for (r, u) in profile.r.iter().zip(&profile.u) {
        let _ = writeln!(csv, "{r:.16e},{u:.16e}");
    }
    let meta = serde_json::json!({
        "dim": profile.dim,
        "radius": profile.radius,
        "height": profile.height,
        "energy": profile.energy,
    });
    if let Err(code) = write_all(cfg, &[("radial.csv", csv), ("oracle.json", json(&meta))]) {
        return code;
    }
    println!("energy = {:.12e}  height = {:.12e}", profile.energy, profile.height);
    EXIT_OK
}
