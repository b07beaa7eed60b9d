use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use trisolve::bisectors::{self, BisectorsSpec, LimitCheck, LimitSet};
use trisolve::heights::HeightsFamilySpec;
use trisolve::median_height::MedianHeightSpec;
use trisolve::report;
use trisolve::{
    corpus, expected_count, solve, verify_report, Constraint, ElementKind, Error, ExpectedCount, Family,
    GridSpec, SolveConfig, SolveProblem,
};

#[derive(Parser)]
#[command(name = "trisolve", version, about = "Enumerate triangles from three prescribed elements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for all triangles with two fixed elements and a target third.
    Solve(SolveArgs),
    /// Write a one-parameter family as CSV.
    Sweep(SweepArgs),
    /// Print the closed-form limits of the two-bisector family.
    Limits(LimitsArgs),
    /// Cross-check the solver on a seeded random corpus.
    Check(CheckArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    la: Option<f64>,
    #[arg(long)]
    lb: Option<f64>,
    #[arg(long)]
    lc: Option<f64>,
    #[arg(long)]
    ha: Option<f64>,
    #[arg(long)]
    hb: Option<f64>,
    #[arg(long)]
    hc: Option<f64>,
    #[arg(long)]
    ma: Option<f64>,
    #[arg(long)]
    mb: Option<f64>,
    #[arg(long)]
    mc: Option<f64>,
    /// Fixed element as kind=value; repeatable.
    #[arg(long, value_name = "KIND=VALUE")]
    fixed: Vec<String>,
    /// Target element as kind=value.
    #[arg(long, value_name = "KIND=VALUE")]
    third: String,
    /// Read angle values in degrees.
    #[arg(long)]
    deg: bool,
    #[arg(long)]
    tol_rel: Option<f64>,
    #[arg(long)]
    tol_abs: Option<f64>,
    /// Uniform samples per family scan.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    h1: Option<f64>,
    #[arg(long)]
    h2: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    l1: Option<f64>,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LimitsArgs {
    #[arg(long)]
    l1: f64,
    #[arg(long)]
    l2: f64,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    pattern: Family,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Oracle grid points per axis.
    #[arg(long, default_value_t = 300)]
    grid: usize,
}

enum Failure {
    Input(String),
    Numerical(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } | Error::NonFiniteEvaluation { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Writes to standard output; a closed pipe ends output quietly.
fn emit(text: &str) -> CmdResult {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Input(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn parse_constraint(s: &str, deg: bool) -> Result<Constraint, Failure> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Failure::Input(format!("expected KIND=VALUE, got `{s}`")))?;
    let kind: ElementKind = k.parse()?;
    let mut value: f64 = v
        .trim()
        .parse()
        .map_err(|_| Failure::Input(format!("`{v}` is not a number")))?;
    if deg && kind.is_angle() {
        value = value.to_radians();
    }
    Ok(Constraint::new(kind, value))
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    use ElementKind::*;
    let flags = [
        (BisectorA, a.la),
        (BisectorB, a.lb),
        (BisectorC, a.lc),
        (HeightA, a.ha),
        (HeightB, a.hb),
        (HeightC, a.hc),
        (MedianA, a.ma),
        (MedianB, a.mb),
        (MedianC, a.mc),
    ];
    let mut fixed: Vec<Constraint> = flags
        .iter()
        .filter_map(|&(k, v)| v.map(|v| Constraint::new(k, v)))
        .collect();
    for f in &a.fixed {
        fixed.push(parse_constraint(f, a.deg)?);
    }
    let [c1, c2]: [Constraint; 2] = fixed
        .try_into()
        .map_err(|v: Vec<Constraint>| Failure::Input(format!("need exactly two fixed elements, got {}", v.len())))?;
    let problem = SolveProblem::new([c1, c2], parse_constraint(&a.third, a.deg)?);
    let mut cfg = SolveConfig::default();
    if let Some(r) = a.tol_rel {
        cfg.tolerance.rel = r;
    }
    if let Some(t) = a.tol_abs {
        cfg.tolerance.abs = t;
    }
    if let Some(n) = a.samples {
        cfg.scan.samples = n;
    }
    let r = solve(&problem, &cfg)?;
    emit(&report::to_json(&r)?)
}

fn need(v: Option<f64>, name: &str, family: Family) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Input(format!("--family {family} needs --{name}")))
}

fn cmd_sweep(a: SweepArgs) -> CmdResult {
    let csv = match a.family {
        Family::Heights => {
            let spec = HeightsFamilySpec::new(need(a.h1, "h1", a.family)?, need(a.h2, "h2", a.family)?)?;
            report::heights_sweep_csv(&spec, a.samples)?
        }
        Family::MedianHeight => {
            let spec = MedianHeightSpec::new(need(a.h, "h", a.family)?, need(a.m, "m", a.family)?)?;
            report::median_height_sweep_csv(&spec, a.samples)?
        }
        Family::Bisectors => {
            let spec = BisectorsSpec::new(need(a.l1, "l1", a.family)?, need(a.l2, "l2", a.family)?)?;
            report::bisectors_sweep_csv(&spec, a.samples, &SolveConfig::default().scan)?
        }
    };
    match a.out {
        Some(path) => fs::write(&path, csv).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => emit(&csv),
    }
}

#[derive(Serialize)]
struct LimitsOutput {
    limits: LimitSet,
    checks: Vec<LimitCheck>,
}

fn cmd_limits(a: LimitsArgs) -> CmdResult {
    if a.l2 > a.l1 {
        return Err(Failure::Input(format!(
            "l2 = {} exceeds l1 = {}; swap them (--l1 {} --l2 {})",
            a.l2, a.l1, a.l2, a.l1
        )));
    }
    let limits = bisectors::limits(&BisectorsSpec::new(a.l1, a.l2)?);
    let out = LimitsOutput {
        checks: limits.self_check(),
        limits,
    };
    emit(&report::to_json(&out)?)
}

fn cmd_check(a: CheckArgs) -> CmdResult {
    let grid = GridSpec::square(a.grid);
    grid.validate()?;
    let cfg = SolveConfig::default();
    let mut histogram = BTreeMap::new();
    let mut failed = 0;
    let mut out = String::new();
    for (i, p) in corpus::problems(a.pattern, a.trials, a.seed)?.iter().enumerate() {
        let mut problems = Vec::new();
        match solve(p, &cfg) {
            Ok(r) => {
                *histogram.entry(r.count).or_insert(0usize) += 1;
                if let ExpectedCount::Count(n) = expected_count(p, &cfg)?.count {
                    if n != r.count {
                        problems.push(format!("table expects {n}, solver found {}", r.count));
                    }
                }
                let v = verify_report(&r, &cfg.tolerance, &grid);
                if !v.pass {
                    problems.extend(v.diagnostics);
                }
            }
            Err(e) => problems.push(e.to_string()),
        }
        if !problems.is_empty() {
            failed += 1;
            let _ = writeln!(out, "trial {i} FAIL {}", problem_label(p));
            for d in problems {
                let _ = writeln!(out, "  {d}");
            }
        }
    }
    let _ = writeln!(
        out,
        "pattern {} trials {} seed {} failed {failed}",
        a.pattern, a.trials, a.seed
    );
    for (count, n) in &histogram {
        let _ = writeln!(out, "count {count}: {n}");
    }
    emit(&out)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn problem_label(p: &SolveProblem) -> String {
    p.constraints()
        .iter()
        .map(|c| format!("{}={}", c.kind, report::fmt_f64(c.value)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Limits(a) => cmd_limits(a),
        Command::Check(a) => cmd_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
