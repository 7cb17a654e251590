//! Subcommands and their exit-code contract.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, every check passed |
//! | 1 | a check or conjectured floor was violated |
//! | 2 | invalid flags or unreadable input |
//! | 3 | degenerate configuration or infeasible start |

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use atiyah_core::atiyah::MAX_POINTS;
use atiyah_core::fixtures::Fixture;
use atiyah_core::geometry::{canonicalize_quad, Configuration, PlanarQuad, Point};
use atiyah_core::quad::{compare_routes, decomposed_at};
use atiyah_core::sampler::{
    minimize_d, run_verification, MinimizeSpec, Objective, SampleKind, SampleSpec, StartPoint,
    Tolerances, VerifyOptions,
};
use atiyah_core::{atiyah_determinant, Complex64, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::number::fmt_f64;
use crate::points_file;
use crate::report::{write_csv, write_json, ReportDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Violation = 1,
    Usage = 2,
    Degenerate = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            exit: Exit::Usage,
            message: message.into(),
        }
    }

    fn degenerate(message: impl Into<String>) -> Self {
        Self {
            exit: Exit::Degenerate,
            message: message.into(),
        }
    }

    fn io(context: &str, err: io::Error) -> Self {
        Self::usage(format!("{context}: {err}"))
    }
}

pub type CmdResult = Result<Exit, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "atiyah-lab",
    version,
    about = "Atiyah determinants, quadrilateral decompositions and conjecture sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Determinant of the configuration in a points file (`-` for stdin).
    Compute(ComputeArgs),
    /// Seeded Monte Carlo sweep over one sample kind.
    Verify(VerifyArgs),
    /// Nelder–Mead search for small objective values over convex quadrilaterals.
    Minimize(MinimizeArgs),
    /// Print a reference configuration as a points file.
    Fixture(FixtureArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: SampleKind,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Radius of the sampling disk or ball.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Relative tolerance for identities and motion invariance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, env = "ATIYAH_LAB_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for one points file per violation.
    #[arg(long)]
    pub repro_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    /// `D` (normalized determinant) or `at_ang` (angular part).
    #[arg(long, value_parser = parse_objective)]
    pub objective: Objective,
    /// `square`, `figure1`, `seed:N` or `file:PATH`.
    #[arg(long, default_value = "square")]
    pub start: String,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    /// Relative spread of simplex values at which the search stops.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Receives `trace.csv` and `best.pts`.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    pub name: String,
}

fn parse_kind(s: &str) -> Result<SampleKind, String> {
    SampleKind::from_str(s).map_err(|e| e.to_string())
}

pub fn parse_objective(s: &str) -> Result<Objective, String> {
    match s {
        "D" | "d" => Ok(Objective::NormalizedDeterminant),
        "at_ang" | "at-ang" => Ok(Objective::AngularPart),
        _ => Err(format!("unknown objective `{s}` (expected D or at_ang)")),
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> CmdResult {
    match cli.command {
        Command::Compute(args) => compute(&args, stdout),
        Command::Verify(args) => verify(&args, stdout),
        Command::Minimize(args) => minimize(&args, stdout),
        Command::Fixture(args) => fixture(&args, stdout),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        io::read_to_string(io::stdin()).map_err(|e| CliError::io("stdin", e))
    } else {
        fs::read_to_string(path).map_err(|e| CliError::io(&path.display().to_string(), e))
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("stdout", e))
}

fn line(buf: &mut String, key: &str, value: f64) {
    let _ = writeln!(buf, "{key} = {}", fmt_f64(value));
}

/// Four points sharing one height, reordered counterclockwise, or `None`
/// when they are not in strictly convex position.
fn as_convex_quad(points: &[[f64; 3]]) -> Option<PlanarQuad> {
    let [p0, p1, p2, p3] = points else {
        return None;
    };
    if [p1, p2, p3].iter().any(|p| p[0] != p0[0]) {
        return None;
    }
    canonicalize_quad([p0, p1, p2, p3].map(|p| Complex64::new(p[1], p[2]))).ok()
}

pub fn compute(args: &ComputeArgs, stdout: &mut dyn Write) -> CmdResult {
    let text = read_input(&args.input)?;
    let points = points_file::parse(&text).map_err(|e| CliError::usage(e.to_string()))?;
    if !(2..=MAX_POINTS).contains(&points.len()) {
        return Err(CliError::usage(format!(
            "expected between 2 and {MAX_POINTS} points, found {}",
            points.len()
        )));
    }
    let config = Configuration::new(points.iter().copied().map(Point::from_xyz).collect())
        .map_err(|e| CliError::degenerate(e.to_string()))?;
    let result = atiyah_determinant(&config).map_err(|e| CliError::degenerate(e.to_string()))?;

    let mut out = String::new();
    let _ = writeln!(out, "n = {}", config.len());
    let _ = writeln!(out, "planar = {}", config.is_coplanar());
    line(&mut out, "at_re", result.at.re);
    line(&mut out, "at_im", result.at.im);
    line(&mut out, "normalizer", result.normalizer);
    line(&mut out, "d_re", result.d_normalized.re);
    line(&mut out, "d_im", result.d_normalized.im);
    line(&mut out, "d_abs", result.d_normalized.norm());

    if let Some(quad) = as_convex_quad(&points) {
        let dec = decomposed_at(&quad).map_err(|e| CliError::degenerate(e.to_string()))?;
        let routes = compare_routes(&quad, result.at, &dec, 1e-9);
        let _ = writeln!(out, "convex_quad = true");
        line(&mut out, "p", dec.standard.p_scalar);
        line(&mut out, "at_ang", dec.standard.at_ang);
        line(&mut out, "s1", dec.angular.s1);
        line(&mut out, "s2", dec.angular.s2);
        line(&mut out, "e", dec.angular.e_dimensionless);
        let e = &dec.edges;
        for (key, value) in [
            ("e12", e.e12),
            ("e23", e.e23),
            ("e34", e.e34),
            ("e14", e.e14),
            ("e13", e.e13),
            ("e24", e.e24),
        ] {
            line(&mut out, key, value);
        }
        line(&mut out, "at_decomposed", dec.at);
        line(&mut out, "route_rel_error", routes.rel_error);
        let _ = writeln!(out, "ill_conditioned = {}", routes.ill_conditioned);
    }
    emit(stdout, &out)?;
    Ok(Exit::Success)
}

pub fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> CmdResult {
    if !(args.tol > 0.0) || !args.tol.is_finite() {
        return Err(CliError::usage(format!(
            "--tol must be positive, got {}",
            args.tol
        )));
    }
    let spec = SampleSpec {
        kind: args.kind,
        count: args.samples,
        seed: args.seed,
        scale: args.scale,
    };
    let tolerances = Tolerances {
        identity_rel: args.tol,
        invariance_rel: args.tol,
        ..Tolerances::default()
    };
    let threads = args.threads as usize;
    let report = run_verification(
        &spec,
        &VerifyOptions {
            tolerances,
            threads,
        },
    )
    .map_err(|e| match e {
        Error::InvalidSpec(_) => CliError::usage(e.to_string()),
        other => CliError::degenerate(other.to_string()),
    })?;

    let mut buf = Vec::new();
    match args.format {
        Format::Csv => write_csv(&report, &mut buf).map_err(|e| CliError::usage(e.to_string()))?,
        Format::Json => write_json(&ReportDocument::new(&report, threads), &mut buf)
            .map_err(|e| CliError::usage(e.to_string()))?,
    }
    match &args.out {
        Some(path) => {
            fs::write(path, &buf).map_err(|e| CliError::io(&path.display().to_string(), e))?
        }
        None => stdout
            .write_all(&buf)
            .map_err(|e| CliError::io("stdout", e))?,
    }

    if let Some(dir) = &args.repro_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(&dir.display().to_string(), e))?;
        for f in &report.failures {
            let path = dir.join(format!("violation-{}-{}.pts", f.index, f.check.name()));
            let body = format!(
                "# kind {} seed {} index {}\n# {} value {} threshold {}\n{}",
                spec.kind,
                spec.seed,
                f.index,
                f.check.name(),
                fmt_f64(f.value),
                fmt_f64(f.threshold),
                points_file::format(&f.points)
            );
            fs::write(&path, body).map_err(|e| CliError::io(&path.display().to_string(), e))?;
        }
    }

    eprintln!(
        "{} samples, {} violations, {:.2}s",
        spec.count,
        report.failures.len(),
        report.elapsed_secs
    );
    Ok(if report.all_passed() {
        Exit::Success
    } else {
        Exit::Violation
    })
}

fn start_point(text: &str) -> Result<StartPoint, CliError> {
    let from_fixture = |f: Fixture| {
        let z = f.planar_points();
        PlanarQuad::new([z[0], z[1], z[2], z[3]])
            .map(StartPoint::Quad)
            .map_err(|e| CliError::degenerate(e.to_string()))
    };
    if let Some(seed) = text.strip_prefix("seed:") {
        return seed
            .parse()
            .map(StartPoint::Seed)
            .map_err(|_| CliError::usage(format!("bad seed `{seed}`")));
    }
    if let Some(path) = text.strip_prefix("file:") {
        let body = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let points = points_file::parse(&body).map_err(|e| CliError::usage(e.to_string()))?;
        let [p0, p1, p2, p3] = points[..] else {
            return Err(CliError::degenerate(format!(
                "start needs 4 points, found {}",
                points.len()
            )));
        };
        return canonicalize_quad([p0, p1, p2, p3].map(|p| Complex64::new(p[1], p[2])))
            .map(StartPoint::Quad)
            .map_err(|e| CliError::degenerate(e.to_string()));
    }
    match text {
        "square" => from_fixture(Fixture::Square),
        "figure1" => from_fixture(Fixture::Figure1),
        _ => Err(CliError::usage(format!("unknown start `{text}`"))),
    }
}

pub fn minimize(args: &MinimizeArgs, stdout: &mut dyn Write) -> CmdResult {
    if !(args.tol >= 0.0) || !args.tol.is_finite() {
        return Err(CliError::usage(format!(
            "--tol must be non-negative, got {}",
            args.tol
        )));
    }
    let mut spec = MinimizeSpec::new(args.objective, start_point(&args.start)?);
    spec.max_iterations = args.max_iter;
    spec.tolerance = args.tol;
    let outcome = minimize_d(&spec).map_err(|e| CliError::degenerate(e.to_string()))?;

    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::io(&args.out_dir.display().to_string(), e))?;
    let trace_path = args.out_dir.join("trace.csv");
    let mut trace = String::from("iteration,best\n");
    for row in &outcome.trace {
        let _ = writeln!(trace, "{},{}", row.iteration, fmt_f64(row.best));
    }
    fs::write(&trace_path, trace)
        .map_err(|e| CliError::io(&trace_path.display().to_string(), e))?;
    let best_path = args.out_dir.join("best.pts");
    let best: Vec<[f64; 3]> = outcome
        .best_quad
        .vertices()
        .iter()
        .map(|z| [0.0, z.re, z.im])
        .collect();
    fs::write(&best_path, points_file::format(&best))
        .map_err(|e| CliError::io(&best_path.display().to_string(), e))?;

    let mut out = String::new();
    line(&mut out, "start_value", outcome.start_value);
    line(&mut out, "best_value", outcome.best_value);
    line(&mut out, "floor", args.objective.floor());
    let _ = writeln!(out, "iterations = {}", outcome.iterations);
    let _ = writeln!(out, "evaluations = {}", outcome.evaluations);
    let _ = writeln!(out, "converged = {}", outcome.converged);
    let _ = writeln!(out, "breach = {}", outcome.breach);
    emit(stdout, &out)?;
    Ok(if outcome.breach {
        Exit::Violation
    } else {
        Exit::Success
    })
}

pub fn fixture(args: &FixtureArgs, stdout: &mut dyn Write) -> CmdResult {
    let fixture = Fixture::from_str(&args.name)
        .map_err(|_| CliError::usage(format!("unknown fixture `{}`", args.name)))?;
    emit(stdout, &points_file::format(&fixture.coordinates()))?;
    Ok(Exit::Success)
}
