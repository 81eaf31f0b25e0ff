//! Command-line front end. Exit codes: 0 success, 1 input or usage error,
//! 2 mathematical failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::antipodal::{certify_antipodal, AntipodalError, AntipodalOutcome, CertificateCheck, RescaleMode};
use crate::equilateral::{find_equilateral_c0, EquilateralError, FixedPointRun, FixedPointStatus};
use crate::norms::{NormError, NormSpec};
use crate::points::PointSet;
use crate::renorm::{bm_bound_audit, build_antipodal_renorm, AuditStats, RenormError, RenormResult};
use crate::report::{self, Envelope, ReportError};
use crate::suite::{self, SuiteConfig, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_MATH: i32 = 2;

/// Label attached to separation constants computed from finite sets.
pub const FINITE_LOWER_BOUND: &str = "finite lower bound";

#[derive(Debug, Parser)]
#[command(name = "equinorm", version, about = "Equilateral sets, antipodal certificates and hull-gauge renormings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilateral set in a norm sandwiched by the sup-norm, by fixed-point iteration.
    Fixedpoint(FixedpointArgs),
    /// Certify a point set antipodal and build the renorming that makes it equilateral.
    Renorm(RenormArgs),
    /// Run the battery of acceptance checks.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Files to write; repeat or separate with commas. Defaults to all.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Vec<Format>,
}

impl Output {
    fn wants(&self, f: Format) -> bool {
        self.format.is_empty() || self.format.contains(&f)
    }

    fn explicitly_wants(&self, f: Format) -> bool {
        self.format.contains(&f)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

#[derive(Debug, Args)]
pub struct FixedpointArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RenormArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Tolerance of the sandwich audit.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_dirs: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Optional suite configuration JSON.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_dirs: Option<usize>,
    /// Run only the named criterion; repeatable.
    #[arg(long)]
    pub only: Vec<String>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }

    fn math(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_MATH,
            message: e.to_string(),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        Failure::input(e)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Fixedpoint(a) => cmd_fixedpoint(&a),
        Command::Renorm(a) => cmd_renorm(&a),
        Command::Suite(a) => cmd_suite(&a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn prepare_out_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))
}

fn norm_error_code(e: &NormError) -> i32 {
    match e {
        NormError::Solve(_) | NormError::Convex(_) => EXIT_MATH,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedpointConfig {
    pub norm: NormSpec,
    #[serde(rename = "N")]
    pub n: usize,
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedpointReport {
    pub config: FixedpointConfig,
    /// `max_{i != j} |‖p_i − p_j‖ − 1|`
    pub max_distance_deviation: f64,
    pub run: FixedPointRun,
}

fn cmd_fixedpoint(a: &FixedpointArgs) -> Result<i32, Failure> {
    let problem = report::read_problem(&a.input)?;
    let n = problem
        .n
        .ok_or_else(|| Failure::input(format!("{}: fixedpoint needs \"N\"", a.input.display())))?;
    let config = FixedpointConfig {
        norm: problem.norm,
        n,
        tol: a.tol.or(problem.tol).unwrap_or(1e-12),
        max_iter: a.max_iter.or(problem.max_iter).unwrap_or(1000),
    };
    config.norm.validate().map_err(Failure::input)?;
    let run = find_equilateral_c0(&config.norm, config.n, config.tol, config.max_iter).map_err(|e| match &e {
        EquilateralError::Norm(ne) => Failure {
            code: norm_error_code(ne),
            message: e.to_string(),
        },
        _ => Failure::input(e),
    })?;
    let max_distance_deviation = run
        .report
        .distances
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().enumerate().filter(move |(j, _)| *j != i).map(|(_, d)| (d - 1.0).abs()))
        .fold(0.0, f64::max);
    prepare_out_dir(&a.output.out_dir)?;
    let out = &a.output;
    if out.wants(Format::Csv) {
        report::write_matrix_csv(&out.path("distances.csv"), &run.report.distances, run.points.labels.as_deref())?;
        report::write_matrix_csv(&out.path("deviations.csv"), &run.report.deviations, run.points.labels.as_deref())?;
    }
    if out.explicitly_wants(Format::Svg) {
        eprintln!("note: SVG is drawn only for planar sets; this set lives in R^{}", run.points.dim());
    }
    let status = run.state.status;
    println!(
        "fixedpoint N={} status={:?} iterations={} fallback={} max |distance - 1| = {:e}",
        config.n, status, run.state.iterations, run.state.fallback_used, max_distance_deviation
    );
    if out.wants(Format::Json) {
        let body = FixedpointReport {
            config,
            max_distance_deviation,
            run,
        };
        report::write_json(&out.path("fixedpoint.json"), &Envelope::new("fixedpoint", body))?;
    }
    Ok(if status == FixedPointStatus::Converged {
        EXIT_OK
    } else {
        EXIT_MATH
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormConfig {
    pub norm: NormSpec,
    pub points: PointSet,
    pub c2: f64,
    pub tol: f64,
    pub seed: u64,
    pub n_dirs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub config: RenormConfig,
    pub outcome: AntipodalOutcome,
    /// Always [`FINITE_LOWER_BOUND`]: `d` describes this finite set only.
    pub d_label: String,
    /// Factor applied to the points to bring them into the unit ball.
    pub points_rescaled_by: Option<f64>,
    pub check: Option<CertificateCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormReport {
    pub config: RenormConfig,
    pub result: RenormResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: RenormConfig,
    pub distortion_bound: f64,
    pub audit: AuditStats,
}

fn renorm_failure(e: RenormError) -> Failure {
    let code = match &e {
        RenormError::Norm(ne) => norm_error_code(ne),
        RenormError::Antipodal(AntipodalError::Norm(ne)) => norm_error_code(ne),
        RenormError::NoDirections | RenormError::PointsMismatch => EXIT_INPUT,
        _ => EXIT_MATH,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn cmd_renorm(a: &RenormArgs) -> Result<i32, Failure> {
    let problem = report::read_problem(&a.input)?;
    let points = problem
        .points
        .ok_or_else(|| Failure::input(format!("{}: renorm needs \"points\"", a.input.display())))?;
    let config = RenormConfig {
        norm: problem.norm,
        points,
        c2: problem.c2.unwrap_or(1.0),
        tol: a.tol.or(problem.tol).unwrap_or(1e-9),
        seed: a.seed.or(problem.seed).unwrap_or(0),
        n_dirs: a.n_dirs.or(problem.n_dirs).unwrap_or(1000),
    };
    config.norm.validate().map_err(Failure::input)?;
    config.points.validate().map_err(Failure::input)?;
    config.norm.check_dim(&config.points.points[0]).map_err(Failure::input)?;
    if config.n_dirs == 0 {
        return Err(Failure::input("n_dirs must be positive"));
    }
    prepare_out_dir(&a.output.out_dir)?;
    let out = &a.output;

    let outcome = certify_antipodal(&config.norm, &config.points, config.c2).map_err(|e| match &e {
        AntipodalError::Norm(ne) => Failure {
            code: norm_error_code(ne),
            message: e.to_string(),
        },
        AntipodalError::Points(_) | AntipodalError::TooFewPoints(_) | AntipodalError::BadDualBound(_) => {
            Failure::input(e)
        }
        _ => Failure::math(e),
    })?;

    let mut rescaled = None;
    let working = match &outcome {
        AntipodalOutcome::Certified(cert) if cert.c1 > 1.0 => {
            let r = cert.rescale(1.0 / cert.c1, RescaleMode::ScalePoints).map_err(Failure::math)?;
            rescaled = Some(1.0 / cert.c1);
            Some(r)
        }
        AntipodalOutcome::Certified(cert) => Some(cert.clone()),
        AntipodalOutcome::NotAntipodal(_) => None,
    };
    let check = working
        .as_ref()
        .map(|c| c.verify(&config.norm, 1e-9))
        .transpose()
        .map_err(Failure::math)?;
    let cert_report = CertificateReport {
        config: config.clone(),
        outcome: outcome.clone(),
        d_label: FINITE_LOWER_BOUND.to_string(),
        points_rescaled_by: rescaled,
        check,
    };
    if out.wants(Format::Json) {
        report::write_json(&out.path("certificate.json"), &Envelope::new("renorm", &cert_report))?;
    }
    let Some(cert) = working else {
        if let AntipodalOutcome::NotAntipodal(w) = &outcome {
            println!(
                "not antipodal: no functional separates points {} and {} (best margin {:e})",
                w.i, w.j, w.best_margin
            );
        }
        return Ok(EXIT_MATH);
    };

    let points = PointSet {
        points: cert.points.clone(),
        labels: config.points.labels.clone(),
    };
    let mut result = build_antipodal_renorm(&config.norm, &points, &cert).map_err(renorm_failure)?;
    let audit = bm_bound_audit(&config.norm, &result, config.n_dirs, config.seed, config.tol).map_err(renorm_failure)?;
    result.audit = Some(audit.clone());

    println!(
        "certified: c1 = {}, c2 = {}, d = {} ({FINITE_LOWER_BOUND})",
        cert.c1, cert.c2, cert.d
    );
    println!(
        "renormed: max deviation {:e}, distortion bound {}, audit ratios [{}, {}] with {} violations",
        result.report.max_abs_deviation, result.distortion_bound, audit.min_ratio, audit.max_ratio, audit.violations
    );

    if out.wants(Format::Csv) {
        report::write_matrix_csv(&out.path("distances.csv"), &result.report.distances, points.labels.as_deref())?;
    }
    if out.wants(Format::Svg) {
        if points.dim() == 2 {
            let svg = report::ball_svg(&config.norm, Some(&result.new_norm), &points)?;
            report::write_svg(&out.path("renorm.svg"), &svg)?;
        } else if out.explicitly_wants(Format::Svg) {
            eprintln!("note: SVG is drawn only for planar sets; this set lives in R^{}", points.dim());
        }
    }
    let ok = result.report.max_abs_deviation <= 1e-6 && result.lower_bounds.passed && audit.passed;
    if out.wants(Format::Json) {
        let audit_report = AuditReport {
            config: config.clone(),
            distortion_bound: result.distortion_bound,
            audit,
        };
        report::write_json(&out.path("audit.json"), &Envelope::new("renorm", audit_report))?;
        report::write_json(&out.path("renorm.json"), &Envelope::new("renorm", RenormReport { config, result }))?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_MATH })
}

fn cmd_suite(a: &SuiteArgs) -> Result<i32, Failure> {
    let mut config: SuiteConfig = match &a.input {
        Some(p) => report::read_json(p)?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = a.seed {
        config.seed = s;
    }
    if let Some(n) = a.n_dirs {
        config.n_dirs = n;
    }
    if !a.only.is_empty() {
        config.only = a.only.clone();
    }
    suite::check_names(&config.only).map_err(Failure::input)?;
    let report: SuiteReport = suite::run_suite(&config).map_err(Failure::input)?;
    let dir = a.out_dir.join("criteria");
    prepare_out_dir(&dir)?;
    for c in &report.criteria {
        report::write_json(&dir.join(format!("{}.json", c.name)), &Envelope::new("suite", c))?;
    }
    report::write_json(&a.out_dir.join("suite.json"), &Envelope::new("suite", &report))?;
    for c in &report.criteria {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
        if let Some(e) = &c.error {
            println!("    error: {e}");
        }
        for m in c.failing() {
            println!("    {}: {:e} (limit {:e})", m.name, m.value, m.limit);
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_MATH })
}
