//! Command-line front end: six subcommands sharing one config format.
//!
//! Exit codes are a stable contract: 0 for success, 2 for a config problem,
//! 3 for a failed validation, hypothesis, or detection. Every command writes
//! a `report.json` into the output directory (default: current directory);
//! `evolve` also dumps the step operator, its power, and the resulting
//! probability rows as CSV. Writes go through a temp file and rename, so a
//! crash never leaves a half-written artifact.

use crate::config::{ExperimentConfig, ResolveError, ResolvedExperiment};
use crate::error::Error;
use crate::operators::{
    discretization_check, matrix_to_csv, staggered_step, Angle, DiscretizationReport,
};
use crate::phenomena::{
    build_reflections, detect_ium, detect_period, detect_pst, factor_flatness_residual,
    ium_schedule, pst_schedule, schedule_evolution, PhenomenonReport, ThetaSchedule,
};
use crate::tessellation::CoveringReport;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "walklab",
    version,
    about = "Staggered quantum walks on Cayley graphs of finite groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the connection set, pieces, covering, and commutation.
    Validate(RunArgs),
    /// Build the walk operator and dump matrices and probabilities.
    Evolve(RunArgs),
    /// Schedule and verify perfect state transfer.
    Pst(RunArgs),
    /// Schedule and verify instantaneous uniform mixing.
    Ium(RunArgs),
    /// Find the walk's period under an explicit schedule.
    Period(RunArgs),
    /// Compare walk powers against the continuous-time evolution.
    Discretize(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Path to the experiment config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for reports and dumps (default: current directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the command's default tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Failure category, mapped onto the exit-code contract.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Validation(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<ResolveError> for CliError {
    fn from(e: ResolveError) -> Self {
        match e {
            ResolveError::Config(m) => CliError::Config(m),
            ResolveError::Validation(m) => CliError::Validation(m),
        }
    }
}

fn validation(e: Error) -> CliError {
    CliError::Validation(e.to_string())
}

/// Run one subcommand; `Ok(true)` means the command's claim held.
pub fn run(cli: Cli) -> Result<bool, CliError> {
    let (args, runner): (&RunArgs, fn(&ResolvedExperiment, &RunArgs, &Path) -> Result<bool, CliError>) =
        match &cli.command {
            Command::Validate(a) => (a, cmd_validate),
            Command::Evolve(a) => (a, cmd_evolve),
            Command::Pst(a) => (a, cmd_pst),
            Command::Ium(a) => (a, cmd_ium),
            Command::Period(a) => (a, cmd_period),
            Command::Discretize(a) => (a, cmd_discretize),
        };
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", args.config.display())))?;
    let config = ExperimentConfig::from_json(&text)?;
    let resolved = config.resolve()?;
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", out_dir.display())))?;
    runner(&resolved, args, &out_dir)
}

fn tolerance(args: &RunArgs, resolved: &ResolvedExperiment, default: f64) -> f64 {
    args.tol.or(resolved.tolerance).unwrap_or(default)
}

fn require<T: Clone>(field: &Option<T>, name: &str) -> Result<T, CliError> {
    field
        .clone()
        .ok_or_else(|| CliError::Config(format!("missing required field {name:?}")))
}

fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let io = |e: &dyn fmt::Display| CliError::Io(format!("writing {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| io(&e))?;
    tmp.persist(&path).map_err(|e| io(&e))?;
    Ok(path)
}

fn write_report<T: Serialize>(dir: &Path, report: &T) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
    text.push('\n');
    write_atomic(dir, "report.json", &text)
}

#[derive(Serialize)]
struct GroupSummary {
    order: usize,
    abelian: bool,
}

#[derive(Serialize)]
struct ConnectionSummary {
    size: usize,
    generates: bool,
    power_closed: bool,
    connected: bool,
}

#[derive(Serialize)]
struct PieceSummary {
    index: usize,
    size: usize,
    gamma: usize,
    inside_connection: bool,
    subgroup_with_identity: bool,
}

#[derive(Serialize)]
struct CommutationSummary {
    settheoretic: Vec<Vec<bool>>,
    matrix: Vec<Vec<bool>>,
    agree: bool,
}

#[derive(Serialize)]
struct ValidateReport {
    command: &'static str,
    group: GroupSummary,
    connection: Option<ConnectionSummary>,
    pieces: Vec<PieceSummary>,
    covering: Option<CoveringReport>,
    commutation: Option<CommutationSummary>,
    failures: Vec<String>,
    pass: bool,
}

fn cmd_validate(
    resolved: &ResolvedExperiment,
    _args: &RunArgs,
    out_dir: &Path,
) -> Result<bool, CliError> {
    let group = &resolved.group;
    let mut failures = Vec::new();

    let connection = match resolved.connection() {
        Ok(c) => Some(c),
        Err(e) => {
            failures.push(format!("connection: {e}"));
            None
        }
    };
    let connection_summary = connection.as_ref().map(|c| ConnectionSummary {
        size: c.len(),
        generates: c.generates(),
        power_closed: c.power_closed(),
        connected: c.is_connected(),
    });

    let mut pieces = Vec::new();
    for (index, piece) in resolved.pieces.iter().enumerate() {
        let inside_connection = piece
            .iter()
            .all(|g| resolved.connection_elems.contains(g));
        let subgroup_with_identity = !piece.is_empty()
            && group.is_subgroup_with_id(piece).unwrap_or(false);
        if !inside_connection {
            failures.push(format!("piece {index}: element outside the connection set"));
        }
        if !subgroup_with_identity {
            failures.push(format!(
                "piece {index}: union with the identity is not a subgroup"
            ));
        }
        pieces.push(PieceSummary {
            index,
            size: piece.len(),
            gamma: piece.len() + 1,
            inside_connection,
            subgroup_with_identity,
        });
    }

    let mut covering = None;
    let mut commutation = None;
    if failures.is_empty() {
        match resolved.partition() {
            Ok(p) => {
                let tessellations = p.build_tessellations();
                match p.classify_covering(&tessellations) {
                    Ok(report) => covering = Some(report),
                    Err(e) => failures.push(format!("covering: {e}")),
                }
                let k = p.pieces().len();
                let mut settheoretic = vec![vec![true; k]; k];
                let mut matrix = vec![vec![true; k]; k];
                for i in 0..k {
                    for j in 0..k {
                        settheoretic[i][j] = crate::tessellation::commute_settheoretic(
                            group,
                            &p.pieces()[i],
                            &p.pieces()[j],
                        );
                        matrix[i][j] = tessellations[i]
                            .adjacency()
                            .commutes_with(tessellations[j].adjacency());
                    }
                }
                let agree = settheoretic == matrix;
                if !agree {
                    failures.push("commutation: set and matrix tests disagree".into());
                }
                commutation = Some(CommutationSummary {
                    settheoretic,
                    matrix,
                    agree,
                });
            }
            Err(e) => failures.push(format!("partition: {e}")),
        }
    }

    let pass = failures.is_empty();
    let report = ValidateReport {
        command: "validate",
        group: GroupSummary {
            order: group.order(),
            abelian: group.is_abelian(),
        },
        connection: connection_summary,
        pieces,
        covering,
        commutation,
        failures,
        pass,
    };
    let path = write_report(out_dir, &report)?;

    if let Some(c) = &report.connection {
        println!(
            "connection: {} elements, generates={}, power_closed={}, connected={}",
            c.size, c.generates, c.power_closed, c.connected
        );
    }
    for p in &report.pieces {
        println!(
            "piece {}: gamma={}, subgroup={}, inside_connection={}",
            p.index, p.gamma, p.subgroup_with_identity, p.inside_connection
        );
    }
    if let Some(cov) = &report.covering {
        println!(
            "covering: {:?}, uniform={}, k={}, gamma_total={}, shared_edges={}",
            cov.kind,
            cov.uniform,
            cov.k,
            cov.gamma_total,
            cov.shared_edges.len()
        );
    }
    for failure in &report.failures {
        println!("FAIL {failure}");
    }
    println!("report: {}", path.display());
    Ok(report.pass)
}

#[derive(Serialize)]
struct EvolveReport {
    command: &'static str,
    thetas: Vec<Angle>,
    time: u64,
    unitarity_residual: f64,
    threshold: f64,
    pass: bool,
    files: EvolveFiles,
}

#[derive(Serialize)]
struct EvolveFiles {
    step: String,
    power: String,
    probabilities: String,
}

fn cmd_evolve(
    resolved: &ResolvedExperiment,
    args: &RunArgs,
    out_dir: &Path,
) -> Result<bool, CliError> {
    let thetas = require(&resolved.thetas, "thetas")?;
    let time = require(&resolved.time, "time")?;
    let partition = resolved.partition().map_err(validation)?;
    let reflections = build_reflections(&partition).map_err(validation)?;
    let u = staggered_step(&reflections, &thetas).map_err(validation)?;
    let residual = u.unitarity_residual();
    let threshold = tolerance(args, resolved, 1e-8);
    let ut = u.power(time);

    let n = ut.nrows();
    let mut probabilities = String::new();
    for source in 0..n {
        let row: Vec<String> = (0..n)
            .map(|dest| format!("{:.17}", ut[(dest, source)].norm_sqr()))
            .collect();
        probabilities.push_str(&row.join(","));
        probabilities.push('\n');
    }

    write_atomic(out_dir, "u.csv", &matrix_to_csv(u.matrix()))?;
    write_atomic(out_dir, "u_power.csv", &matrix_to_csv(&ut))?;
    write_atomic(out_dir, "probabilities.csv", &probabilities)?;
    let report = EvolveReport {
        command: "evolve",
        thetas,
        time,
        unitarity_residual: residual,
        threshold,
        pass: residual <= threshold,
        files: EvolveFiles {
            step: "u.csv".into(),
            power: "u_power.csv".into(),
            probabilities: "probabilities.csv".into(),
        },
    };
    let path = write_report(out_dir, &report)?;
    println!("unitarity residual: {residual:.3e} (threshold {threshold:.1e})");
    println!("report: {}", path.display());
    Ok(report.pass)
}

#[derive(Serialize)]
struct PstReport {
    command: &'static str,
    schedule: ThetaSchedule,
    tolerance: f64,
    report: PhenomenonReport,
}

fn cmd_pst(
    resolved: &ResolvedExperiment,
    args: &RunArgs,
    out_dir: &Path,
) -> Result<bool, CliError> {
    let time = require(&resolved.time, "time")?;
    let targets = require(&resolved.targets, "targets")?;
    let partition = resolved.partition().map_err(validation)?;
    let tol = tolerance(args, resolved, 1e-9);
    let schedule = pst_schedule(&partition, time, &targets).map_err(validation)?;
    let u = schedule_evolution(&partition, &schedule).map_err(validation)?;
    let report = detect_pst(&u, time, tol);
    let pass = report.pass();
    if let PhenomenonReport::Pst {
        pairs,
        permutation_like,
        ..
    } = &report
    {
        println!(
            "transfer pairs: {} (permutation_like={permutation_like})",
            pairs.len()
        );
    }
    let wrapped = PstReport {
        command: "pst",
        schedule,
        tolerance: tol,
        report,
    };
    let path = write_report(out_dir, &wrapped)?;
    println!("report: {}", path.display());
    Ok(pass)
}

#[derive(Serialize)]
struct IumReport {
    command: &'static str,
    schedule: ThetaSchedule,
    tolerance: f64,
    factor_flatness_residual: f64,
    report: PhenomenonReport,
}

fn cmd_ium(
    resolved: &ResolvedExperiment,
    args: &RunArgs,
    out_dir: &Path,
) -> Result<bool, CliError> {
    let time = require(&resolved.time, "time")?;
    let partition = resolved.partition().map_err(validation)?;
    let tol = tolerance(args, resolved, 1e-9);
    let schedule = ium_schedule(&partition, time).map_err(validation)?;
    let reflections = build_reflections(&partition).map_err(validation)?;
    let flatness = factor_flatness_residual(&reflections, &schedule).map_err(validation)?;
    let u = staggered_step(&reflections, &schedule.thetas).map_err(validation)?;
    let report = detect_ium(&u.power(time), tol);
    let pass = report.pass();
    if let PhenomenonReport::Ium {
        min_magnitude,
        max_magnitude,
        expected_magnitude,
        ..
    } = &report
    {
        println!(
            "entry magnitudes: [{min_magnitude:.12}, {max_magnitude:.12}], expected {expected_magnitude:.12}"
        );
    }
    let wrapped = IumReport {
        command: "ium",
        schedule,
        tolerance: tol,
        factor_flatness_residual: flatness,
        report,
    };
    let path = write_report(out_dir, &wrapped)?;
    println!("report: {}", path.display());
    Ok(pass)
}

#[derive(Serialize)]
struct PeriodReport {
    command: &'static str,
    thetas: Vec<Angle>,
    max_period: u64,
    tolerance: f64,
    report: PhenomenonReport,
}

fn cmd_period(
    resolved: &ResolvedExperiment,
    args: &RunArgs,
    out_dir: &Path,
) -> Result<bool, CliError> {
    let thetas = require(&resolved.thetas, "thetas")?;
    let max_period = require(&resolved.max_period, "max_period")?;
    let partition = resolved.partition().map_err(validation)?;
    let tol = tolerance(args, resolved, 1e-9);
    let reflections = build_reflections(&partition).map_err(validation)?;
    let u = staggered_step(&reflections, &thetas).map_err(validation)?;
    let report = detect_period(&u, max_period, tol);
    let pass = report.pass();
    if let PhenomenonReport::Period { period, .. } = &report {
        match period {
            Some(p) => println!("period: {p}"),
            None => println!("period: none found up to {max_period}"),
        }
    }
    let wrapped = PeriodReport {
        command: "period",
        thetas,
        max_period,
        tolerance: tol,
        report,
    };
    let path = write_report(out_dir, &wrapped)?;
    println!("report: {}", path.display());
    Ok(pass)
}

#[derive(Serialize)]
struct DiscretizeReport {
    command: &'static str,
    report: DiscretizationReport,
}

fn cmd_discretize(
    resolved: &ResolvedExperiment,
    args: &RunArgs,
    out_dir: &Path,
) -> Result<bool, CliError> {
    let theta = require(&resolved.theta, "theta")?;
    let tmax = require(&resolved.tmax, "tmax")?;
    let partition = resolved.partition().map_err(validation)?;
    let tol = tolerance(args, resolved, 1e-9);
    let report = discretization_check(&partition, theta, tmax, tol).map_err(validation)?;
    println!(
        "max deviation over T in 0..={}: {:.3e} (tolerance {:.1e})",
        report.tmax, report.max_deviation, report.tol
    );
    let pass = report.pass;
    let wrapped = DiscretizeReport {
        command: "discretize",
        report,
    };
    let path = write_report(out_dir, &wrapped)?;
    println!("report: {}", path.display());
    Ok(pass)
}
