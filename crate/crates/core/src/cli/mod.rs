//! Command-line front end: `srq <subcommand> --config <file> [--set key=value]... [--out <path>] [--reproducible]`.
//!
//! Exit codes: 0 success, 2 schema/unit/usage error, 3 solver or verification
//! failure, 4 I/O error.

pub mod config;
pub mod csv;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};

use crate::dynamics::{evolve, steady_state_of, DensityMatrix};
use crate::model::{build_liouvillian, validate_regime};
use crate::oracle::{self, AnalyticParams};
use crate::sweep::{array_enhancement, run_sweep, Grid, Measure, SweepParameter, SweepSpec};

pub use config::{parse_config, parse_config_with, ConfigError, InitialState, JobConfig, Mode, RunConfig};
pub use csv::{Cell, CsvTable};

/// Largest closed-form deviation `verify` accepts.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("I/O error on `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Solver(_) | CliError::Verification(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

fn solver(e: impl std::fmt::Display) -> CliError {
    CliError::Solver(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "srq",
    version,
    about = "Noise-assisted response of driven dissipative qubit chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Steady-state measures.
    Steady(JobArgs),
    /// Time evolution from a reference state.
    Evolve(JobArgs),
    /// Steady-state measures over a parameter grid.
    Sweep(JobArgs),
    /// Compare the two-qubit steady state against its closed form.
    Verify(JobArgs),
    /// Peak single-qubit coherence against chain length.
    Enhance(JobArgs),
}

#[derive(Debug, clap::Args)]
struct JobArgs {
    /// JSON job configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override a configuration entry, e.g. `system.gamma=0.5` or `run.grid.points=40`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output path; defaults to `output.path`, then standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the timestamp so identical inputs give byte-identical output.
    #[arg(long)]
    reproducible: bool,
}

/// Parses `args` (including the program name), runs the job and returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (mode, args) = match cli.command {
        Command::Steady(a) => (Mode::Steady, a),
        Command::Evolve(a) => (Mode::Evolve, a),
        Command::Sweep(a) => (Mode::Sweep, a),
        Command::Verify(a) => (Mode::Verify, a),
        Command::Enhance(a) => (Mode::Enhance, a),
    };
    match execute(mode, &args.config, &args.set, args.out.as_deref(), args.reproducible) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("srq: {e}");
            e.exit_code()
        }
    }
}

/// Loads the configuration, runs it and writes the table.
///
/// A failed verification still writes its table before reporting the failure.
pub fn execute(
    mode: Mode,
    config_path: &Path,
    overrides: &[String],
    out: Option<&Path>,
    reproducible: bool,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config_path).map_err(|source| CliError::Io {
        path: config_path.to_path_buf(),
        source,
    })?;
    let cfg = parse_config_with(&text, overrides)?;
    if cfg.run.mode() != mode {
        return Err(ConfigError::Schema {
            path: "run.mode".into(),
            message: format!(
                "subcommand `{}` cannot run a `{}` job",
                mode.name(),
                cfg.run.mode().name()
            ),
        }
        .into());
    }
    let outcome = run_job(&cfg, reproducible)?;
    let rendered = outcome.table.render();
    match out.map(Path::to_path_buf).or_else(|| cfg.output.clone()) {
        Some(path) => csv::write_atomic(&path, &rendered).map_err(|source| CliError::Io { path, source })?,
        None => print!("{rendered}"),
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// A rendered table plus a failure that should be reported after writing it.
#[derive(Debug)]
pub struct JobOutcome {
    pub table: CsvTable,
    pub failure: Option<CliError>,
}

/// Runs a validated job and builds its output table, metadata included.
pub fn run_job(cfg: &JobConfig, reproducible: bool) -> Result<JobOutcome, CliError> {
    let mut outcome = match &cfg.run {
        RunConfig::Steady { measures } => run_steady(cfg, measures)?,
        RunConfig::Evolve {
            t_grid,
            initial,
            gamma_values,
            measures,
        } => run_evolve(cfg, t_grid, *initial, gamma_values, measures)?,
        RunConfig::Sweep {
            parameter,
            grid,
            measures,
        } => run_sweep_job(cfg, *parameter, grid, measures)?,
        RunConfig::Verify { r_grid, s } => run_verify(r_grid, *s)?,
        RunConfig::Enhance { n_list, gamma_interval } => run_enhance(cfg, n_list, *gamma_interval)?,
    };
    let mut header = vec![
        format!("srq {}", env!("CARGO_PKG_VERSION")),
        format!("mode: {}", cfg.run.mode().name()),
        format!(
            "config: {}",
            serde_json::to_string(&cfg.document).expect("JSON values serialize")
        ),
        format!(
            "units: frequencies, rates and times scaled by rabi[0] = {}; columns are reported in configuration units",
            cfg.unit()
        ),
    ];
    match cfg.omega_scale {
        Some(w) => {
            let warnings = validate_regime(&cfg.system, w).map_err(|e| ConfigError::Unit {
                path: "system.omega_scale".into(),
                message: e.to_string(),
            })?;
            for w in warnings {
                log::warn!("{w}");
                header.push(format!("regime warning: {w}"));
            }
        }
        None => header.push("regime check skipped: system.omega_scale not set".into()),
    }
    if !reproducible {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        header.push(format!("generated_unix_time: {secs}"));
    }
    header.append(&mut outcome.table.metadata);
    outcome.table.metadata = header;
    Ok(outcome)
}

fn default_measures(n: usize) -> Vec<Measure> {
    let mut list = vec![Measure::SignalX, Measure::SignalZ];
    list.extend((1..=n).map(Measure::Coherence));
    for i in 1..n {
        list.push(Measure::MutualInformation(i, i + 1));
        list.push(Measure::Eof(i, i + 1));
        list.push(Measure::MinPtEig(i, i + 1));
    }
    list
}

fn evaluate_all(measures: &[Measure], rho: &DensityMatrix) -> Result<Vec<Cell>, CliError> {
    measures
        .iter()
        .map(|m| m.evaluate(rho).map(Cell::Float).map_err(solver))
        .collect()
}

fn columns(first: &[&str], measures: &[Measure]) -> Vec<String> {
    first
        .iter()
        .map(|s| s.to_string())
        .chain(measures.iter().map(Measure::to_string))
        .collect()
}

fn ok(table: CsvTable) -> JobOutcome {
    JobOutcome { table, failure: None }
}

fn run_steady(cfg: &JobConfig, measures: &[Measure]) -> Result<JobOutcome, CliError> {
    let measures = if measures.is_empty() {
        default_measures(cfg.system.n_qubits())
    } else {
        measures.to_vec()
    };
    let rho = steady_state_of(&cfg.dimensionless_system()).map_err(solver)?;
    let mut table = CsvTable::new(columns(&[], &measures));
    table.push_row(evaluate_all(&measures, &rho)?);
    Ok(ok(table))
}

fn run_evolve(
    cfg: &JobConfig,
    t_grid: &[f64],
    initial: InitialState,
    gamma_values: &[f64],
    measures: &[Measure],
) -> Result<JobOutcome, CliError> {
    let unit = cfg.unit();
    let base = cfg.dimensionless_system();
    let scaled_t: Vec<f64> = t_grid.iter().map(|t| t * unit).collect();
    let rho0 = match initial {
        InitialState::Ground => DensityMatrix::ground(base.n_qubits()),
        InitialState::MaximallyMixed => DensityMatrix::maximally_mixed(base.dim()),
    };
    let runs: Vec<(f64, crate::model::ChainParams)> = if gamma_values.is_empty() {
        vec![(cfg.system.gamma()[0], base.clone())]
    } else {
        gamma_values
            .iter()
            .map(|&g| Ok((g, base.with_gamma_all(g / unit).map_err(solver)?)))
            .collect::<Result<_, CliError>>()?
    };
    let mut table = CsvTable::new(columns(&["gamma", "t"], measures));
    table.comment(format!("initial state: {initial:?}"));
    for (gamma, params) in runs {
        let traj = evolve(&rho0, &build_liouvillian(&params), &scaled_t).map_err(solver)?;
        table.comment(format!(
            "gamma {}: max substep {:.3e}, max trace drift {:.3e}, error estimate {:.3e}",
            csv::format_f64(gamma),
            traj.max_step,
            traj.max_trace_drift,
            traj.error_estimate
        ));
        for (t, rho) in t_grid.iter().zip(&traj.states) {
            let mut row = vec![Cell::Float(gamma), Cell::Float(*t)];
            row.extend(evaluate_all(measures, rho)?);
            table.push_row(row);
        }
    }
    Ok(ok(table))
}

fn run_sweep_job(
    cfg: &JobConfig,
    parameter: SweepParameter,
    grid: &[f64],
    measures: &[Measure],
) -> Result<JobOutcome, CliError> {
    let unit = cfg.unit();
    let scale = match parameter {
        SweepParameter::GammaAll | SweepParameter::Coupling => unit,
        SweepParameter::Nbar | SweepParameter::NQubits => 1.0,
    };
    let spec = SweepSpec {
        base: cfg.dimensionless_system(),
        parameter,
        grid: Grid::Explicit(grid.iter().map(|v| v / scale).collect()),
        measures: measures.to_vec(),
    };
    let records = run_sweep(&spec).map_err(|e| ConfigError::Schema {
        path: "run".into(),
        message: e.to_string(),
    })?;
    let mut table = CsvTable::new(columns(&[parameter.name()], measures));
    let mut failed = 0;
    for (value, record) in grid.iter().zip(&records) {
        match &record.failure {
            Some(reason) => {
                failed += 1;
                log::warn!("sweep point {} = {value} failed: {reason}", parameter.name());
                table.comment(format!(
                    "failed point {} = {}: {reason}",
                    parameter.name(),
                    csv::format_f64(*value)
                ));
            }
            None => {
                let mut row = vec![match parameter {
                    SweepParameter::NQubits => Cell::Int(*value as i64),
                    _ => Cell::Float(*value),
                }];
                row.extend(record.values.iter().map(|&(_, v)| Cell::Float(v)));
                table.push_row(row);
            }
        }
    }
    if failed == records.len() {
        return Err(CliError::Solver(format!("all {failed} sweep points failed")));
    }
    Ok(ok(table))
}

fn run_verify(r_grid: &[f64], s: f64) -> Result<JobOutcome, CliError> {
    let mut table = CsvTable::new(
        ["r", "s", "max_abs_deviation", "signal_numeric", "signal_closed_form"]
            .map(String::from)
            .to_vec(),
    );
    table.comment(format!("tolerance: {}", csv::format_f64(VERIFY_TOL)));
    let mut worst: f64 = 0.0;
    for &r in r_grid {
        let p = AnalyticParams::new(r, s).map_err(solver)?;
        let params = crate::model::ChainParams::resonant(2, s, r, 0.0).map_err(solver)?;
        let numeric = steady_state_of(&params).map_err(solver)?;
        let closed = oracle::steady_state_2q(p);
        let deviation = numeric.matrix().max_abs_diff(closed.matrix());
        worst = worst.max(deviation);
        let sig = Measure::SignalX.evaluate(&numeric).map_err(solver)?;
        table.push_row(vec![
            Cell::Float(r),
            Cell::Float(s),
            Cell::Float(deviation),
            Cell::Float(sig),
            Cell::Float(oracle::signal2(p)),
        ]);
    }
    let failure = (worst >= VERIFY_TOL || worst.is_nan())
        .then(|| CliError::Verification(format!("largest deviation {worst:.3e} is not below {VERIFY_TOL:.0e}")));
    Ok(JobOutcome { table, failure })
}

fn run_enhance(cfg: &JobConfig, n_list: &[usize], (lo, hi): (f64, f64)) -> Result<JobOutcome, CliError> {
    let unit = cfg.unit();
    let rows = array_enhancement(n_list, &cfg.dimensionless_system(), (lo / unit, hi / unit)).map_err(solver)?;
    let mut table = CsvTable::new(
        ["n_qubits", "gamma_peak", "coherence_peak", "interior"]
            .map(String::from)
            .to_vec(),
    );
    for row in rows {
        table.push_row(vec![
            Cell::Int(row.n_qubits as i64),
            Cell::Float(row.peak.location * unit),
            Cell::Float(row.peak.value),
            Cell::Int(row.peak.interior as i64),
        ]);
    }
    Ok(ok(table))
}
