//! Job configuration: a JSON document with `system`, `run` and `output` blocks.
//!
//! Rates and frequencies are given in absolute units; jobs divide them by the
//! first qubit's Rabi frequency before simulating.

use std::path::PathBuf;

use serde::Deserialize;
use serde_json::Value;

use crate::model::ChainParams;
use crate::sweep::{Grid, GridScale, Measure, SweepParameter};

/// Largest chain a job may request; the Liouvillian is stored dense.
pub const MAX_QUBITS: usize = 5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("unit error at `{path}`: {message}")]
    Unit { path: String, message: String },
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Steady,
    Evolve,
    Sweep,
    Verify,
    Enhance,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Steady => "steady",
            Mode::Evolve => "evolve",
            Mode::Sweep => "sweep",
            Mode::Verify => "verify",
            Mode::Enhance => "enhance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    #[default]
    Ground,
    MaximallyMixed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Steady {
        measures: Vec<Measure>,
    },
    Evolve {
        /// Absolute time units.
        t_grid: Vec<f64>,
        initial: InitialState,
        /// Absolute decay rates, one trajectory each; empty means the system's own rates.
        gamma_values: Vec<f64>,
        measures: Vec<Measure>,
    },
    Sweep {
        parameter: SweepParameter,
        /// Absolute units for `gamma_all` and `j`.
        grid: Vec<f64>,
        measures: Vec<Measure>,
    },
    Verify {
        r_grid: Vec<f64>,
        s: f64,
    },
    Enhance {
        n_list: Vec<usize>,
        /// Absolute decay rates.
        gamma_interval: (f64, f64),
    },
}

impl RunConfig {
    pub fn mode(&self) -> Mode {
        match self {
            RunConfig::Steady { .. } => Mode::Steady,
            RunConfig::Evolve { .. } => Mode::Evolve,
            RunConfig::Sweep { .. } => Mode::Sweep,
            RunConfig::Verify { .. } => Mode::Verify,
            RunConfig::Enhance { .. } => Mode::Enhance,
        }
    }
}

/// Validated job description.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    /// Absolute units, as written in the file.
    pub system: ChainParams,
    pub omega_scale: Option<f64>,
    pub run: RunConfig,
    pub output: Option<PathBuf>,
    /// The configuration document after overrides, recorded in output metadata.
    pub document: Value,
}

impl JobConfig {
    /// The frequency unit: the first qubit's Rabi frequency.
    pub fn unit(&self) -> f64 {
        self.system.rabi()[0]
    }

    /// System parameters in units of the first Rabi frequency.
    pub fn dimensionless_system(&self) -> ChainParams {
        self.system.rescaled(self.unit()).expect("unit validated positive")
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    system: RawSystem,
    run: RawRun,
    #[serde(default)]
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PerQubit {
    Uniform(f64),
    List(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    n_qubits: usize,
    #[serde(default)]
    rabi: Option<PerQubit>,
    #[serde(default)]
    detuning: Option<PerQubit>,
    j: f64,
    gamma: PerQubit,
    #[serde(default)]
    nbar: f64,
    #[serde(default)]
    omega_scale: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawGrid {
    List(Vec<f64>),
    Range(RawRange),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    min: f64,
    max: f64,
    points: usize,
    #[serde(default)]
    scale: RawScale,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
enum RawRun {
    Steady {
        #[serde(default)]
        measures: Vec<String>,
    },
    Evolve {
        t_grid: RawGrid,
        #[serde(default)]
        initial: InitialState,
        #[serde(default)]
        gamma_values: Vec<f64>,
        measures: Vec<String>,
    },
    Sweep {
        parameter: String,
        grid: RawGrid,
        measures: Vec<String>,
    },
    Verify {
        r_grid: RawGrid,
        #[serde(default)]
        s: Option<f64>,
    },
    Enhance {
        n_list: Vec<usize>,
        gamma_interval: [f64; 2],
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(default)]
    path: Option<PathBuf>,
    #[serde(default = "default_format")]
    format: String,
}

fn default_format() -> String {
    "csv".into()
}

/// Parses a JSON document into a [`JobConfig`].
pub fn parse_config(text: &str) -> Result<JobConfig, ConfigError> {
    parse_config_with(text, &[])
}

/// Parses with `path=value` overrides applied to the document first.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<JobConfig, ConfigError> {
    let mut document: Value = serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    for item in overrides {
        apply_override(&mut document, item)?;
    }
    let raw: RawConfig = serde_path_to_error::deserialize(document.clone()).map_err(|e| {
        let path = e.path().to_string();
        schema(
            if path == "." { String::new() } else { path },
            e.into_inner().to_string(),
        )
    })?;
    build(raw, document)
}

/// Sets the value at a dotted path (`run.grid.points=50`); numeric segments index arrays.
/// The value is read as JSON when possible and as a string otherwise.
pub fn apply_override(document: &mut Value, item: &str) -> Result<(), ConfigError> {
    let (path, raw_value) = item
        .split_once('=')
        .ok_or_else(|| schema(item, "override must have the form path=value"))?;
    let value: Value = serde_json::from_str(raw_value).unwrap_or_else(|_| Value::String(raw_value.to_string()));
    let mut cursor = document;
    let segments: Vec<&str> = path.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(schema(path, "empty path segment"));
    }
    for (k, seg) in segments.iter().enumerate() {
        let last = k + 1 == segments.len();
        cursor = match cursor {
            Value::Object(map) => {
                if last {
                    map.insert(seg.to_string(), value);
                    return Ok(());
                }
                map.entry(seg.to_string())
                    .or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx: usize = seg
                    .parse()
                    .map_err(|_| schema(path, format!("`{seg}` is not an array index")))?;
                let len = items.len();
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| schema(path, format!("index {idx} out of range for length {len}")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(schema(path, format!("`{seg}` does not refer into an object or array"))),
        };
    }
    Ok(())
}

fn per_qubit(v: Option<PerQubit>, default: f64, n: usize, path: &str) -> Result<Vec<f64>, ConfigError> {
    let values = match v {
        None => vec![default; n],
        Some(PerQubit::Uniform(x)) => vec![x; n],
        Some(PerQubit::List(list)) => list,
    };
    if values.len() != n {
        return Err(schema(
            path,
            format!("expected {n} entries (one per qubit), got {}", values.len()),
        ));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(schema(path, "entries must be finite"));
    }
    Ok(values)
}

fn grid_values(g: RawGrid, path: &str) -> Result<Vec<f64>, ConfigError> {
    let grid = match g {
        RawGrid::List(v) => Grid::Explicit(v),
        RawGrid::Range(r) => Grid::Range {
            min: r.min,
            max: r.max,
            points: r.points,
            scale: match r.scale {
                RawScale::Linear => GridScale::Linear,
                RawScale::Log => GridScale::Log,
            },
        },
    };
    grid.values().map_err(|e| schema(path, e.to_string()))
}

fn measures(list: Vec<String>, n_qubits: usize, path: &str) -> Result<Vec<Measure>, ConfigError> {
    list.iter()
        .enumerate()
        .map(|(k, text)| {
            let m: Measure = text
                .parse()
                .map_err(|e: crate::sweep::SweepError| schema(format!("{path}[{k}]"), e.to_string()))?;
            if m.max_qubit() > n_qubits || m.max_qubit() == 0 {
                return Err(schema(
                    format!("{path}[{k}]"),
                    format!("`{m}` is out of range for {n_qubits} qubits"),
                ));
            }
            Ok(m)
        })
        .collect()
}

fn check_qubit_count(n: usize, path: &str) -> Result<(), ConfigError> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(schema(path, format!("must be between 1 and {MAX_QUBITS}, got {n}")));
    }
    Ok(())
}

fn build(raw: RawConfig, document: Value) -> Result<JobConfig, ConfigError> {
    let s = raw.system;
    let n = s.n_qubits;
    check_qubit_count(n, "system.n_qubits")?;
    let rabi = per_qubit(s.rabi, 1.0, n, "system.rabi")?;
    let detuning = per_qubit(s.detuning, 0.0, n, "system.detuning")?;
    let gamma = per_qubit(Some(s.gamma), 0.0, n, "system.gamma")?;
    if rabi[0] <= 0.0 {
        return Err(ConfigError::Unit {
            path: "system.rabi".into(),
            message: format!(
                "the first Rabi frequency sets the unit and must be positive, got {}",
                rabi[0]
            ),
        });
    }
    if rabi.iter().any(|&x| x < 0.0) {
        return Err(schema("system.rabi", "entries must be nonnegative"));
    }
    if gamma.iter().any(|&x| x < 0.0) {
        return Err(schema("system.gamma", "entries must be nonnegative"));
    }
    if !(s.nbar.is_finite() && s.nbar >= 0.0) {
        return Err(schema("system.nbar", format!("must be nonnegative, got {}", s.nbar)));
    }
    if !s.j.is_finite() {
        return Err(schema("system.j", "must be finite"));
    }
    if let Some(w) = s.omega_scale {
        if !(w.is_finite() && w > 0.0) {
            return Err(ConfigError::Unit {
                path: "system.omega_scale".into(),
                message: format!("must be positive, got {w}"),
            });
        }
    }
    let system =
        ChainParams::new(n, rabi, detuning, s.j, gamma, s.nbar).map_err(|e| schema("system", e.to_string()))?;

    let run = match raw.run {
        RawRun::Steady { measures: m } => RunConfig::Steady {
            measures: measures(m, n, "run.measures")?,
        },
        RawRun::Evolve {
            t_grid,
            initial,
            gamma_values,
            measures: m,
        } => {
            let t_grid = grid_values(t_grid, "run.t_grid")?;
            if t_grid[0] != 0.0 {
                return Err(schema("run.t_grid", "must start at 0"));
            }
            if gamma_values.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
                return Err(schema("run.gamma_values", "entries must be nonnegative"));
            }
            let measures = measures(m, n, "run.measures")?;
            if measures.is_empty() {
                return Err(schema("run.measures", "at least one measure is required"));
            }
            RunConfig::Evolve {
                t_grid,
                initial,
                gamma_values,
                measures,
            }
        }
        RawRun::Sweep {
            parameter,
            grid,
            measures: m,
        } => {
            let parameter: SweepParameter = parameter
                .parse()
                .map_err(|e: crate::sweep::SweepError| schema("run.parameter", e.to_string()))?;
            let grid = grid_values(grid, "run.grid")?;
            let max_n = match parameter {
                SweepParameter::NQubits => {
                    for &v in &grid {
                        if v.fract() != 0.0 || v < 1.0 || v > MAX_QUBITS as f64 {
                            return Err(schema(
                                "run.grid",
                                format!("{v} is not a qubit count in 1..={MAX_QUBITS}"),
                            ));
                        }
                    }
                    grid.iter().cloned().fold(f64::INFINITY, f64::min) as usize
                }
                _ => n,
            };
            let measures = measures(m, max_n, "run.measures")?;
            if measures.is_empty() {
                return Err(schema("run.measures", "at least one measure is required"));
            }
            RunConfig::Sweep {
                parameter,
                grid,
                measures,
            }
        }
        RawRun::Verify { r_grid, s: s_ratio } => {
            let r_grid = grid_values(r_grid, "run.r_grid")?;
            if r_grid[0] <= 0.0 {
                return Err(schema("run.r_grid", "noise ratios must be positive"));
            }
            let s_ratio = s_ratio.unwrap_or(system.coupling() / system.rabi()[0]);
            if !(s_ratio.is_finite() && s_ratio > 0.0) {
                return Err(schema("run.s", "coupling ratio must be positive"));
            }
            RunConfig::Verify { r_grid, s: s_ratio }
        }
        RawRun::Enhance { n_list, gamma_interval } => {
            if n_list.is_empty() {
                return Err(schema("run.n_list", "must not be empty"));
            }
            for (k, &m) in n_list.iter().enumerate() {
                check_qubit_count(m, &format!("run.n_list[{k}]"))?;
            }
            let [lo, hi] = gamma_interval;
            if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
                return Err(schema("run.gamma_interval", "must satisfy 0 <= lo < hi"));
            }
            if !system.is_uniform() {
                return Err(schema("system", "enhance mode needs uniform per-qubit parameters"));
            }
            RunConfig::Enhance {
                n_list,
                gamma_interval: (lo, hi),
            }
        }
    };

    let output = match raw.output {
        None => None,
        Some(o) => {
            if o.format != "csv" {
                return Err(schema("output.format", format!("unsupported format `{}`", o.format)));
            }
            o.path
        }
    };

    Ok(JobConfig {
        system,
        omega_scale: s.omega_scale,
        run,
        output,
        document,
    })
}
