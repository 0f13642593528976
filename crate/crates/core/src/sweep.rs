//! Parameter sweeps, peak search and threshold location over steady states.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{steady_state_of, DensityMatrix, DynamicsError};
use crate::measures::{self, Axis, MeasureError};
use crate::model::{ChainParams, ModelError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("no sign change of the partial-transpose eigenvalue ({lower:.3e} at the lower end, {upper:.3e} at the upper end)")]
    NoSignChange { lower: f64, upper: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Which chain parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// The decay rate of every qubit.
    GammaAll,
    Nbar,
    /// Coupling `J`.
    Coupling,
    NQubits,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::GammaAll => "gamma_all",
            SweepParameter::Nbar => "nbar",
            SweepParameter::Coupling => "j",
            SweepParameter::NQubits => "n_qubits",
        }
    }

    /// Chain parameters with this parameter set to `value`.
    pub fn apply(self, base: &ChainParams, value: f64) -> Result<ChainParams, SweepError> {
        Ok(match self {
            SweepParameter::GammaAll => base.with_gamma_all(value)?,
            SweepParameter::Nbar => base.with_nbar(value)?,
            SweepParameter::Coupling => base.with_coupling(value)?,
            SweepParameter::NQubits => base.with_n_qubits(as_qubit_count(value)?)?,
        })
    }
}

impl FromStr for SweepParameter {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gamma_all" => Ok(SweepParameter::GammaAll),
            "nbar" => Ok(SweepParameter::Nbar),
            "j" => Ok(SweepParameter::Coupling),
            "n_qubits" => Ok(SweepParameter::NQubits),
            other => Err(SweepError::InvalidSpec(format!("unknown sweep parameter `{other}`"))),
        }
    }
}

fn as_qubit_count(value: f64) -> Result<usize, SweepError> {
    if value.fract() != 0.0 || !(1.0..=12.0).contains(&value) {
        return Err(SweepError::InvalidSpec(format!("{value} is not a valid qubit count")));
    }
    Ok(value as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Explicit(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        points: usize,
        scale: GridScale,
    },
}

impl Grid {
    pub fn linear(min: f64, max: f64, points: usize) -> Self {
        Grid::Range {
            min,
            max,
            points,
            scale: GridScale::Linear,
        }
    }

    /// Grid values; at least two, finite and strictly increasing.
    pub fn values(&self) -> Result<Vec<f64>, SweepError> {
        let values = match *self {
            Grid::Explicit(ref v) => v.clone(),
            Grid::Range {
                min,
                max,
                points,
                scale,
            } => {
                if points < 2 {
                    return Err(SweepError::InvalidSpec("grid needs at least two points".into()));
                }
                let frac = |k: usize| k as f64 / (points - 1) as f64;
                match scale {
                    GridScale::Linear => (0..points).map(|k| min + (max - min) * frac(k)).collect(),
                    GridScale::Log => {
                        if !(min > 0.0) {
                            return Err(SweepError::InvalidSpec("log grid needs a positive minimum".into()));
                        }
                        let (a, b) = (min.ln(), max.ln());
                        (0..points).map(|k| (a + (b - a) * frac(k)).exp()).collect()
                    }
                }
            }
        };
        if values.len() < 2 {
            return Err(SweepError::InvalidSpec("grid needs at least two points".into()));
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SweepError::InvalidSpec(
                "grid must be finite and strictly increasing".into(),
            ));
        }
        Ok(values)
    }
}

/// A scalar response of a chain state. Qubit indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    SignalX,
    SignalZ,
    MutualInformation(usize, usize),
    Eof(usize, usize),
    MinPtEig(usize, usize),
    Coherence(usize),
    ClassicalProxy(usize, usize),
}

impl Measure {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64, MeasureError> {
        match *self {
            Measure::SignalX => measures::signal(rho, Axis::X),
            Measure::SignalZ => measures::signal(rho, Axis::Z),
            Measure::MutualInformation(i, j) => measures::mutual_information(rho, i, j),
            Measure::Eof(i, j) => {
                let pair = measures::reduced_state(rho, &pair_or_err(i, j)?)?;
                measures::entanglement_of_formation(measures::concurrence(&pair)?)
            }
            Measure::MinPtEig(i, j) => measures::min_pt_eigenvalue(&measures::reduced_state(rho, &pair_or_err(i, j)?)?),
            Measure::Coherence(i) => measures::single_qubit_coherence(rho, i),
            Measure::ClassicalProxy(i, j) => Ok(measures::pair_measures(rho, i, j)?.classical_proxy),
        }
    }

    /// Largest qubit index referenced.
    pub fn max_qubit(&self) -> usize {
        match *self {
            Measure::SignalX | Measure::SignalZ => 1,
            Measure::Coherence(i) => i,
            Measure::MutualInformation(i, j)
            | Measure::Eof(i, j)
            | Measure::MinPtEig(i, j)
            | Measure::ClassicalProxy(i, j) => i.max(j),
        }
    }

    fn check(&self, n_qubits: usize) -> Result<(), SweepError> {
        let min_qubit = match *self {
            Measure::SignalX | Measure::SignalZ => 1,
            Measure::Coherence(i) => i,
            Measure::MutualInformation(i, j)
            | Measure::Eof(i, j)
            | Measure::MinPtEig(i, j)
            | Measure::ClassicalProxy(i, j) => {
                if i == j {
                    return Err(SweepError::InvalidSpec(format!(
                        "measure `{self}` needs two distinct qubits"
                    )));
                }
                i.min(j)
            }
        };
        if min_qubit == 0 || self.max_qubit() > n_qubits {
            return Err(SweepError::InvalidSpec(format!(
                "measure `{self}` is out of range for {n_qubits} qubits"
            )));
        }
        Ok(())
    }
}

fn pair_or_err(i: usize, j: usize) -> Result<[usize; 2], MeasureError> {
    if i == j {
        return Err(MeasureError::SameQubit(i));
    }
    Ok([i.min(j), i.max(j)])
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::SignalX => write!(f, "signal_x"),
            Measure::SignalZ => write!(f, "signal_z"),
            Measure::MutualInformation(i, j) => write!(f, "mutual_information:{i}:{j}"),
            Measure::Eof(i, j) => write!(f, "eof:{i}:{j}"),
            Measure::MinPtEig(i, j) => write!(f, "min_pt_eig:{i}:{j}"),
            Measure::Coherence(i) => write!(f, "coherence:{i}"),
            Measure::ClassicalProxy(i, j) => write!(f, "classical_proxy:{i}:{j}"),
        }
    }
}

impl FromStr for Measure {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SweepError::InvalidSpec(format!("unknown measure descriptor `{s}`"));
        let mut parts = s.split(':');
        let name = parts.next().ok_or_else(bad)?;
        let indices: Vec<usize> = parts
            .map(|p| p.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        match (name, indices.as_slice()) {
            ("signal_x", []) => Ok(Measure::SignalX),
            ("signal_z", []) => Ok(Measure::SignalZ),
            ("mutual_information", &[i, j]) => Ok(Measure::MutualInformation(i, j)),
            ("eof", &[i, j]) => Ok(Measure::Eof(i, j)),
            ("min_pt_eig", &[i, j]) => Ok(Measure::MinPtEig(i, j)),
            ("coherence", &[i]) => Ok(Measure::Coherence(i)),
            ("classical_proxy", &[i, j]) => Ok(Measure::ClassicalProxy(i, j)),
            _ => Err(bad()),
        }
    }
}

/// Declarative description of a one-parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ChainParams,
    pub parameter: SweepParameter,
    pub grid: Grid,
    pub measures: Vec<Measure>,
}

impl SweepSpec {
    /// Checks the grid and that every measure fits every chain on the grid.
    pub fn validate(&self) -> Result<Vec<f64>, SweepError> {
        let values = self.grid.values()?;
        if self.measures.is_empty() {
            return Err(SweepError::InvalidSpec("no measures requested".into()));
        }
        let sizes: Vec<usize> = match self.parameter {
            SweepParameter::NQubits => {
                if !self.base.is_uniform() {
                    return Err(SweepError::Model(ModelError::NonUniform));
                }
                values.iter().map(|&v| as_qubit_count(v)).collect::<Result<_, _>>()?
            }
            _ => vec![self.base.n_qubits()],
        };
        for &n in &sizes {
            for m in &self.measures {
                m.check(n)?;
            }
        }
        Ok(values)
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRecord {
    pub parameter_value: f64,
    /// In the order of [`SweepSpec::measures`]; empty when the point failed.
    pub values: Vec<(Measure, f64)>,
    pub failure: Option<String>,
}

impl MeasureRecord {
    pub fn get(&self, measure: &Measure) -> Option<f64> {
        self.values.iter().find(|(m, _)| m == measure).map(|&(_, v)| v)
    }

    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }
}

fn evaluate_point(spec: &SweepSpec, value: f64) -> Result<Vec<(Measure, f64)>, SweepError> {
    let params = spec.parameter.apply(&spec.base, value)?;
    let rho = steady_state_of(&params)?;
    spec.measures
        .iter()
        .map(|m| {
            let v = m.evaluate(&rho)?;
            if !v.is_finite() {
                return Err(SweepError::InvalidSpec(format!(
                    "measure `{m}` is not finite at {value}"
                )));
            }
            Ok((*m, v))
        })
        .collect()
}

/// Steady-state measures at every grid point, in grid order.
///
/// Points are evaluated in parallel. A point whose steady state or measures
/// cannot be computed yields a record with `failure` set instead of aborting.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<MeasureRecord>, SweepError> {
    let values = spec.validate()?;
    Ok(values
        .par_iter()
        .map(|&value| match evaluate_point(spec, value) {
            Ok(values) => MeasureRecord {
                parameter_value: value,
                values,
                failure: None,
            },
            Err(e) => MeasureRecord {
                parameter_value: value,
                values: Vec::new(),
                failure: Some(e.to_string()),
            },
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakResult {
    pub location: f64,
    pub value: f64,
    /// The maximum lies strictly inside the interval.
    pub interior: bool,
}

const BRACKET_POINTS: usize = 32;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `objective` over `[lo, hi]`: a 32-point scan brackets the
/// largest sample, then golden-section search refines it to width `tol`.
pub fn try_find_peak<E, F>(objective: F, (lo, hi): (f64, f64), tol: f64) -> Result<PeakResult, E>
where
    F: Fn(f64) -> Result<f64, E> + Sync,
    E: Send,
{
    assert!(lo < hi, "peak search interval must be nondegenerate");
    assert!(tol > 0.0, "tolerance must be positive");
    let xs: Vec<f64> = (0..BRACKET_POINTS)
        .map(|k| lo + (hi - lo) * k as f64 / (BRACKET_POINTS - 1) as f64)
        .collect();
    let ys = xs.par_iter().map(|&x| objective(x)).collect::<Result<Vec<f64>, E>>()?;
    let best = (0..BRACKET_POINTS).fold(0, |b, k| if ys[k] > ys[b] { k } else { b });
    if best == 0 || best == BRACKET_POINTS - 1 {
        return Ok(PeakResult {
            location: xs[best],
            value: ys[best],
            interior: false,
        });
    }

    let (mut a, mut b) = (xs[best - 1], xs[best + 1]);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (objective(c)?, objective(d)?);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = objective(d)?;
        }
    }
    let (mut location, mut value) = if fc >= fd { (c, fc) } else { (d, fd) };
    if ys[best] > value {
        location = xs[best];
        value = ys[best];
    }
    Ok(PeakResult {
        location,
        value,
        interior: value >= ys[0] && value >= ys[BRACKET_POINTS - 1],
    })
}

/// Infallible form of [`try_find_peak`].
pub fn find_peak(objective: impl Fn(f64) -> f64 + Sync, interval: (f64, f64), tol: f64) -> PeakResult {
    try_find_peak::<std::convert::Infallible, _>(|x| Ok(objective(x)), interval, tol)
        .unwrap_or_else(|never| match never {})
}

/// Smallest partial-transpose eigenvalue of the pair `(i, j)` in the steady
/// state with every decay rate set to `gamma`.
pub fn pair_pt_eigenvalue(base: &ChainParams, (i, j): (usize, usize), gamma: f64) -> Result<f64, SweepError> {
    let rho = steady_state_of(&base.with_gamma_all(gamma)?)?;
    Ok(Measure::MinPtEig(i, j).evaluate(&rho)?)
}

/// Bisects on the uniform decay rate for the separable/entangled crossing of a pair.
pub fn find_ppt_threshold(
    base: &ChainParams,
    pair: (usize, usize),
    (lo, hi): (f64, f64),
    tol: f64,
) -> Result<f64, SweepError> {
    Measure::MinPtEig(pair.0, pair.1).check(base.n_qubits())?;
    if !(lo < hi && tol > 0.0) {
        return Err(SweepError::InvalidSpec(
            "threshold search needs lo < hi and tol > 0".into(),
        ));
    }
    let entangled = |g: f64| -> Result<(bool, f64), SweepError> {
        let v = pair_pt_eigenvalue(base, pair, g)?;
        Ok((v < 0.0, v))
    };
    let (mut a, mut b) = (lo, hi);
    let ((ea, va), (eb, vb)) = (entangled(a)?, entangled(b)?);
    if ea == eb {
        return Err(SweepError::NoSignChange { lower: va, upper: vb });
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if entangled(mid)?.0 == ea {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Peak single-qubit response of one chain length.
#[derive(Debug, Clone, PartialEq)]
pub struct EnhancementRow {
    pub n_qubits: usize,
    pub peak: PeakResult,
}

/// Location tolerance used by [`array_enhancement`].
pub const ENHANCEMENT_TOL: f64 = 1e-6;

/// For each chain length, the decay rate maximizing `⟨σ_x⟩` of qubit 1 and that maximum.
pub fn array_enhancement(
    n_list: &[usize],
    base: &ChainParams,
    gamma_interval: (f64, f64),
) -> Result<Vec<EnhancementRow>, SweepError> {
    if !base.is_uniform() {
        return Err(SweepError::Model(ModelError::NonUniform));
    }
    if !(gamma_interval.0 >= 0.0 && gamma_interval.0 < gamma_interval.1) {
        return Err(SweepError::InvalidSpec(
            "decay-rate interval must satisfy 0 <= lo < hi".into(),
        ));
    }
    let mut sizes = n_list.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|n| {
            let params = base.with_n_qubits(n)?;
            let peak = try_find_peak(
                |g| {
                    let rho = steady_state_of(&params.with_gamma_all(g)?)?;
                    Ok::<_, SweepError>(measures::single_qubit_coherence(&rho, 1)?)
                },
                gamma_interval,
                ENHANCEMENT_TOL,
            )?;
            Ok(EnhancementRow { n_qubits: n, peak })
        })
        .collect()
}
