//! Steady states and time evolution under a Liouvillian.

use log::debug;
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{eigh, ComplexMatrix, LinalgError, LuFactors, PSD_TOL};
use crate::model::{build_liouvillian, ChainParams, Superoperator};

/// Hermiticity and trace tolerance for [`DensityMatrix`].
pub const STATE_TOL: f64 = 1e-9;
/// Condition estimate beyond which a steady-state solve is rejected.
pub const MAX_CONDITION: f64 = 1e12;

const PERTURBATION: f64 = 1e-8;
const PERTURBATION_LIMIT: f64 = 1e-4;
const NULL_SPACE_REL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("steady state is not unique (null space dimension {null_dim})")]
    NonUniqueSteadyState { null_dim: usize },
    #[error("steady-state solve failed: {0}")]
    SolveFailed(String),
    #[error("required substep {step:.3e} underflows the time span {span:.3e}")]
    StepUnderflow { step: f64, span: f64 },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates and wraps `m`. The stored matrix is the Hermitian part of `m`.
    pub fn new(m: ComplexMatrix) -> Result<Self, DynamicsError> {
        if !m.is_square() {
            return Err(DynamicsError::InvalidState(format!(
                "not square ({}x{})",
                m.rows(),
                m.cols()
            )));
        }
        let defect = m.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(DynamicsError::InvalidState(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(DynamicsError::InvalidState(format!("trace {tr} differs from 1")));
        }
        let m = m.hermitian_part();
        let min_eig = eigh(&m)?.eigenvalues[0];
        if min_eig < -PSD_TOL {
            return Err(DynamicsError::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self(m))
    }

    pub fn pure(psi: &[Complex64]) -> Result<Self, DynamicsError> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || psi.is_empty() {
            return Err(DynamicsError::InvalidState("zero state vector".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&v))
    }

    /// `|index⟩⟨index|`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    /// `|0…0⟩⟨0…0|`, the state every qubit decays to.
    pub fn ground(n_qubits: usize) -> Self {
        Self::basis_state(1 << n_qubits, 0)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    /// Number of qubits, if the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }
}

/// Solves `L(ρ) = 0` with `tr ρ = 1` by a dense solve.
///
/// The population row of `L` (vectorized index `i·(D+1)`) with the smallest
/// infinity norm is replaced by the trace functional. Uniqueness is checked
/// through a condition estimate and the response to a perturbed trace
/// constraint; when either looks suspicious the null space of `L` is measured
/// directly by SVD.
pub fn steady_state(l: &Superoperator) -> Result<DensityMatrix, DynamicsError> {
    let d = l.dim();
    let n = d * d;
    let lmat = l.matrix();

    // Only population rows carry the trace functional as a left null vector.
    let replaced = (0..d)
        .map(|i| i * (d + 1))
        .map(|r| (r, lmat.row(r).iter().map(|z| z.norm()).fold(0.0, f64::max)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        .0;
    let mut a = lmat.clone();
    for c in 0..n {
        a[(replaced, c)] = Complex64::new(0.0, 0.0);
    }
    for i in 0..d {
        a[(replaced, i * (d + 1))] = Complex64::new(1.0, 0.0);
    }
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    b[replaced] = Complex64::new(1.0, 0.0);

    let lu = match LuFactors::factor(&a) {
        Ok(lu) => lu,
        Err(LinalgError::Singular { column }) => {
            let null_dim = null_space_dimension(lmat);
            return Err(if null_dim > 1 {
                DynamicsError::NonUniqueSteadyState { null_dim }
            } else {
                DynamicsError::SolveFailed(format!("zero pivot in column {column}"))
            });
        }
        Err(e) => return Err(e.into()),
    };
    let x = lu.solve(&b);
    let condition = lu.condition_estimate();
    let mut b_perturbed = b.clone();
    b_perturbed[replaced] += PERTURBATION;
    let moved = lu
        .solve(&b_perturbed)
        .iter()
        .zip(&x)
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max);
    let finite = x.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    debug!("steady state: replaced row {replaced}, condition {condition:.3e}, perturbation response {moved:.3e}");

    if !finite || !(condition <= MAX_CONDITION) || !(moved < PERTURBATION_LIMIT) {
        let null_dim = null_space_dimension(lmat);
        if null_dim > 1 {
            return Err(DynamicsError::NonUniqueSteadyState { null_dim });
        }
        if !finite || !(condition <= MAX_CONDITION) {
            return Err(DynamicsError::SolveFailed(format!(
                "condition estimate {condition:.3e}"
            )));
        }
    }

    let residual = l.apply_vec(&x).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale = lmat.frobenius_norm();
    if residual > 1e-10 * scale {
        return Err(DynamicsError::SolveFailed(format!(
            "residual {residual:.3e} exceeds 1e-10 x {scale:.3e}"
        )));
    }
    DensityMatrix::new(ComplexMatrix::from_column_stacked(d, &x)?)
}

/// Steady state of the chain described by `p`.
pub fn steady_state_of(p: &ChainParams) -> Result<DensityMatrix, DynamicsError> {
    steady_state(&build_liouvillian(p))
}

/// Number of singular values of `m` below `NULL_SPACE_REL_TOL · σ_max`.
pub fn null_space_dimension(m: &ComplexMatrix) -> usize {
    let dm = DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)]);
    let sv = dm.singular_values();
    let largest = sv.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 {
        return m.cols();
    }
    sv.iter().filter(|&&s| s <= NULL_SPACE_REL_TOL * largest).count()
}

/// States of a master-equation integration on a time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Substep bound `h ≤ 0.1 / ‖L‖₂`.
    pub max_step: f64,
    /// Largest trace drift removed by renormalization at a grid point.
    pub max_trace_drift: f64,
    /// Max-abs difference of the final state against a half-step rerun.
    pub error_estimate: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory has at least one state")
    }

    /// Per-time values of a state functional.
    pub fn series<E>(&self, f: impl Fn(&DensityMatrix) -> Result<f64, E>) -> Result<Vec<f64>, E> {
        self.states.iter().map(f).collect()
    }
}

/// `t = 0` first, strictly increasing, finite.
fn check_grid(t_grid: &[f64]) -> Result<(), DynamicsError> {
    if t_grid.is_empty() {
        return Err(DynamicsError::InvalidGrid("empty".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(DynamicsError::InvalidGrid(format!(
            "must start at 0, starts at {}",
            t_grid[0]
        )));
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DynamicsError::InvalidGrid(
            "must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn rk4_step(l: &Superoperator, v: &mut [Complex64], h: f64) {
    let axpy = |base: &[Complex64], k: &[Complex64], s: f64| -> Vec<Complex64> {
        base.iter().zip(k).map(|(b, k)| b + k * s).collect()
    };
    let k1 = l.apply_vec(v);
    let k2 = l.apply_vec(&axpy(v, &k1, h / 2.0));
    let k3 = l.apply_vec(&axpy(v, &k2, h / 2.0));
    let k4 = l.apply_vec(&axpy(v, &k3, h));
    for (i, x) in v.iter_mut().enumerate() {
        *x += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
    }
}

struct RawRun {
    states: Vec<ComplexMatrix>,
    max_trace_drift: f64,
}

fn integrate(rho0: &DensityMatrix, l: &Superoperator, t_grid: &[f64], max_step: f64) -> RawRun {
    let d = l.dim();
    let mut v = rho0.matrix().to_column_stacked();
    let mut states = vec![rho0.matrix().clone()];
    let mut max_trace_drift: f64 = 0.0;
    for w in t_grid.windows(2) {
        let dt = w[1] - w[0];
        let substeps = (dt / max_step).ceil().max(1.0) as usize;
        let h = dt / substeps as f64;
        for _ in 0..substeps {
            rk4_step(l, &mut v, h);
        }
        let tr: Complex64 = (0..d).map(|i| v[i * (d + 1)]).sum();
        let drift = (tr - Complex64::new(1.0, 0.0)).norm();
        max_trace_drift = max_trace_drift.max(drift);
        debug!("t = {:.6}: trace drift {drift:.3e} over {substeps} substeps", w[1]);
        v.iter_mut().for_each(|z| *z /= tr);
        states.push(ComplexMatrix::from_column_stacked(d, &v).expect("square state"));
    }
    RawRun {
        states,
        max_trace_drift,
    }
}

/// Integrates `dρ/dt = L(ρ)` with fixed-substep classical RK4.
///
/// Substeps satisfy `h·‖L‖₂ ≤ 0.1`, with `‖L‖₂` from 20 power iterations.
/// The trace is renormalized at every grid point and the removed drift logged.
pub fn evolve(rho0: &DensityMatrix, l: &Superoperator, t_grid: &[f64]) -> Result<Trajectory, DynamicsError> {
    check_grid(t_grid)?;
    if rho0.dim() != l.dim() {
        return Err(DynamicsError::InvalidState(format!(
            "initial state dimension {} does not match Liouvillian dimension {}",
            rho0.dim(),
            l.dim()
        )));
    }
    let span = *t_grid.last().unwrap();
    let norm = l.spectral_norm_estimate(20);
    let max_step = if norm > 0.0 { 0.1 / norm } else { span.max(1.0) };
    if span > 0.0 && max_step < 1e-12 * span {
        return Err(DynamicsError::StepUnderflow { step: max_step, span });
    }

    let run = integrate(rho0, l, t_grid, max_step);
    let error_estimate = if t_grid.len() > 1 {
        let fine = integrate(rho0, l, t_grid, max_step / 2.0);
        run.states.last().unwrap().max_abs_diff(fine.states.last().unwrap())
    } else {
        0.0
    };
    let states = run
        .states
        .into_iter()
        .map(DensityMatrix::new)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Trajectory {
        times: t_grid.to_vec(),
        states,
        max_step,
        max_trace_drift: run.max_trace_drift,
        error_estimate,
    })
}

/// `n` evenly spaced points on `[0, t_end]`.
pub fn linear_time_grid(t_end: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    (0..n).map(|k| t_end * k as f64 / (n - 1) as f64).collect()
}
