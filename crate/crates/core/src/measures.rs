//! Information-theoretic and dynamical response measures of chain states.
//!
//! Entropies are in bits. Qubit indices are 1-based.

use thiserror::Error;

use crate::dynamics::{DensityMatrix, DynamicsError};
use crate::linalg::{
    eigh, kron, partial_trace, partial_transpose, pauli, singular_values, ComplexMatrix, LinalgError, PSD_TOL,
};

/// Entanglement threshold for eof and the partial-transpose eigenvalue.
pub const ENTANGLEMENT_TOL: f64 = 1e-9;
const IMAG_TOL: f64 = 1e-10;
const EOF_DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("qubit {qubit} out of range for a {n}-qubit state")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("pair measures need two distinct qubits, got ({0}, {0})")]
    SameQubit(usize),
    #[error("state of dimension {0} is not a qubit register")]
    NotQubitRegister(usize),
    #[error("expected a two-qubit state, got dimension {0}")]
    NotTwoQubit(usize),
    #[error("concurrence {0} outside [0, 1]")]
    ConcurrenceDomain(f64),
    #[error("expectation value has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    State(#[from] DynamicsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Z,
}

impl Axis {
    fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => pauli::sigma_x(),
            Axis::Z => pauli::sigma_z(),
        }
    }
}

/// `h(x) = -x log₂ x - (1-x) log₂(1-x)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// `-Σ λ log₂ λ`; eigenvalues at or below zero contribute nothing.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64, MeasureError> {
    let eig = eigh(rho.matrix())?;
    Ok(eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0))
}

fn n_qubits(rho: &DensityMatrix) -> Result<usize, MeasureError> {
    rho.n_qubits().ok_or(MeasureError::NotQubitRegister(rho.dim()))
}

fn check_qubit(qubit: usize, n: usize) -> Result<(), MeasureError> {
    if qubit == 0 || qubit > n {
        return Err(MeasureError::QubitOutOfRange { qubit, n });
    }
    Ok(())
}

/// Reduced state of the listed qubits, kept in ascending order.
pub fn reduced_state(rho: &DensityMatrix, qubits: &[usize]) -> Result<DensityMatrix, MeasureError> {
    let n = n_qubits(rho)?;
    for &q in qubits {
        check_qubit(q, n)?;
    }
    let keep: Vec<usize> = qubits.iter().map(|q| q - 1).collect();
    let reduced = partial_trace(rho.matrix(), &vec![2; n], &keep)?;
    Ok(DensityMatrix::new(reduced)?)
}

fn pair_state(rho: &DensityMatrix, i: usize, j: usize) -> Result<DensityMatrix, MeasureError> {
    if i == j {
        return Err(MeasureError::SameQubit(i));
    }
    reduced_state(rho, &[i, j])
}

/// `I_ij = S(ρ_i) + S(ρ_j) - S(ρ_ij)`, clamped at zero from below.
pub fn mutual_information(rho: &DensityMatrix, i: usize, j: usize) -> Result<f64, MeasureError> {
    let pair = pair_state(rho, i, j)?;
    let si = von_neumann_entropy(&reduced_state(rho, &[i])?)?;
    let sj = von_neumann_entropy(&reduced_state(rho, &[j])?)?;
    let sij = von_neumann_entropy(&pair)?;
    Ok((si + sj - sij).max(0.0))
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<(), MeasureError> {
    if rho.dim() != 4 {
        return Err(MeasureError::NotTwoQubit(rho.dim()));
    }
    Ok(())
}

/// Wootters concurrence `max(0, λ₁-λ₂-λ₃-λ₄)`, where `λ_k` are the descending
/// square roots of the eigenvalues of `√ρ ρ̃ √ρ`, `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
///
/// The `λ_k` are taken as singular values of `Wᵀ (σ_y⊗σ_y) W` with `ρ = W W†`,
/// which avoids square roots of roundoff-level eigenvalues.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64, MeasureError> {
    require_two_qubit(rho)?;
    let eig = eigh(rho.matrix())?;
    if eig.eigenvalues[0] < -PSD_TOL {
        return Err(LinalgError::NotPsd {
            eigenvalue: eig.eigenvalues[0],
        }
        .into());
    }
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|&p| p.max(0.0).sqrt()).collect();
    let w = ComplexMatrix::from_fn(4, 4, |r, c| eig.eigenvectors[(r, c)] * weights[c]);
    let yy = kron(&pauli::sigma_y(), &pauli::sigma_y());
    let tau = &(&w.transpose() * &yy) * &w;
    let l = singular_values(&tau);
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// `E_F = h((1 + √(1-C²))/2)`.
pub fn entanglement_of_formation(c: f64) -> Result<f64, MeasureError> {
    if !(-EOF_DOMAIN_SLACK..=1.0 + EOF_DOMAIN_SLACK).contains(&c) {
        return Err(MeasureError::ConcurrenceDomain(c));
    }
    let c = c.clamp(0.0, 1.0);
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

/// Smallest eigenvalue of the partial transpose over the second qubit.
pub fn min_pt_eigenvalue(rho: &DensityMatrix) -> Result<f64, MeasureError> {
    require_two_qubit(rho)?;
    let pt = partial_transpose(rho.matrix(), &[2, 2], 1)?;
    Ok(eigh(&pt)?.eigenvalues[0])
}

fn expectation(rho: &DensityMatrix, op: &ComplexMatrix) -> Result<f64, MeasureError> {
    let value = (rho.matrix() * op).trace();
    if value.im.abs() > IMAG_TOL {
        return Err(MeasureError::ImaginaryResidue(value.im));
    }
    Ok(value.re)
}

/// `⟨(1/N) Σ_i σ_axis^i⟩`.
pub fn signal(rho: &DensityMatrix, axis: Axis) -> Result<f64, MeasureError> {
    let n = n_qubits(rho)?;
    let op = axis.pauli();
    let mut total = 0.0;
    for q in 1..=n {
        total += expectation(&reduced_state(rho, &[q])?, &op)?;
    }
    Ok(total / n as f64)
}

/// `⟨σ_x⟩` of one qubit's reduced state.
pub fn single_qubit_coherence(rho: &DensityMatrix, qubit: usize) -> Result<f64, MeasureError> {
    expectation(&reduced_state(rho, &[qubit])?, &pauli::sigma_x())
}

/// Bipartite measures of one qubit pair, computed on its reduced state.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMeasures {
    pub pair: (usize, usize),
    pub mutual_information: f64,
    pub eof: f64,
    pub concurrence: f64,
    pub min_pt_eigenvalue: f64,
    /// `mutual_information - eof`.
    pub classical_proxy: f64,
}

impl PairMeasures {
    /// Negative partial transpose, which for two qubits is equivalent to entanglement.
    pub fn is_entangled(&self) -> bool {
        self.min_pt_eigenvalue < -ENTANGLEMENT_TOL
    }
}

pub fn pair_measures(rho: &DensityMatrix, i: usize, j: usize) -> Result<PairMeasures, MeasureError> {
    let pair = pair_state(rho, i, j)?;
    let mutual_information = mutual_information(rho, i, j)?;
    let concurrence = concurrence(&pair)?;
    let eof = entanglement_of_formation(concurrence)?;
    Ok(PairMeasures {
        pair: (i, j),
        mutual_information,
        eof,
        concurrence,
        min_pt_eigenvalue: min_pt_eigenvalue(&pair)?,
        classical_proxy: mutual_information - eof,
    })
}
