//! Dense complex linear algebra for multi-qubit density matrices.
//!
//! Matrices are stored row-major. Composite systems use the computational
//! basis `|q₁q₂…q_N⟩` with subsystem 0 (qubit 1) as the most significant
//! digit, so `kron(a, b)` places `a` on the leading factor.

mod decomp;
mod matrix;

pub use decomp::{eigh, singular_values, sqrt_psd, HermitianEigen, LuFactors};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;

use thiserror::Error;

/// Tolerance for treating a matrix as Hermitian.
pub const HERM_TOL: f64 = 1e-10;
/// Eigenvalues more negative than this make a matrix "not PSD".
pub const PSD_TOL: f64 = 1e-8;
/// Default absolute tolerance for entrywise comparisons.
pub const EQ_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },
    #[error("matrix is singular (zero pivot in column {column})")]
    Singular { column: usize },
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-qubit operators in the `{|0⟩, |1⟩}` basis, with `|0⟩` the state
/// annihilated by `σ₋` and `σ_z|0⟩ = +|0⟩`.
pub mod pauli {
    use super::{c64, ComplexMatrix};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_row_major(2, 2, vec![c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)]).unwrap()
    }

    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    /// `σ₊ = |1⟩⟨0|`.
    pub fn sigma_plus() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap()
    }

    /// `σ₋ = |0⟩⟨1|`.
    pub fn sigma_minus() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

fn check_dims(rho: &ComplexMatrix, dims: &[usize]) -> Result<(), LinalgError> {
    if !rho.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(LinalgError::DimensionMismatch(
            "subsystem dimensions must be nonempty and positive".into(),
        ));
    }
    let total: usize = dims.iter().product();
    if total != rho.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} multiply to {total}, matrix has dimension {}",
            rho.rows()
        )));
    }
    Ok(())
}

/// Mixed-radix digits of `index`, most significant subsystem first.
fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

fn compose(digits: impl Iterator<Item = (usize, usize)>) -> usize {
    digits.fold(0, |acc, (digit, dim)| acc * dim + digit)
}

/// Traces out every subsystem not listed in `keep` (0-based subsystem indices).
///
/// The kept subsystems retain their relative order in the result.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix, LinalgError> {
    check_dims(rho, dims)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.iter().any(|&k| k >= dims.len()) {
        return Err(LinalgError::DimensionMismatch(format!(
            "keep set {keep:?} is empty or out of range for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();

    // Split every full index into (kept part, traced part).
    let split: Vec<(usize, usize)> = (0..rho.rows())
        .map(|i| {
            let d = digits(i, dims);
            (
                compose(keep.iter().map(|&k| (d[k], dims[k]))),
                compose(traced.iter().map(|&k| (d[k], dims[k]))),
            )
        })
        .collect();

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for (i, &(ki, ti)) in split.iter().enumerate() {
        for (j, &(kj, tj)) in split.iter().enumerate() {
            if ti == tj {
                out[(ki, kj)] += rho[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Transposes the indices of one subsystem (0-based), leaving the rest untouched.
pub fn partial_transpose(rho: &ComplexMatrix, dims: &[usize], subsystem: usize) -> Result<ComplexMatrix, LinalgError> {
    check_dims(rho, dims)?;
    if subsystem >= dims.len() {
        return Err(LinalgError::DimensionMismatch(format!(
            "subsystem {subsystem} out of range for {} subsystems",
            dims.len()
        )));
    }
    let all: Vec<Vec<usize>> = (0..rho.rows()).map(|i| digits(i, dims)).collect();
    let swap = |target: &[usize], source: &[usize]| {
        compose(
            target
                .iter()
                .enumerate()
                .map(|(k, &d)| (if k == subsystem { source[k] } else { d }, dims[k])),
        )
    };
    Ok(ComplexMatrix::from_fn(rho.rows(), rho.cols(), |i, j| {
        rho[(swap(&all[i], &all[j]), swap(&all[j], &all[i]))]
    }))
}
