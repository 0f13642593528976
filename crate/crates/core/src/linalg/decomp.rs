use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, HERM_TOL, PSD_TOL};

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| v[(r, k)] * v[(c, k)].conj() * weights[k]).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "eigh needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let defect = h.hermiticity_defect();
    if defect > HERM_TOL {
        return Err(LinalgError::NotHermitian { defect });
    }
    let n = h.rows();
    let sym = h.hermitian_part();
    let eig = DMatrix::from_fn(n, n, |r, c| sym[(r, c)]).symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    Ok(HermitianEigen {
        eigenvalues: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        eigenvectors: ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]),
    })
}

/// Principal square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero.
pub fn sqrt_psd(rho: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let eig = eigh(rho)?;
    if let Some(&worst) = eig.eigenvalues.first() {
        if worst < -PSD_TOL {
            return Err(LinalgError::NotPsd { eigenvalue: worst });
        }
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0).sqrt()))
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let a = DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)]);
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// LU factorization with partial pivoting, `P·A = L·U`.
///
/// `L` (unit diagonal) and `U` share one row-major buffer.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    /// Row `i` of `P·A` is row `perm[i]` of `A`.
    perm: Vec<usize>,
    norm1: f64,
}

impl LuFactors {
    pub fn factor(a: &ComplexMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::DimensionMismatch(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let norm1 = (0..n)
            .map(|c| (0..n).map(|r| a[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (pivot_row, pivot_abs) =
                (k..n)
                    .map(|r| (r, lu[r * n + k].norm()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs == 0.0 {
                return Err(LinalgError::Singular { column: k });
            }
            if pivot_row != k {
                for c in 0..n {
                    lu.swap(k * n + c, pivot_row * n + c);
                }
                perm.swap(k, pivot_row);
            }
            let pivot = lu[k * n + k];
            let (head, tail) = lu.split_at_mut((k + 1) * n);
            let pivot_tail = &head[k * n + k + 1..(k + 1) * n];
            for row in tail.chunks_exact_mut(n) {
                let factor = row[k] / pivot;
                row[k] = factor;
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                for (x, &p) in row[k + 1..].iter_mut().zip(pivot_tail) {
                    *x -= factor * p;
                }
            }
        }
        Ok(Self { n, lu, perm, norm1 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Smallest pivot modulus relative to the largest.
    pub fn pivot_ratio(&self) -> f64 {
        let pivots = (0..self.n).map(|k| self.lu[k * self.n + k].norm());
        let (lo, hi) = pivots.fold((f64::INFINITY, 0.0_f64), |(lo, hi), p| (lo.min(p), hi.max(p)));
        if hi == 0.0 {
            0.0
        } else {
            lo / hi
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n, "right-hand side length");
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: Complex64 = row.iter().zip(&x[..i]).map(|(l, y)| l * y).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s: Complex64 = row.iter().zip(&x[i + 1..]).map(|(u, y)| u * y).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }

    /// Solves `A† y = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n, "right-hand side length");
        let n = self.n;
        // U† w = b (forward), then L† z = w (backward), then y = Pᵀ z.
        let mut w = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let u = self.lu[k * n + i].conj();
                let wk = w[k];
                w[i] -= u * wk;
            }
            w[i] /= self.lu[i * n + i].conj();
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let l = self.lu[k * n + i].conj();
                let wk = w[k];
                w[i] -= l * wk;
            }
        }
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for (i, &p) in self.perm.iter().enumerate() {
            y[p] = w[i];
        }
        y
    }

    /// Estimate of the 1-norm condition number `‖A‖₁·‖A⁻¹‖₁` (Hager's method).
    pub fn condition_estimate(&self) -> f64 {
        let n = self.n;
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut estimate = 0.0;
        for _ in 0..5 {
            let y = self.solve(&x);
            estimate = y.iter().map(|z| z.norm()).sum::<f64>();
            if !estimate.is_finite() {
                return f64::INFINITY;
            }
            let xi: Vec<Complex64> = y
                .iter()
                .map(|z| {
                    let m = z.norm();
                    if m == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        z / m
                    }
                })
                .collect();
            let z = self.solve_adjoint(&xi);
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(k, v)| (k, v.norm()))
                .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if zmax <= ztx {
                break;
            }
            x = vec![Complex64::new(0.0, 0.0); n];
            x[j] = Complex64::new(1.0, 0.0);
        }
        estimate * self.norm1
    }
}

#[cfg(test)]
mod tests {
    use super::super::{c64, pauli};
    use super::*;

    #[test]
    fn singular_values_of_a_scaled_unitary() {
        let m = pauli::sigma_y().scale_real(3.0);
        assert_eq!(singular_values(&m).len(), 2);
        for s in singular_values(&m) {
            assert!((s - 3.0).abs() < 1e-14);
        }
        let d = ComplexMatrix::from_diag(&[0.5, -2.0, 1.0]);
        let s = singular_values(&d);
        assert!((s[0] - 2.0).abs() < 1e-15 && (s[1] - 1.0).abs() < 1e-15 && (s[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eigh_of_diagonal_sorts_ascending() {
        let eig = eigh(&ComplexMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(eig.eigenvalues.len(), 3);
        for (a, b) in eig.eigenvalues.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn eigh_of_sigma_x() {
        let eig = eigh(&pauli::sigma_x()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(eigh(&m), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_psd_small_cases() {
        let i4 = ComplexMatrix::identity(4);
        assert!(sqrt_psd(&i4).unwrap().approx_eq(&i4, 1e-14));
        let r = sqrt_psd(&ComplexMatrix::from_diag(&[4.0, 9.0])).unwrap();
        assert!(r.approx_eq(&ComplexMatrix::from_diag(&[2.0, 3.0]), 1e-14));
    }

    #[test]
    fn sqrt_psd_clamps_tiny_negatives_and_rejects_large_ones() {
        let r = sqrt_psd(&ComplexMatrix::from_diag(&[1.0, -1e-11])).unwrap();
        assert!(r.approx_eq(&ComplexMatrix::from_diag(&[1.0, 0.0]), 1e-14));
        assert!(matches!(
            sqrt_psd(&ComplexMatrix::from_diag(&[1.0, -1e-6])),
            Err(LinalgError::NotPsd { .. })
        ));
    }

    #[test]
    fn lu_solves_and_adjoint_solves() {
        let a = ComplexMatrix::from_row_major(
            3,
            3,
            vec![
                c64(0.0, 1.0),
                c64(2.0, 0.0),
                c64(1.0, -1.0),
                c64(4.0, 0.0),
                c64(0.5, 0.5),
                c64(0.0, 0.0),
                c64(1.0, 0.0),
                c64(-1.0, 2.0),
                c64(3.0, 0.0),
            ],
        )
        .unwrap();
        let b = vec![c64(1.0, 0.0), c64(0.0, 2.0), c64(-1.0, 1.0)];
        let lu = LuFactors::factor(&a).unwrap();
        let x = lu.solve(&b);
        let back = a.matvec(&x).unwrap();
        for (p, q) in back.iter().zip(&b) {
            assert!((p - q).norm() < 1e-13);
        }
        let y = lu.solve_adjoint(&b);
        let back = a.adjoint().matvec(&y).unwrap();
        for (p, q) in back.iter().zip(&b) {
            assert!((p - q).norm() < 1e-13);
        }
    }

    #[test]
    fn lu_flags_singular_matrices() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        let singular = match LuFactors::factor(&a) {
            Err(LinalgError::Singular { .. }) => true,
            Ok(lu) => lu.condition_estimate() > 1e12,
            Err(e) => panic!("{e}"),
        };
        assert!(singular);
    }

    #[test]
    fn condition_estimate_of_diagonal_is_exact() {
        let lu = LuFactors::factor(&ComplexMatrix::from_diag(&[1.0, 1e-3, 10.0])).unwrap();
        assert!((lu.condition_estimate() - 1e4).abs() < 1e-6);
    }
}
