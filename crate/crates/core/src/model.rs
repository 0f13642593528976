//! Hamiltonian, jump operators and Liouvillian of a driven, dissipatively
//! coupled qubit chain.
//!
//! All rates and frequencies are dimensionless, measured in units of the
//! first qubit's Rabi frequency. Qubit sites are 1-based.
//!
//! Conventions:
//! - `σ_z|0⟩ = +|0⟩`, `σ₊ = |1⟩⟨0|`, so `|0⟩` is the damped-to state.
//! - The coherent part is `H = -Σ (δ_i/2) σ_z^i + J Σ σ_z^i σ_z^{i+1} + Σ Ω_i σ_x^i`
//!   on an open chain. This sign of the coupling term reproduces the closed
//!   two-qubit steady state entrywise; the opposite sign yields its complex
//!   conjugate up to a `σ_z⊗σ_z` relabeling.
//! - Each qubit contributes the jump pairs `(Γ_i(n̄+1), σ₋^i)` and `(Γ_i n̄, σ₊^i)`.
//!   The dissipator weights each by twice its rate, so a lone excited qubit
//!   decays with population rate `2Γ` at zero temperature.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{kron, pauli, ComplexMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("site {site} out of range for a chain of {n} qubits")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("operation requires uniform per-qubit parameters")]
    NonUniform,
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ModelError {
    ModelError::InvalidParameter {
        field,
        reason: reason.into(),
    }
}

/// Physical specification of an `N`-qubit chain in interaction-picture units.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainParams {
    n_qubits: usize,
    rabi: Vec<f64>,
    detuning: Vec<f64>,
    coupling: f64,
    gamma: Vec<f64>,
    nbar: f64,
}

impl ChainParams {
    pub fn new(
        n_qubits: usize,
        rabi: Vec<f64>,
        detuning: Vec<f64>,
        coupling: f64,
        gamma: Vec<f64>,
        nbar: f64,
    ) -> Result<Self, ModelError> {
        let p = Self {
            n_qubits,
            rabi,
            detuning,
            coupling,
            gamma,
            nbar,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same drive, detuning and decay rate on every qubit.
    pub fn uniform(
        n_qubits: usize,
        rabi: f64,
        detuning: f64,
        coupling: f64,
        gamma: f64,
        nbar: f64,
    ) -> Result<Self, ModelError> {
        Self::new(
            n_qubits,
            vec![rabi; n_qubits],
            vec![detuning; n_qubits],
            coupling,
            vec![gamma; n_qubits],
            nbar,
        )
    }

    /// Resonant, unit-drive chain parameterized by `r = Γ/Ω` and `s = J/Ω`.
    pub fn resonant(n_qubits: usize, s: f64, r: f64, nbar: f64) -> Result<Self, ModelError> {
        Self::uniform(n_qubits, 1.0, 0.0, s, r, nbar)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let n = self.n_qubits;
        if n == 0 {
            return Err(invalid("n_qubits", "must be at least 1"));
        }
        for (field, values) in [
            ("rabi", &self.rabi),
            ("detuning", &self.detuning),
            ("gamma", &self.gamma),
        ] {
            if values.len() != n {
                return Err(invalid(field, format!("expected {n} entries, got {}", values.len())));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(invalid(field, "entries must be finite"));
            }
        }
        if self.rabi.iter().any(|&v| v < 0.0) {
            return Err(invalid("rabi", "entries must be nonnegative"));
        }
        if self.gamma.iter().any(|&v| v < 0.0) {
            return Err(invalid("gamma", "entries must be nonnegative"));
        }
        if !self.coupling.is_finite() {
            return Err(invalid("j", "must be finite"));
        }
        if !(self.nbar.is_finite() && self.nbar >= 0.0) {
            return Err(invalid("nbar", "must be finite and nonnegative"));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Hilbert-space dimension `2^N`.
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn rabi(&self) -> &[f64] {
        &self.rabi
    }

    pub fn detuning(&self) -> &[f64] {
        &self.detuning
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn is_uniform(&self) -> bool {
        let same = |v: &[f64]| v.iter().all(|&x| x == v[0]);
        same(&self.rabi) && same(&self.detuning) && same(&self.gamma)
    }

    pub fn with_gamma_all(&self, gamma: f64) -> Result<Self, ModelError> {
        Self::new(
            self.n_qubits,
            self.rabi.clone(),
            self.detuning.clone(),
            self.coupling,
            vec![gamma; self.n_qubits],
            self.nbar,
        )
    }

    pub fn with_nbar(&self, nbar: f64) -> Result<Self, ModelError> {
        let mut p = self.clone();
        p.nbar = nbar;
        p.validate()?;
        Ok(p)
    }

    pub fn with_coupling(&self, coupling: f64) -> Result<Self, ModelError> {
        let mut p = self.clone();
        p.coupling = coupling;
        p.validate()?;
        Ok(p)
    }

    /// Resizes a uniform chain.
    pub fn with_n_qubits(&self, n_qubits: usize) -> Result<Self, ModelError> {
        if !self.is_uniform() {
            return Err(ModelError::NonUniform);
        }
        Self::uniform(
            n_qubits,
            self.rabi[0],
            self.detuning[0],
            self.coupling,
            self.gamma[0],
            self.nbar,
        )
    }

    /// Divides every rate and frequency by `omega`.
    pub fn rescaled(&self, omega: f64) -> Result<Self, ModelError> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid("omega", "rescaling frequency must be positive"));
        }
        let div = |v: &[f64]| v.iter().map(|x| x / omega).collect();
        Self::new(
            self.n_qubits,
            div(&self.rabi),
            div(&self.detuning),
            self.coupling / omega,
            div(&self.gamma),
            self.nbar,
        )
    }
}

/// One dissipative channel: `rate` is the master-equation coefficient of `operator`.
#[derive(Debug, Clone)]
pub struct JumpTerm {
    pub rate: f64,
    pub operator: ComplexMatrix,
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on the 1-based `site`.
pub fn embed(op: &ComplexMatrix, site: usize, n: usize) -> Result<ComplexMatrix, ModelError> {
    if site == 0 || site > n {
        return Err(ModelError::SiteOutOfRange { site, n });
    }
    let left = ComplexMatrix::identity(1 << (site - 1));
    let right = ComplexMatrix::identity(1 << (n - site));
    Ok(kron(&kron(&left, op), &right))
}

pub fn build_h_coh(p: &ChainParams) -> ComplexMatrix {
    let n = p.n_qubits;
    let (sz, sx) = (pauli::sigma_z(), pauli::sigma_x());
    let site = |op: &ComplexMatrix, i: usize| embed(op, i, n).expect("site within chain");
    let mut h = ComplexMatrix::zeros(p.dim(), p.dim());
    for i in 1..=n {
        h = &h + &site(&sz, i).scale_real(-p.detuning[i - 1] / 2.0);
        h = &h + &site(&sx, i).scale_real(p.rabi[i - 1]);
    }
    for i in 1..n {
        h = &h + &(&site(&sz, i) * &site(&sz, i + 1)).scale_real(p.coupling);
    }
    h
}

/// Two terms per qubit, in qubit order: `(Γ_i(n̄+1), σ₋^i)` then `(Γ_i n̄, σ₊^i)`.
pub fn build_jump_terms(p: &ChainParams) -> Vec<JumpTerm> {
    let n = p.n_qubits;
    let (lower, raise) = (pauli::sigma_minus(), pauli::sigma_plus());
    (1..=n)
        .flat_map(|i| {
            let g = p.gamma[i - 1];
            [
                JumpTerm {
                    rate: g * (p.nbar + 1.0),
                    operator: embed(&lower, i, n).expect("site within chain"),
                },
                JumpTerm {
                    rate: g * p.nbar,
                    operator: embed(&raise, i, n).expect("site within chain"),
                },
            ]
        })
        .collect()
}

/// Accumulates `(row, col, value)` entries; duplicates are summed on compression.
#[derive(Debug, Clone, Default)]
struct Triplets {
    entries: Vec<(usize, usize, Complex64)>,
}

impl Triplets {
    /// Adds `scale · (a ⊗ b)`, skipping zero entries of either factor.
    fn add_kron(&mut self, a: &ComplexMatrix, b: &ComplexMatrix, scale: Complex64) {
        let nz = |m: &ComplexMatrix| -> Vec<(usize, usize, Complex64)> {
            (0..m.rows())
                .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
                .map(|(r, c)| (r, c, m[(r, c)]))
                .filter(|(_, _, z)| z.re != 0.0 || z.im != 0.0)
                .collect()
        };
        let (br, bc) = (b.rows(), b.cols());
        let b_nz = nz(b);
        for (ar, ac, av) in nz(a) {
            for &(r, c, bv) in &b_nz {
                self.entries.push((ar * br + r, ac * bc + c, scale * av * bv));
            }
        }
    }

    fn into_csr(mut self, n: usize) -> Csr {
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::new();
        let mut vals: Vec<Complex64> = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Csr {
            n,
            row_ptr,
            col_idx,
            vals,
        }
    }
}

/// Compressed sparse rows.
#[derive(Debug, Clone)]
struct Csr {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<Complex64>,
}

impl Csr {
    fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|r| {
                let span = self.row_ptr[r]..self.row_ptr[r + 1];
                self.col_idx[span.clone()]
                    .iter()
                    .zip(&self.vals[span])
                    .map(|(&c, v)| v * x[c])
                    .sum()
            })
            .collect()
    }

    fn adjoint_matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (r, &xr) in x.iter().enumerate().take(self.n) {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                y[self.col_idx[k]] += self.vals[k].conj() * xr;
            }
        }
        y
    }

    fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.n, self.n);
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.col_idx[k])] = self.vals[k];
            }
        }
        m
    }
}

/// Liouvillian acting on column-stacked density matrices: `vec(ρ)[c·D + r] = ρ[r, c]`.
#[derive(Debug, Clone)]
pub struct Superoperator {
    dim: usize,
    sparse: Csr,
    dense: ComplexMatrix,
}

impl Superoperator {
    /// Hilbert-space dimension `D`; the matrix itself is `D² × D²`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.dense
    }

    pub fn nnz(&self) -> usize {
        self.sparse.vals.len()
    }

    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim * self.dim, "vectorized state length");
        self.sparse.matvec(v)
    }

    pub fn apply_adjoint_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim * self.dim, "vectorized state length");
        self.sparse.adjoint_matvec(v)
    }

    /// `L(ρ)` for a `D × D` operator.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(rho.rows(), self.dim, "operator dimension");
        let out = self.apply_vec(&rho.to_column_stacked());
        ComplexMatrix::from_column_stacked(self.dim, &out).expect("square output")
    }

    /// Largest singular value estimated by power iteration on `L†L`.
    pub fn spectral_norm_estimate(&self, iterations: usize) -> f64 {
        let n = self.dim * self.dim;
        // Deterministic, non-degenerate start vector.
        let mut v: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new(1.0 + (k % 7) as f64 * 0.1, (k % 3) as f64 * 0.05))
            .collect();
        let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut sigma = 0.0;
        for _ in 0..iterations {
            let nv = norm(&v);
            if nv == 0.0 {
                return 0.0;
            }
            v.iter_mut().for_each(|z| *z /= nv);
            let w = self.sparse.adjoint_matvec(&self.sparse.matvec(&v));
            sigma = norm(&w).sqrt();
            v = w;
        }
        sigma
    }
}

/// Standard Lindblad form of the chain's generator.
pub fn build_liouvillian(p: &ChainParams) -> Superoperator {
    build_from_terms(&build_h_coh(p), &build_jump_terms(p))
}

/// Assembles `-i(I⊗H - Hᵀ⊗I) + Σ γ_k [L̄_k⊗L_k - ½ I⊗L_k†L_k - ½ (L_k†L_k)ᵀ⊗I]`
/// with `γ_k = 2·rate_k`.
pub fn build_from_terms(h: &ComplexMatrix, jumps: &[JumpTerm]) -> Superoperator {
    let d = h.rows();
    let id = ComplexMatrix::identity(d);
    let mut t = Triplets::default();
    t.add_kron(&id, h, Complex64::new(0.0, -1.0));
    t.add_kron(&h.transpose(), &id, Complex64::new(0.0, 1.0));
    for jump in jumps.iter().filter(|j| j.rate > 0.0) {
        let gamma = 2.0 * jump.rate;
        let l = &jump.operator;
        let ldl = &l.adjoint() * l;
        t.add_kron(&l.conj(), l, Complex64::new(gamma, 0.0));
        t.add_kron(&id, &ldl, Complex64::new(-0.5 * gamma, 0.0));
        t.add_kron(&ldl.transpose(), &id, Complex64::new(-0.5 * gamma, 0.0));
    }
    let sparse = t.into_csr(d * d);
    let dense = sparse.to_dense();
    Superoperator { dim: d, sparse, dense }
}

/// Which regime ratio a [`RegimeWarning`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeQuantity {
    Rabi,
    ThermalNoise,
    Detuning,
    Coupling,
}

impl RegimeQuantity {
    pub fn label(self) -> &'static str {
        match self {
            RegimeQuantity::Rabi => "Omega/omega",
            RegimeQuantity::ThermalNoise => "Gamma*nbar/omega",
            RegimeQuantity::Detuning => "delta/omega",
            RegimeQuantity::Coupling => "J/omega",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeWarning {
    pub quantity: RegimeQuantity,
    pub ratio: f64,
    pub threshold: f64,
}

impl std::fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} = {:.3e} exceeds {:.3e}; the Markovian weak-drive treatment may be inaccurate",
            self.quantity.label(),
            self.ratio,
            self.threshold
        )
    }
}

pub const DEFAULT_REGIME_THRESHOLD: f64 = 0.1;

/// Flags parameters that are not small against the bath/qubit frequency scale.
pub fn validate_regime(p: &ChainParams, omega_scale: f64) -> Result<Vec<RegimeWarning>, ModelError> {
    validate_regime_with(p, omega_scale, DEFAULT_REGIME_THRESHOLD)
}

pub fn validate_regime_with(
    p: &ChainParams,
    omega_scale: f64,
    threshold: f64,
) -> Result<Vec<RegimeWarning>, ModelError> {
    if !(omega_scale.is_finite() && omega_scale > 0.0) {
        return Err(invalid("omega_scale", "must be positive"));
    }
    let max_abs = |it: &mut dyn Iterator<Item = f64>| it.map(f64::abs).fold(0.0, f64::max);
    let checks = [
        (RegimeQuantity::Rabi, max_abs(&mut p.rabi.iter().copied())),
        (
            RegimeQuantity::ThermalNoise,
            max_abs(&mut p.gamma.iter().map(|g| g * p.nbar)),
        ),
        (RegimeQuantity::Detuning, max_abs(&mut p.detuning.iter().copied())),
        (RegimeQuantity::Coupling, p.coupling.abs()),
    ];
    Ok(checks
        .into_iter()
        .map(|(quantity, value)| (quantity, value / omega_scale))
        .filter(|&(_, ratio)| ratio > threshold)
        .map(|(quantity, ratio)| RegimeWarning {
            quantity,
            ratio,
            threshold,
        })
        .collect())
}

/// Basis permutation induced by reversing the qubit order: `perm[i]` is the image of `i`.
pub fn qubit_reversal_permutation(n: usize) -> Vec<usize> {
    (0..1usize << n)
        .map(|i| (0..n).fold(0, |acc, b| (acc << 1) | ((i >> b) & 1)))
        .collect()
}
