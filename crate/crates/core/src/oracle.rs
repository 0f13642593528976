//! Closed-form results for resonantly driven chains at zero temperature.
//!
//! Two-qubit results are parameterized by `r = Γ/Ω` and `s = J/Ω`, with
//! `t = r² + 1` and `k = 3 + 2r² + t² + 4r²s²`.

use std::f64::consts::SQRT_2;

use thiserror::Error;

use crate::dynamics::DensityMatrix;
use crate::linalg::{c64, ComplexMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid argument `{name}` = {value}: {reason}")]
    InvalidArgument {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticParams {
    pub r: f64,
    pub s: f64,
}

impl AnalyticParams {
    pub fn new(r: f64, s: f64) -> Result<Self, OracleError> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(OracleError::InvalidArgument {
                name: "r",
                value: r,
                reason: "must be finite and nonnegative",
            });
        }
        if !s.is_finite() {
            return Err(OracleError::InvalidArgument {
                name: "s",
                value: s,
                reason: "must be finite",
            });
        }
        Ok(Self { r, s })
    }

    pub fn t(&self) -> f64 {
        self.r * self.r + 1.0
    }

    pub fn k(&self) -> f64 {
        let (r2, t) = (self.r * self.r, self.t());
        3.0 + 2.0 * r2 + t * t + 4.0 * r2 * self.s * self.s
    }
}

/// Two-qubit steady state in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
///
/// At `r = 0` this evaluates to `I/4`, a removable limit of the formula and
/// not a steady state: undamped qubits have no unique stationary state.
pub fn steady_state_2q(p: AnalyticParams) -> DensityMatrix {
    let AnalyticParams { r, s } = p;
    let (t, k) = (p.t(), p.k());
    let r2 = r * r;
    let upper = [
        [
            c64(t * t + 4.0 * r2 * s * s, 0.0),
            c64(2.0 * s * r2, r * t),
            c64(2.0 * s * r2, r * t),
            c64(-r2, 2.0 * r * s),
        ],
        [c64(0.0, 0.0), c64(t, 0.0), c64(r2, 0.0), c64(0.0, r)],
        [c64(0.0, 0.0), c64(0.0, 0.0), c64(t, 0.0), c64(0.0, r)],
        [c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)],
    ];
    let m = ComplexMatrix::from_fn(4, 4, |row, col| {
        if row <= col {
            upper[row][col] / k
        } else {
            upper[col][row].conj() / k
        }
    });
    DensityMatrix::new(m).expect("closed-form steady state is a valid density matrix")
}

/// `Γ_th = Ω²/(2J)`: the pair is entangled only above this noise strength.
pub fn gamma_threshold(omega: f64, j: f64) -> Result<f64, OracleError> {
    if !(j > 0.0 && j.is_finite()) {
        return Err(OracleError::InvalidArgument {
            name: "j",
            value: j,
            reason: "coupling must be positive",
        });
    }
    Ok(omega * omega / (2.0 * j))
}

/// `S₂ = ⟨(σ_x¹ + σ_x²)/2⟩ = 4sr²/k`.
pub fn signal2(p: AnalyticParams) -> f64 {
    4.0 * p.s * p.r * p.r / p.k()
}

/// Location `r* = √2` (independent of `s`) and height `s/(2+s²)` of the `S₂` maximum.
pub fn signal2_peak(s: f64) -> Result<(f64, f64), OracleError> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(OracleError::InvalidArgument {
            name: "s",
            value: s,
            reason: "must be positive",
        });
    }
    Ok((SQRT_2, s / (2.0 + s * s)))
}

/// `|⟨σ_x⟩| = Ωδ/(δ² + (Γ/2)² + (Ω/2)²)` for an isolated detuned qubit.
pub fn single_qubit_detuned(omega: f64, delta: f64, gamma: f64) -> f64 {
    (omega * delta / (delta * delta + (gamma / 2.0).powi(2) + (omega / 2.0).powi(2))).abs()
}

/// Per-qubit `⟨σ_x⟩ = 4JΓ²/(kΩ³)` for a resonant pair; equals `signal2(Γ/Ω, J/Ω)`.
pub fn coherence_2q(omega: f64, j: f64, gamma: f64) -> Result<f64, OracleError> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(OracleError::InvalidArgument {
            name: "omega",
            value: omega,
            reason: "must be positive",
        });
    }
    let p = AnalyticParams::new(gamma / omega, j / omega)?;
    Ok(4.0 * j * gamma * gamma / (p.k() * omega.powi(3)))
}
