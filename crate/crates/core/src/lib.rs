//! Steady states, time evolution and noise-response measures for coherently
//! driven, dissipative qubit chains with nearest-neighbour σz-σz coupling.
//!
//! The basis is `|q1 q2 … qN⟩` with qubit 1 most significant and
//! `σz|0⟩ = +|0⟩`. Qubits are numbered from 1 in every public API.

// Negated comparisons are how validation rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod linalg;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod sweep;

pub use dynamics::{evolve, steady_state, steady_state_of, DensityMatrix, DynamicsError, Trajectory};
pub use model::{build_liouvillian, ChainParams, ModelError, Superoperator};
