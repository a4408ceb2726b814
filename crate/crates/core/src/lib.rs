//! Exact matrix product states for qubit, spin-s and qudit Dicke states.
//!
//! The crate is organised bottom-up:
//!
//! - [`combinatorics`]: exact binomials and multinomials on big integers.
//! - [`state`] and [`dicke`]: dense state vectors, the closed-form Dicke
//!   constructors, the lowering-operator oracle and every Schmidt coefficient.
//! - [`mps`]: site tensors for all three families, contraction and canonicity.
//! - [`schmidt`]: SVD spectra and Schmidt-sum reconstructions.
//! - [`circuit`]: the sequential preparation circuit (qubit ancilla-qudit
//!   hybrid) and its state-vector simulator.
//! - [`verify`]: per-instance invariant suites used by the `verify` command.
//!
//! Basis indices use site 1 as the least-significant base-`d` digit, so
//! `|m_n ... m_2 m_1>` has flat index `sum_i m_i d^(i-1)`.

pub mod circuit;
pub mod cli;
pub mod combinatorics;
pub mod dicke;
pub mod error;
pub mod mps;
pub mod schmidt;
pub mod state;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use error::{DickeError, Result};
pub use state::{DenseState, OccupationVector};

/// Absolute tolerance used for amplitude comparisons throughout the crate.
pub const AMPLITUDE_TOL: f64 = 1e-12;

/// Default cutoff when counting non-zero singular values.
pub const RANK_TOL: f64 = 1e-10;
