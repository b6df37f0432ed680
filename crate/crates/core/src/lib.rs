//! Exact photon-number statistics, quantum Fisher information bounds, and
//! phase-sensitivity limits for an SU(1,1) interferometer whose arms suffer
//! photon loss (transmission `eta`) and phase diffusion (coefficient `beta`).
//!
//! The crate is organised around one pipeline:
//!
//! 1. [`gaussian`] prepares a coherent ⊗ squeezed-vacuum input, propagates it
//!    through the first nonlinear beam splitter (a two-mode squeezer), and
//!    extracts the photon-number moments that feed every bound.
//! 2. [`bound`] evaluates the variational upper bound `C_Q(γ′, λ)` on the QFI,
//!    its exact minimisers, and the phase-sensitivity bound `Δφ`.
//! 3. [`critical`] root-finds the noise thresholds `β_cri` / `η_cri` at which
//!    `Δφ` crosses the standard quantum limit, and emits sweep tables.
//! 4. [`fock`] is the brute-force oracle: truncated two-mode Fock states,
//!    explicit loss/dephasing channels, exact pure- and mixed-state QFI, and a
//!    direct operator-sum evaluation of `C_Q` that must agree with the closed
//!    forms.
//!
//! All operations are pure functions on immutable values. The `parallel`
//! feature (on by default) fans independent sweep points across a rayon pool;
//! results are assembled in input order so output is identical either way.

pub mod bound;
pub mod critical;
pub mod error;
pub mod exec;
pub mod fock;
pub mod gaussian;

pub use error::{Error, Result};
