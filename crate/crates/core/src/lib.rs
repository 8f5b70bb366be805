//! Exact desk-scale simulation of microscopic measurement models.
//!
//! The crate builds the states and observables of a spin-½ particle
//! measured by Coleman–Hepp spin chains, of observers made from several such
//! chains, and of a lattice that memorizes a particle path by radiating
//! photons. Everything is computed on explicit amplitude arrays, so every
//! identity can be checked to floating-point precision:
//!
//! - [`hilbert`]: layouts, states, density matrices, partial trace, branch
//!   decompositions and their mixtures.
//! - [`pauli`]: Pauli-string algebra with a matrix-free apply kernel.
//! - [`operator`]: general operators (Pauli sums, local dense blocks, outer
//!   products and their products) used as observables.
//! - [`coleman_hepp`]: chain dynamics, pointer and interference-term
//!   operators, strict measurement and the Heisenberg extension.
//! - [`superselection`]: pointer sectors, sector-preserving algebras and the
//!   pure/mixed discrimination verdict.
//! - [`cascade`]: chains measuring the interference term of earlier chains.
//! - [`radiation`]: path ⊗ lattice ⊗ photon-field model with number-diagonal
//!   field observables.
//! - [`scenario`]: configuration, orchestration and JSON/CSV reports.
//!
//! Runnable examples for each part live in `examples/`.

pub mod cascade;
pub mod coleman_hepp;
mod error;
pub mod hilbert;
pub mod operator;
pub mod pauli;
pub mod radiation;
pub mod scenario;
pub mod superselection;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Tolerance for invariant checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Largest dimension for which dense operator matrices are formed.
pub const DEFAULT_ORACLE_CAP: usize = 64;

/// Complex number from magnitude and phase in degrees.
pub fn polar_deg(magnitude: f64, phase_deg: f64) -> Complex64 {
    Complex64::from_polar(magnitude, phase_deg.to_radians())
}
