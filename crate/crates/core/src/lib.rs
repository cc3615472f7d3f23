//! Quantum Rabi model with the diamagnetic A² term.
//!
//! The squeeze transformation `S = exp(¼(a² − a†²) ln Ω)` with `Ω = √(1 + 4k)`
//! maps the model onto a plain Rabi model with frequency Ω, coupling `f/√Ω`
//! and a constant shift `(Ω − 1)/2`. The crate diagonalizes that model in the
//! two combined-parity sectors, evaluates the rotating-wave closed forms, and
//! computes coherent-state dynamics of the atomic inversion and its spectrum.
//!
//! Modules:
//! - [`model`]: parameters and Hamiltonian builders
//! - [`squeeze`]: squeeze operator and coherent states
//! - [`spectrum`]: tridiagonal eigensolver, sector solves, sweeps, crossings
//! - [`rwa`]: rotating-wave closed forms
//! - [`dynamics`]: time evolution and the atomic density matrix
//! - [`fourier`]: spectrum of the inverse population

pub mod dynamics;
pub mod error;
pub mod fourier;
pub mod model;
pub mod rwa;
pub mod spectrum;
pub mod squeeze;

pub use error::{QrmaError, Result};
pub use model::{derive_params, DerivedParams, ModelParams, Parity};
pub use spectrum::Truncation;
