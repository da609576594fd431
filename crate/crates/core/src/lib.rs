//! Exact and numerical tools for the planar Landau model.
//!
//! Wavefunctions are kept in closed form as sums of polynomial-times-Gaussian
//! terms sharing the quadratic exponent `-(b/4)|x|^2`. Every operator used here
//! (positions, momenta, the guiding-centre operators, ladder operators and the
//! magnetic translations) maps that class into itself, so inner products and
//! operator identities are evaluated exactly up to floating point rounding.
//!
//! On top of the exact layer the crate builds generalized Gabor frames on
//! lattices, analyses their Gram matrices, orthonormalizes finite windows
//! symmetrically and tracks how localized the resulting vectors remain.
//! At the critical lattice density the localization products grow with the
//! window size: orthonormal frames for a Landau level cannot be localized in
//! both position directions.
//!
//! Modules:
//! - [`states`]: the state class, inner products via Gaussian moments.
//! - [`operators`]: Landau-model operators, unitary groups, Weyl map.
//! - [`classical`]: cyclotron dynamics and Poisson brackets.
//! - [`bargmann`]: the Segal-Bargmann picture of the lowest level.
//! - [`frames`]: lattices, Gram matrices, Löwdin orthonormalization.
//! - [`numerics`]: brute-force quadrature, grid Hamiltonian, eigensolver.
//! - [`cli`]: experiment runners behind the `landau` binary.

pub mod bargmann;
pub mod classical;
pub mod cli;
pub mod error;
pub mod frames;
pub mod numerics;
pub mod operators;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;
pub use states::{Axis, MagneticField, QuantumState};
