//! Dynamics and entanglement witnesses of a two-mode bosonic Josephson junction,
//! `H = χ Jz² − Ω Jx` (ħ = 1).
//!
//! The crate has two independent routes to every observable:
//!
//! * [`dynamics`] diagonalizes the Hamiltonian in the Dicke basis and propagates
//!   states spectrally. It is exact for any `N` and serves as the reference.
//! * [`eqpm`] and [`oat`] provide closed forms: the Gaussian phase-model
//!   solutions around the `φ = 0` and `φ = π` fixed points, and the
//!   one-axis-twisting limit `Ω = 0`.
//!
//! [`witness`] turns covariance data into spin-squeezing and quantum-Fisher
//! witnesses and fits short-time Taylor coefficients. [`wigner`] produces Bloch
//! sphere quasi-probability data and mean-field separatrix curves.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dynamics;
pub mod eqpm;
mod error;
mod math;
pub mod oat;
pub mod optimize;
mod params;
pub mod phase;
pub mod quadrature;
pub mod spin;
pub mod tridiag;
pub mod wigner;
pub mod witness;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::ModelParams;
