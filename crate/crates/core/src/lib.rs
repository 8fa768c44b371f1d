//! Error bounds for the adiabatic approximation of noisy two-level quantum
//! evolutions, with all constants explicit, plus a high-accuracy
//! rotating-eigenbasis simulator to validate them.
//!
//! The crate is organized around the pipeline used to certify an evolution:
//!
//! * [`spectral`] — dense Hermitian linear algebra: norms, eigensystems,
//!   spectral projectors, gap profiles.
//! * [`bounds`] — the bound formulas themselves (constant-gap, integral,
//!   perturbed-start, systematic-error, environment-coupling, two-time-scale
//!   noise) and the perturbation estimates for endpoint overlaps.
//! * [`schedule`] — time-dependent Hamiltonians `H(s)`, noise processes
//!   `H_noise(t)` and numeric extraction of derivative-norm and gap inputs.
//! * [`noise`] — differentiable 1/nu noise synthesized as a finite cosine
//!   sum with seeded random phases and amplitude calibration.
//! * [`models`] — two concrete systems: a spin-1/2 in a rotating field with
//!   closed-form solutions, and a two-level superconducting flux qubit with
//!   1/nu flux noise.
//! * [`dynamics`] — adaptive rotating-frame integration, a direct
//!   small-step propagator used as an independent oracle, counter-adiabatic
//!   driving, and commuting-noise checks.
//! * [`cli`] — the `adiabound` command-line front end.
//!
//! Units: energies in MHz (hbar = 1), times in microseconds, so all phase
//! products are dimensionless.

// Validation guards are written as `!(x > 0.0)` so that NaN inputs fail
// them too; the positive form would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod cmat;
pub mod dynamics;
pub mod error;
pub mod models;
pub mod noise;
pub mod schedule;
pub mod spectral;

pub use error::{Error, Result};
