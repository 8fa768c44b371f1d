//! Concrete systems with known reference behavior: a spin-1/2 in a rotating
//! magnetic field (closed-form propagator and error), and a two-level
//! superconducting flux qubit with 1/nu flux noise.

pub mod custom;
pub mod flux;
pub mod tong;

pub use custom::{CubicSpline, TableModel};
pub use flux::{
    flux_potential, FluxBoundInputs, FluxCalibration, FluxCoefficients, FluxPotentialParams,
    FluxQubitModel,
};
pub use tong::{TongBoundInputs, TongModel};
