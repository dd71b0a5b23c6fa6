//! Quantum Fisher information for frequency and damping estimation of a
//! damped harmonic oscillator prepared in a single-mode Gaussian state.
//!
//! The Gaussian fast path lives in [`phase_space`], [`dynamics`], [`qfi`]
//! and [`closed_forms`]. [`fock`] is a brute-force truncated Fock-space
//! oracle used to cross-check it. [`omt`] finds optimal measurement
//! times and [`sensing`] turns them into mass resolutions.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_forms;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod lambert;
pub mod omt;
pub mod parse;
pub mod phase_space;
pub mod qfi;
pub mod sensing;
pub mod validate;

pub use error::{Error, Result};
pub use phase_space::{
    fidelity, purity, state_from_params, thermal_occupancy, BathParams, GaussianParams, PhaseSpaceState,
    QfiBreakdown,
};
