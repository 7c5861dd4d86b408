//! Steady-state entanglement between two Coulomb-coupled mechanical
//! oscillators, one of which forms the movable mirror of a driven
//! optomechanical cavity that contains an optical parametric amplifier.
//!
//! The pipeline for one parameter set is
//!
//! 1. [`params::derive`]: drive amplitude, single-photon coupling, thermal
//!    occupation and the classical steady state ([`steady_state`]);
//! 2. [`linear_dynamics::build_drift`] / [`linear_dynamics::build_diffusion`]:
//!    the 6×6 drift and diffusion matrices of the linearized fluctuations;
//! 3. [`linear_dynamics::stability`] and [`linear_dynamics::steady_covariance`]:
//!    eigenvalue stability test and the Lyapunov steady state;
//! 4. [`entanglement::reduce_mechanical`] / [`entanglement::log_negativity`].
//!
//! [`pipeline::evaluate`] runs all of it and never panics on physics
//! failures; [`critical::critical_temperature`] locates the temperature at
//! which the entanglement vanishes.
//!
//! All frequency-like quantities are angular rates in rad/s (equivalently
//! 1/s). Quadrature covariances use the vacuum variance ½.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_docs)]
// index loops mirror the matrix formulas; negated comparisons reject NaN
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constants;
pub mod critical;
pub mod entanglement;
mod error;
pub mod linear_dynamics;
pub mod params;
pub mod pipeline;
pub mod smallmat;
pub mod steady_state;

pub use error::{Error, Result};
pub use num_complex::Complex64;
