//! One-dimensional tunneling through square single and double barriers.
//!
//! The crate evaluates the closed-form scattering amplitudes of a square
//! double barrier, rebuilds the same amplitudes from a multi-beam
//! (Fabry–Pérot style) partial-wave sum, locates resonances and their
//! widths, and computes stationary-phase tunneling times. An independent
//! transfer-matrix integrator in [`oracle`] checks every closed form.
//!
//! All quantities use the conventions of [`units::UnitSystem`]: energies in
//! eV, lengths in Å, times in fs and wave numbers in a reference unit close
//! to `k_e = sqrt(2 m_e · 1 eV) / ħ`.
//!
//! The crate is `no_std` (it needs `alloc`); enable the `std` feature to get
//! `std::error::Error` through the standard library build.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is how NaN inputs get rejected along with the rest
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod math;

pub mod interference;
pub mod oracle;
pub mod phase_time;
pub mod potential;
pub mod presets;
pub mod quantum;
pub mod resonance;
pub mod rootfind;
pub mod units;

pub use error::{Error, Result, Side};
pub use num_complex::Complex64;
pub use potential::{Barrier, DoubleBarrier, Kinematics};
pub use quantum::{InteriorAmplitudes, ScatteringSolution};
pub use units::UnitSystem;
