//! Quantum statistical averages of a trapped 1D Lennard-Jones fluid in
//! classical phase space.
//!
//! The pipeline has three stages. [`eigen`] solves the single-particle
//! Schrödinger problem in the effective local field of frozen neighbors on a
//! grid of neighbor positions. [`commute`] turns those eigenstates into the
//! complex combined singlet commutation function w̃(q,p|q′,q″), one table per
//! temperature. [`mc`] samples classical phase space under the real part of
//! w̃ as umbrella weight and reweights into six averages (classical/quantum ×
//! distinguishable/boson/fermion).
//!
//! Everything is in reduced units (ε = r_e = m = 1); see [`params`].

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod commute;
pub mod eigen;
pub mod error;
pub mod mc;
pub mod params;
pub mod potential;
pub mod symmetry;

pub use error::CoreError;
pub use params::ModelParams;
pub use potential::{NeighborContext, PhaseConfig};

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, CoreError>;
