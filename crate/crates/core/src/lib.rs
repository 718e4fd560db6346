//! Effective-Hamiltonian numerics for emitter chains coupled to a one-dimensional
//! waveguide: Hamiltonian builders, targeted non-Hermitian eigensolvers, closed-form
//! dimer theory and spectral analysis of two-excitation eigenstates.
//!
//! The crate is `no_std` and only needs an allocator.
#![no_std]
#![deny(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod eig;
pub mod linalg;
pub mod model;
pub mod theory;

pub use linalg::{CMatrix, C64};
