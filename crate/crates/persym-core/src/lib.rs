//! Persistent symmetry of evolving finite point configurations.
#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod assignment;
pub mod geometry;
pub mod symmetry;
pub mod metrics;
pub mod persistence;
pub mod defect;
pub mod degrees;
pub mod jacobi;
pub mod reps;
pub mod fourier;
