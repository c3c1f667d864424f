//! Network-coding reliability toolkit: GF(2^q) linear algebra, systematic and
//! subspace erasure codecs, erasure-channel Monte Carlo simulation, closed-form
//! reliability analytics, and complexity-constrained coding-rate optimization.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats, and the CLI live
//! in the companion `geonc` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytics;
pub mod error;
pub mod field;
pub mod lifecycle;
pub mod matrix;
pub mod optimizer;
pub mod progressive;
pub mod rate_region;
pub mod rng;
pub mod sim;
pub mod snc;
pub mod subspace;

pub use error::Error;
pub use field::{Field, FieldSpec};
pub use matrix::FieldMatrix;
pub use progressive::ReductionState;
