//! Semi-Riemannian submersions from pseudo-hyperbolic spaces.
//!
//! The crate builds the quadric models `H^m_s`, the circle, quaternionic and
//! octonionic Hopf-type submersions out of them, evaluates the O'Neill `A`
//! and `T` tensors pointwise, extracts Clifford module structures, and runs
//! a seeded verification harness over the resulting identities.

pub mod clifford;
pub mod cli;
pub mod division;
pub mod error;
pub mod linalg;
pub mod sampling;
pub mod spaces;
pub mod submersion;
pub mod verify;

pub use error::{Error, Result};
