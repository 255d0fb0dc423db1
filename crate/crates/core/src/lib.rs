//! Numerical toolkit for dual trace, generalized Morawetz, weighted Strichartz
//! and Sobolev-type estimates with angular regularity.
//!
//! Functions are expanded in spherical harmonics; every estimate reduces to
//! per-degree radial integrals involving `J_{k+(n-2)/2}`. The crate computes
//! the exact per-mode constants in closed form, cross-checks them by direct
//! quadrature and by propagator simulation, and carries an exact calculator
//! for the exponent windows of the applications.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exponents;
pub mod inequalities;
pub mod modes;
pub mod parallel;
pub mod quadrature;
pub mod specfun;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
