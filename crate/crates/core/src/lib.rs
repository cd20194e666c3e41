//! Exponential asymptotics for generalized solitary waves in singularly
//! perturbed KdV equations and their lattice discretizations.
//!
//! The crate is `no_std` and only needs an allocator. It covers three layers:
//!
//! * [`singulant`]: roots of the singulant equations for the seventh-order
//!   KdV, the odd-order hierarchy, the lattice KdV and the discretized
//!   fifth-order KdV, together with the bifurcation thresholds between
//!   generalized solitary waves and localized solitons.
//! * [`inner`]: overflow-free evaluation of the inner-region recurrences and
//!   the Stokes prefactor constants extracted from them.
//! * [`asymptotics`]: soliton, singularity locations, optimal truncation,
//!   Stokes multiplier profiles and closed-form remainder amplitudes.
//!
//! Time stepping, file formats and the command-line tool live in the `gsw`
//! crate (package `gsw-std`).
#![no_std]
#![deny(unsafe_code)]
// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod asymptotics;
pub mod error;
pub mod inner;
pub mod model;
pub mod poly;
pub mod singulant;

pub use error::{Error, Result};
pub use model::{ModelKind, ModelSpec};
pub use num_complex::Complex64;
