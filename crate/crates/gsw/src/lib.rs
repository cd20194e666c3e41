//! Split-step spectral simulations, file formats and the `gsw` command-line
//! tool built on `gsw-core`.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod solver;
pub mod tail;

pub use error::{GswError, Result};
