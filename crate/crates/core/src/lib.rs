//! Relativistic Landau eigenmodes and free-space Laguerre–Gauss beams,
//! the paraxial equation in a uniform magnetic field, and the Gouy-phase
//! laws that connect them.
//!
//! Units are natural throughout (ħ = c = m = 1); see [`units`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod gouy;
pub mod grid;
pub mod modes;
pub mod propagator;
pub mod special;
pub mod spectrum;
pub mod units;
pub mod validate;

pub use error::{Error, Result};

/// Comment line heading every data file; ignored by golden comparisons.
pub const GENERATED_BY: &str = concat!(
    "# generated-by landau-paraxial v",
    env!("CARGO_PKG_VERSION")
);
