//! Coupled Stokes / Brinkman transmission problems on an x-periodic slab with a
//! thin-viscosity porous layer, their WKB boundary-layer expansion, and numerical
//! verification of the expansion against direct solves.
//!
//! The slab consists of three horizontal strips: a top fluid strip `[0, a]`,
//! a porous strip `[-b, 0]` and a bottom fluid strip `[-b-c, -b]`, all periodic in
//! `x` with period `L`. Every solver works mode by mode in the Fourier variable of
//! `x` and uses Chebyshev collocation in `y`.

// Index loops mirror the collocation formulas; NaN-rejecting `!(x > 0)` checks are deliberate.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod bl;
pub mod data;
pub mod error;
pub mod field;
pub mod fourier;
pub mod geometry;
pub mod grids;
pub mod manufactured;
pub mod params;
pub mod solvers;
pub mod spectral;
pub mod verify;
pub mod wkb;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
