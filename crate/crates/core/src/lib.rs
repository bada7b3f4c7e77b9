//! Exact and Monte-Carlo engines relating noise stability to correlation with
//! half-spaces.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! computation: Boolean functions are dense tables over `{-1,1}^n`, Gaussian
//! sets are membership oracles, and every random quantity is driven by an
//! explicit seed.
//!
//! Index convention for tables: bit `i` of the table index encodes coordinate
//! `x_{i+1}`, with bit `0` meaning `+1` and bit `1` meaning `-1`.

#![no_std]
#![forbid(unsafe_code)]
// `!(t > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod corpus;
mod error;
pub mod fourier;
pub mod gaussian;
pub mod halfspace;
pub(crate) mod mathx;
pub mod restriction;
pub mod stats;

pub use error::{Error, Result};
pub use fourier::{
    level1_weight, noise_operator, noise_stability, var_pt, wht, wht_inverse, BooleanFunction,
    FourierSpectrum, NoiseParam, RangeTag,
};
pub use halfspace::{CorrelationResult, HalfSpace, Method};
pub use restriction::{Restriction, RestrictionLaw};
pub use stats::Estimate;

/// Largest supported cube dimension for dense tables.
pub const MAX_DIM: usize = 20;
