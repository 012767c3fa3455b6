//! Numerics for the correspondence between Maass cusp forms for the modular
//! group, twisted by finite-image representations, and solutions of the
//! three-term functional equation (period functions).

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod finrep;
pub mod lewis;
pub mod lfunc;
pub mod maass;
pub mod quad;
pub mod specialfn;
pub mod transfer;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use num_complex::Complex64;
