//! Frobenius series coefficients for ODEs with a regular singular point, WKB based
//! forecasts of their magnitudes, and precision planning for summing the series.

// `!(a > b)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod frobenius;
pub mod legendre;
mod numeric;
pub mod ode;
pub mod oracles;
pub mod planner;
pub mod precision;
pub mod wkb;

pub use error::{Error, Result};
