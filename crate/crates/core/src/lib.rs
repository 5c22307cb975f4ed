#![allow(clippy::needless_range_loop)]

pub mod borcherds;
pub mod error;
pub mod jacobi;
pub mod lattice;
pub mod lift;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub mod series;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Series over exact rationals.
pub type Series = series::MultiSeries<BigRational>;
/// Series over the integers (division only when exact).
pub type IntegerSeries = series::MultiSeries<BigInt>;
