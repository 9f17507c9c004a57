//! Exact sequence kernels and arbitrary-precision constants.

mod bernoulli;
mod constants;
mod precision;
mod real;
mod sequences;

use thiserror::Error;

pub use bernoulli::{bernoulli, bernoulli_over_factorial};
pub(crate) use constants::raw;
pub use constants::{const_euler_gamma, const_li_half, const_ln2, const_pi, const_zeta};
pub use precision::{PrecisionContext, DEFAULT_GUARD, MIN_DIGITS, MIN_GUARD};
pub(crate) use precision::pow10_neg;
pub use real::{format_decimal, Real};
pub use sequences::{central_ratio, harmonic, odd_harmonic, SequenceTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("invalid precision: {0}")]
    Precision(String),
    #[error("zeta({0}) diverges")]
    ZetaPole(u32),
    #[error("argument out of domain: {0}")]
    Domain(String),
}
