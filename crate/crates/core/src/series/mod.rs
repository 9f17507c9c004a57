//! Series families, exact partial sums and high-precision evaluation.

mod asymptotic;
mod bracket;
mod evaluate;
mod family;
mod kernel;

use thiserror::Error;

pub use asymptotic::central_asymptotic_coefficients;
pub use bracket::{tail_bracket, tail_bracket_kernel};
pub use evaluate::{
    evaluate, evaluate_alternating, evaluate_alternating_kernel, evaluate_kernel, partial_sum, partial_sum_kernel,
    power_log_tail, term, term_kernel, EvalOptions, EvalResult,
};
pub use family::{FamilyTag, SeriesFamily};
pub use kernel::{Kernel, LinearFactor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("invalid evaluation options: {0}")]
    InvalidOptions(String),
    #[error("index {0} out of range (k >= 1)")]
    IndexOutOfRange(u64),
    #[error("alternating series not supported here: {0}")]
    Alternating(String),
    #[error("series is not alternating: {0}")]
    NotAlternating(String),
}
