//! Exact lemma identities, telescoping, recurrences and derivation-chain checks.

mod basis;
mod convolution;
mod lemmas;
mod recurrence;

use thiserror::Error;

pub use basis::BasisValue;
pub use convolution::{antisymmetry, verify_convolution, ConvolutionId};
pub(crate) use convolution::eval_converged;
pub use lemmas::{
    finite_binom_sum, lemma1_f, lemma2_f, lemma3_g, lemma4_rhs, odd_partial_fraction, partial_fraction_check,
    telescope, telescope_increments,
};
pub use recurrence::{solve_first_order, RecurrenceProblem};

use crate::series::SeriesError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{what} did not converge (self error {self_error})")]
    NotConverged { what: String, self_error: String },
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
