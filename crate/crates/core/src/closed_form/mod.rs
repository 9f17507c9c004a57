//! Closed forms over the basis `{π, ln 2, ζ(m), Li_m(1/2)}` with exact rational coefficients.

mod catalog;
mod form;
mod parse;
mod symbol;

use thiserror::Error;

pub use catalog::{catalog_all, catalog_get, catalog_texts, CatalogEntry};
pub use form::{ClosedForm, Monomial};
pub use parse::{cf_format, cf_parse};
pub use symbol::ConstSymbol;

use crate::numerics::{PrecisionContext, Real};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosedFormError {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("{0}")]
    InvalidSymbol(String),
    #[error("no catalog entry for {0}")]
    NotFound(String),
}

pub fn cf_evaluate(cf: &ClosedForm, ctx: PrecisionContext) -> Real {
    cf.evaluate(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn evaluate_examples() {
        let ctx = PrecisionContext::with_digits(15).unwrap();
        assert_eq!(cf_evaluate(&cf_parse("2*ln2").unwrap(), ctx).to_decimal(11), "1.3862943611");
        assert_eq!(cf_evaluate(&ClosedForm::zero(), ctx), 0.0);
        assert_eq!(cf_evaluate(&cf_parse("z2 - 2*ln2^2").unwrap(), ctx).to_decimal(4), "6.84e-1");
    }

    #[test]
    fn precision_doubling() {
        let lo = PrecisionContext::with_digits(30).unwrap();
        for e in catalog_all() {
            let a = cf_evaluate(&e.closed_form, lo);
            let b = cf_evaluate(&e.closed_form, lo.doubled());
            assert!(a.agrees_to(&b, 28), "{}", e.family);
        }
    }

    #[test]
    fn zeta_relations_hold_numerically_only() {
        // ζ(2) = π²/6 is never used for rewriting; both forms stay distinct structurally
        let a = cf_parse("z2").unwrap();
        let b = cf_parse("1/6*pi^2").unwrap();
        assert_ne!(a, b);
        let ctx = PrecisionContext::with_digits(40).unwrap();
        assert!(cf_evaluate(&a, ctx).agrees_to(&cf_evaluate(&b, ctx), 40));
        assert_eq!(b.coefficient(&[(ConstSymbol::Pi, 2)]), Rational::from((1, 6)));
    }
}
