use rug::Rational;
use serde::Serialize;

use super::VerifyError;
use crate::identities::{lemma1_f, lemma2_f, lemma3_g, lemma4_rhs, BasisValue, IdentityError, RecurrenceProblem};
use crate::numerics::{PrecisionContext, Real};
use crate::series::{evaluate_kernel, EvalOptions, Kernel};

/// One lemma evaluated at a single index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub id: u32,
    pub k: u64,
    /// Exact value in the `{1, π, ln 2}` basis (rational for the first and fourth lemma).
    pub exact_value: String,
    pub value: Real,
    /// Recurrence residual for the first and third lemma, series gap for the others.
    pub residual: Real,
    /// True when the residual was computed in exact arithmetic.
    pub exact: bool,
}

fn recurrence_residual(p: &RecurrenceProblem, k: u64, at: impl Fn(u64) -> Result<BasisValue, IdentityError>) -> Result<(BasisValue, BasisValue), VerifyError> {
    let current = at(k)?;
    let residual = if k == p.first_index {
        &current - &p.init
    } else {
        p.residual(k, &current, &at(k - 1)?)
    };
    Ok((current, residual))
}

fn series_gap(kernel: &Kernel, exact: Real, k: u64, ctx: PrecisionContext) -> Result<Real, VerifyError> {
    let opts = EvalOptions::new(ctx);
    let cutoff = opts.cutoff.max(8 * k);
    let r = evaluate_kernel(kernel, ctx, &opts.with_cutoff(cutoff))?;
    if !r.converged {
        return Err(IdentityError::NotConverged { what: kernel.to_string(), self_error: r.self_error.to_decimal(3) }.into());
    }
    Ok((r.value - exact).abs())
}

/// Evaluates lemma `id ∈ 1..=4` at index `k ≥ 1` and checks it: the first and third
/// against their recurrence (exactly), the second and fourth against the defining series.
pub fn lemma_check(id: u32, k: u64, ctx: PrecisionContext) -> Result<LemmaCheck, VerifyError> {
    if k == 0 {
        return Err(IdentityError::InvalidArgument("lemma index must be >= 1".into()).into());
    }
    let (exact_value, value, residual, exact) = match id {
        1 => {
            let at = |k| lemma1_f(k).map(BasisValue::from);
            let (v, r) = recurrence_residual(&RecurrenceProblem::lemma1(), k, at)?;
            (v.to_string(), v.evaluate(ctx), r.evaluate(ctx), true)
        }
        3 => {
            let (v, r) = recurrence_residual(&RecurrenceProblem::lemma3(), k, lemma3_g)?;
            (v.to_string(), v.evaluate(ctx), r.evaluate(ctx), true)
        }
        2 => {
            let v = lemma2_f(k)?;
            let exact = v.evaluate(ctx);
            let gap = series_gap(&Kernel::central().over(1, k as i64, 2), exact.clone(), k, ctx)?;
            (v.to_string(), exact, gap, false)
        }
        4 => {
            let v: Rational = lemma4_rhs(k)?;
            let exact = Real::from_rational(&v, ctx);
            let kernel = Kernel::central().with_odd_harmonic(1).over(1, k as i64, 1);
            let gap = series_gap(&kernel, exact.clone(), k, ctx)?;
            (v.to_string(), exact, gap, false)
        }
        other => return Err(VerifyError::InvalidTarget(format!("lemma {other} (expected 1..4)"))),
    };
    Ok(LemmaCheck { id, k, exact_value, value, residual, exact })
}
