use std::fmt;
use std::sync::Arc;

use rug::Rational;

use super::{BasisValue, IdentityError};

type CoefFn = Arc<dyn Fn(u64) -> Rational + Send + Sync>;
type InhomFn = Arc<dyn Fn(u64) -> BasisValue + Send + Sync>;

/// `f(k) = coef(k)·f(k−1) + inhom(k)` for `k > first_index`, with `f(first_index) = init`.
#[derive(Clone)]
pub struct RecurrenceProblem {
    pub coef: CoefFn,
    pub inhom: InhomFn,
    pub init: BasisValue,
    pub first_index: u64,
}

impl fmt::Debug for RecurrenceProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RecurrenceProblem")
            .field("init", &self.init.to_string())
            .field("first_index", &self.first_index)
            .finish_non_exhaustive()
    }
}

impl RecurrenceProblem {
    pub fn new(
        coef: impl Fn(u64) -> Rational + Send + Sync + 'static,
        inhom: impl Fn(u64) -> BasisValue + Send + Sync + 'static,
        init: BasisValue,
        first_index: u64,
    ) -> Self {
        Self {
            coef: Arc::new(coef),
            inhom: Arc::new(inhom),
            init,
            first_index,
        }
    }

    /// `f(k) = (2k−2)/(2k−1)·f(k−1) + 1/(k(2k−1))`, `f(1) = 1`.
    pub fn lemma1() -> Self {
        Self::new(
            |k| Rational::from((2 * k - 2, 2 * k - 1)),
            |k| BasisValue::from_rational(Rational::from((1, k * (2 * k - 1)))),
            BasisValue::from_rational(Rational::from(1)),
            1,
        )
    }

    /// `g(j) = (2j−3)/(2j−2)·g(j−1) + 1/((2j−2)(2j−1))`, `g(1) = π/2 − 1`.
    pub fn lemma3() -> Self {
        Self::new(
            |j| Rational::from((2 * j - 3, 2 * j - 2)),
            |j| BasisValue::from_rational(Rational::from((1, (2 * j - 2) * (2 * j - 1)))),
            BasisValue::new(Rational::from(-1), Rational::from((1, 2)), Rational::new()),
            1,
        )
    }

    /// `f(k) − coef(k)·f(k−1) − inhom(k)`; zero when the pair satisfies the recurrence.
    pub fn residual(&self, k: u64, current: &BasisValue, previous: &BasisValue) -> BasisValue {
        let stepped = &(previous * &(self.coef)(k)) + &(self.inhom)(k);
        current - &stepped
    }
}

/// Forward substitution; returns `f(first_index..=k_max)`.
pub fn solve_first_order(problem: &RecurrenceProblem, k_max: u64) -> Result<Vec<BasisValue>, IdentityError> {
    if k_max < problem.first_index {
        return Err(IdentityError::InvalidArgument(format!(
            "truncation {k_max} below first index {}",
            problem.first_index
        )));
    }
    let mut out = Vec::with_capacity((k_max - problem.first_index + 1) as usize);
    out.push(problem.init.clone());
    for k in problem.first_index + 1..=k_max {
        let a = (problem.coef)(k);
        if a == 0 {
            return Err(IdentityError::InvalidArgument(format!("zero coefficient at k={k}")));
        }
        let next = &(out.last().expect("seeded") * &a) + &(problem.inhom)(k);
        out.push(next);
    }
    Ok(out)
}
