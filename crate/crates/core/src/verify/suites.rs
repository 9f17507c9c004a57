use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::euler::{double_harmonic_identity, partition_defects};
use crate::identities::{
    antisymmetry, eval_converged, finite_binom_sum, lemma1_f, lemma2_f, lemma3_g, lemma4_rhs, odd_partial_fraction,
    partial_fraction_check, solve_first_order, telescope_increments, BasisValue, RecurrenceProblem,
};
use crate::numerics::{const_pi, PrecisionContext, Real, SequenceTable};
use crate::series::{tail_bracket_kernel, FamilyTag, Kernel, SeriesFamily};

/// Lemma and identity suites run by the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LemmaSuite {
    Lemma1Recurrence,
    Lemma3Recurrence,
    FiniteBinomSum,
    OddPartialFraction,
    PartialFractions,
    Antisymmetry,
    EvenOddPartition,
    DoubleHarmonic,
    Lemma2Series,
    Lemma4Series,
    TelescopeOddHarmonic,
}

impl LemmaSuite {
    pub const ALL: [LemmaSuite; 11] = [
        LemmaSuite::Lemma1Recurrence,
        LemmaSuite::Lemma3Recurrence,
        LemmaSuite::FiniteBinomSum,
        LemmaSuite::OddPartialFraction,
        LemmaSuite::PartialFractions,
        LemmaSuite::Antisymmetry,
        LemmaSuite::EvenOddPartition,
        LemmaSuite::DoubleHarmonic,
        LemmaSuite::Lemma2Series,
        LemmaSuite::Lemma4Series,
        LemmaSuite::TelescopeOddHarmonic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaSuite::Lemma1Recurrence => "LEMMA1_RECURRENCE",
            LemmaSuite::Lemma3Recurrence => "LEMMA3_RECURRENCE",
            LemmaSuite::FiniteBinomSum => "FINITE_BINOM_SUM",
            LemmaSuite::OddPartialFraction => "ODD_PARTIAL_FRACTION",
            LemmaSuite::PartialFractions => "PARTIAL_FRACTIONS",
            LemmaSuite::Antisymmetry => "ANTISYMMETRY",
            LemmaSuite::EvenOddPartition => "EVEN_ODD_PARTITION",
            LemmaSuite::DoubleHarmonic => "DOUBLE_HARMONIC",
            LemmaSuite::Lemma2Series => "LEMMA2_SERIES",
            LemmaSuite::Lemma4Series => "LEMMA4_SERIES",
            LemmaSuite::TelescopeOddHarmonic => "TELESCOPE_ODD_HARMONIC",
        }
    }

    /// Exact suites compare rationals; the others compare against series evaluations.
    pub fn is_exact(self) -> bool {
        !matches!(
            self,
            LemmaSuite::Lemma2Series | LemmaSuite::Lemma4Series | LemmaSuite::TelescopeOddHarmonic
        )
    }
}

impl fmt::Display for LemmaSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaSuite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LemmaSuite::ALL
            .into_iter()
            .find(|x| x.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| VerifyError::InvalidTarget(s.to_string()))
    }
}

/// Ranges covered by the exact suites.
pub const RECURRENCE_MAX: u64 = 2000;
pub const FINITE_SUM_MAX: u64 = 1000;
pub const PARTIAL_FRACTION_MAX: u64 = 1000;
pub const PARTITION_MAX: u64 = 1000;
pub const DOUBLE_HARMONIC_MAX: u64 = 10_000;
pub const SERIES_LEMMA_MAX: u64 = 20;
pub const TELESCOPE_TERMS: u64 = 1_000_000;

/// Outcome of one suite: the first failing index (if any) and the residual there.
pub(crate) struct SuiteOutcome {
    pub failure: Option<String>,
    pub residual: Real,
    pub numeric: Option<(Real, Real)>,
    pub note: String,
}

impl SuiteOutcome {
    fn exact(failure: Option<String>, ctx: PrecisionContext, note: String) -> Self {
        Self { failure, residual: Real::zero(ctx), numeric: None, note }
    }
}

fn first_failure<T: Send + Sync>(items: Vec<T>, check: impl Fn(&T) -> Option<String> + Sync) -> Option<String> {
    items.par_iter().filter_map(&check).find_first(|_| true)
}

pub(crate) fn lemma1_recurrence_residual(k_max: u64) -> Option<String> {
    let p = RecurrenceProblem::lemma1();
    let solved = solve_first_order(&p, k_max).ok()?;
    let direct: Vec<BasisValue> = (1..=k_max).map(|k| BasisValue::from(lemma1_f(k).expect("k >= 1"))).collect();
    (2..=k_max).find_map(|k| {
        let i = (k - 1) as usize;
        let r = p.residual(k, &direct[i], &direct[i - 1]);
        if !r.is_zero() {
            Some(format!("k={k}: recurrence residual {r}"))
        } else if solved[i] != direct[i] {
            Some(format!("k={k}: solver gives {} vs {}", solved[i], direct[i]))
        } else {
            None
        }
    })
}

pub(crate) fn lemma3_recurrence_residual(k_max: u64) -> Option<String> {
    let p = RecurrenceProblem::lemma3();
    let solved = solve_first_order(&p, k_max).ok()?;
    let direct: Vec<BasisValue> = (1..=k_max).map(|j| lemma3_g(j).expect("j >= 1")).collect();
    (2..=k_max).find_map(|j| {
        let i = (j - 1) as usize;
        let r = p.residual(j, &direct[i], &direct[i - 1]);
        if !r.is_zero() {
            Some(format!("j={j}: recurrence residual {r}"))
        } else if solved[i] != direct[i] {
            Some(format!("j={j}: solver gives {} vs {}", solved[i], direct[i]))
        } else {
            None
        }
    })
}

fn lemma_series(k_max: u64, ctx: PrecisionContext, lemma4: bool) -> Result<(Real, String), VerifyError> {
    let gaps: Vec<Real> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let shift = k as i64;
            let (kernel, exact) = if lemma4 {
                let kernel = Kernel::central().with_odd_harmonic(1).over(1, shift, 1);
                (kernel, Real::from_rational(&lemma4_rhs(k)?, ctx))
            } else {
                let kernel = Kernel::central().over(1, shift, 2);
                (kernel, lemma2_f(k)?.evaluate(ctx))
            };
            Ok((eval_converged(&kernel, ctx)? - exact).abs())
        })
        .collect::<Result<_, crate::identities::IdentityError>>()?;
    let (worst_k, worst) = gaps
        .into_iter()
        .zip(1..)
        .map(|(g, k)| (k, g))
        .reduce(|a, b| if b.1 > a.1 { b } else { a })
        .expect("nonempty");
    Ok((worst, format!("largest gap at k={worst_k}, k=1..{k_max}")))
}

pub(crate) fn run_suite(suite: LemmaSuite, ctx: PrecisionContext) -> Result<SuiteOutcome, VerifyError> {
    Ok(match suite {
        LemmaSuite::Lemma1Recurrence => SuiteOutcome::exact(
            lemma1_recurrence_residual(RECURRENCE_MAX),
            ctx,
            format!("k=2..{RECURRENCE_MAX}, closed form and solver"),
        ),
        LemmaSuite::Lemma3Recurrence => SuiteOutcome::exact(
            lemma3_recurrence_residual(RECURRENCE_MAX),
            ctx,
            format!("j=2..{RECURRENCE_MAX}, rational and pi parts, closed form and solver"),
        ),
        LemmaSuite::FiniteBinomSum => SuiteOutcome::exact(
            first_failure((0..=FINITE_SUM_MAX).collect(), |&k| finite_binom_sum(k).err().map(|e| e.to_string())),
            ctx,
            format!("k=0..{FINITE_SUM_MAX}"),
        ),
        LemmaSuite::OddPartialFraction => {
            let t = SequenceTable::with_max_index(PARTIAL_FRACTION_MAX + 16);
            let failure = first_failure((1..=PARTIAL_FRACTION_MAX).collect(), |&i| {
                let k = 16;
                let (partial, limit) = odd_partial_fraction(i, k).ok()?;
                let two_i = Rational::from(2 * i);
                let want = t.odd_harmonic(i) / &two_i ;
                let finite = (t.odd_harmonic(i) - (t.odd_harmonic(k + i) - t.odd_harmonic(k))) / two_i;
                (limit != want || partial != finite).then(|| format!("i={i}: limit {limit}, expected {want}"))
            });
            SuiteOutcome::exact(failure, ctx, format!("i=1..{PARTIAL_FRACTION_MAX}"))
        }
        LemmaSuite::PartialFractions => {
            let mut pairs: Vec<(u64, u64)> = (1..=40).flat_map(|i| (1..=40).map(move |k| (i, k))).collect();
            pairs.extend([(999_999, 1), (1, 1_000_000), (123_457, 987_654), (1_000_000, 999_983)]);
            let failure = first_failure(pairs, |&(i, k)| (!partial_fraction_check(i, k)).then(|| format!("(i,k)=({i},{k})")));
            SuiteOutcome::exact(failure, ctx, "i,k=1..40 and four pairs near 10^6".into())
        }
        LemmaSuite::Antisymmetry => {
            let failure = first_failure((1..=10).collect(), |&k| {
                let d = antisymmetry(k);
                (d != 0).then(|| format!("K={k}: difference {d}"))
            });
            SuiteOutcome::exact(failure, ctx, "K=1..10".into())
        }
        LemmaSuite::EvenOddPartition => {
            let failure = partition_defects(PARTITION_MAX)
                .iter()
                .zip(1..)
                .find(|(d, _)| **d != 0)
                .map(|(d, k)| format!("K={k}: defect {d}"));
            SuiteOutcome::exact(failure, ctx, format!("K=1..{PARTITION_MAX}"))
        }
        LemmaSuite::DoubleHarmonic => {
            let t = SequenceTable::with_max_index(2 * DOUBLE_HARMONIC_MAX);
            let failure = first_failure((1..=DOUBLE_HARMONIC_MAX).collect(), |&k| {
                (!double_harmonic_identity(k, &t)).then(|| format!("k={k}"))
            });
            SuiteOutcome::exact(failure, ctx, format!("k=1..{DOUBLE_HARMONIC_MAX}"))
        }
        LemmaSuite::Lemma2Series | LemmaSuite::Lemma4Series => {
            let (gap, note) = lemma_series(SERIES_LEMMA_MAX, ctx, suite == LemmaSuite::Lemma4Series)?;
            SuiteOutcome { failure: None, residual: gap, numeric: None, note }
        }
        LemmaSuite::TelescopeOddHarmonic => {
            // increments h(i+1) − h(i) = 1/(2i+1), so the remainder is the tail of Σ c_k/(2k+1)
            let partial = telescope_increments(&Rational::from(1), |i| Rational::from((1, 2 * i + 1)), TELESCOPE_TERMS, ctx);
            let limit = const_pi(ctx) / Real::from_i64(2, ctx);
            let kernel = SeriesFamily::indexed(FamilyTag::L, 1).kernel();
            let (lo, hi) = tail_bracket_kernel(&kernel, TELESCOPE_TERMS, ctx).map_err(crate::identities::IdentityError::from)?;
            let remainder = &limit - &partial;
            let outside = if remainder < lo {
                &lo - &remainder
            } else if remainder > hi {
                &remainder - &hi
            } else {
                Real::zero(ctx)
            };
            let note = format!(
                "K={TELESCOPE_TERMS}; pi/2 - partial = {} within [{}, {}]",
                remainder.to_decimal(12),
                lo.to_decimal(12),
                hi.to_decimal(12)
            );
            let failure = (outside > 0.0).then(|| "remainder outside the tail bracket".to_string());
            SuiteOutcome { failure, residual: outside, numeric: Some((partial, limit)), note }
        }
    })
}
