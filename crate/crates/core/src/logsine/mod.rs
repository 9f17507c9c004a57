//! Log-sine moments `∫₀^{π/2} (ln sin x)ⁿ dx` and their link to the `L` family.

mod quadrature;

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::Serialize;
use thiserror::Error;

use crate::identities::{eval_converged, IdentityError};
use crate::numerics::{const_ln2, const_pi, const_zeta, PrecisionContext, Real};
use crate::series::{FamilyTag, SeriesFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogSineError {
    #[error("invalid quadrature options: {0}")]
    InvalidOptions(String),
    #[error("quadrature did not converge after {levels} levels (self error {self_error})")]
    NotConverged { levels: u32, self_error: String },
    #[error(transparent)]
    Evaluation(#[from] IdentityError),
}

/// Level cap of the node ladder plus the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureOptions {
    pub level: u32,
    pub ctx: PrecisionContext,
}

impl QuadratureOptions {
    pub const MIN_LEVEL: u32 = 3;
    pub const DEFAULT_LEVEL: u32 = 12;

    pub fn new(ctx: PrecisionContext) -> Self {
        Self { level: Self::DEFAULT_LEVEL, ctx }
    }

    pub fn with_level(mut self, level: u32) -> Self {
        self.level = level;
        self
    }

    pub fn validate(&self) -> Result<(), LogSineError> {
        if self.level < Self::MIN_LEVEL {
            return Err(LogSineError::InvalidOptions(format!(
                "level {} below {}",
                self.level,
                Self::MIN_LEVEL
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogSineResult {
    pub value: Real,
    pub levels_used: u32,
    pub self_error: Real,
}

/// Integrates `φ(ln sin x)` over `[0, π/2]`; `degree` bounds the logarithmic growth of `φ`.
fn integrate_log_sine(phi: &dyn Fn(&Float) -> Float, degree: u32, opts: &QuadratureOptions) -> Result<LogSineResult, LogSineError> {
    opts.validate()?;
    let ctx = opts.ctx;
    let bits = ctx.bits() + 32;
    let tol = Float::with_val(bits, ctx.tolerance());
    let ladder = quadrature::integrate(phi, degree, &tol, opts.level, bits);
    let scale = Float::with_val(bits, ladder.value.abs_ref()).max(&Float::with_val(bits, 1));
    if ladder.last_change > Float::with_val(bits, &tol * &scale) {
        return Err(LogSineError::NotConverged {
            levels: ladder.level,
            self_error: Real::new(ladder.last_change, ctx).to_decimal(3),
        });
    }
    Ok(LogSineResult {
        value: Real::new(ladder.value, ctx),
        levels_used: ladder.level,
        self_error: Real::new(ladder.last_change, ctx),
    })
}

/// `∫₀^{π/2} (ln sin x)ⁿ dx` by double-exponential quadrature.
pub fn log_sin_moment(n: u32, opts: &QuadratureOptions) -> Result<LogSineResult, LogSineError> {
    integrate_log_sine(&|ls: &Float| powu(ls, n), n, opts)
}

fn powu(x: &Float, n: u32) -> Float {
    Float::with_val(x.prec(), x.pow(n))
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `|(−1)ⁿ/n! · ∫₀^{π/2}(ln sin x)ⁿ dx − 1 − L(n+1)|`.
pub fn theorem1_residual(n: u32, ctx: PrecisionContext) -> Result<Real, LogSineError> {
    if n == 0 {
        return Err(LogSineError::InvalidOptions("theorem residual requires n >= 1".into()));
    }
    let moment = log_sin_moment(n, &QuadratureOptions::new(ctx))?.value;
    let l = eval_converged(&SeriesFamily::indexed(FamilyTag::L, n + 1).kernel(), ctx)?;
    let mut lhs = moment / Real::new(Float::with_val(ctx.bits(), factorial(n)), ctx);
    if n % 2 == 1 {
        lhs = -lhs;
    }
    Ok((lhs - Real::from_i64(1, ctx) - l).abs())
}

/// Checks `∫₀^π ln³(2 sin(x/2)) dx = −(3/2)πζ(3)` and the third-moment value it rests on.
///
/// Returns the largest of three gaps:
/// - `(3/2)πζ(3) + 2∫₀^{π/2} ln³(2 sin p) dp` with the integral by direct quadrature;
/// - direct quadrature against the binomial expansion in the moments `M_0..M_3`;
/// - `M_3` against `−(3/4)πζ(3) − (π³/8)ln 2 − (π/2)ln³ 2`.
pub fn ls4_check(ctx: PrecisionContext) -> Result<Real, LogSineError> {
    let opts = QuadratureOptions::new(ctx);
    let bits = ctx.bits() + 32;
    let ln2_w = crate::numerics::raw::ln2(bits);
    let direct = integrate_log_sine(
        &|ls: &Float| powu(&Float::with_val(ls.prec(), ls + &ln2_w), 3),
        3,
        &opts,
    )?
    .value;

    let ln2 = const_ln2(ctx);
    let pi = const_pi(ctx);
    let z3 = const_zeta(3, ctx).expect("zeta(3)");
    let moments: Vec<Real> = (0..=3)
        .map(|n| log_sin_moment(n, &opts).map(|r| r.value))
        .collect::<Result<_, _>>()?;
    let binom = [1, 3, 3, 1];
    let mut expanded = Real::zero(ctx);
    for (j, m) in moments.iter().enumerate() {
        expanded = expanded + Real::from_i64(binom[j], ctx) * ln2.pow(3 - j as u32) * m;
    }

    let q = |a: i64, b: i64| Real::from_i64(a, ctx) / Real::from_i64(b, ctx);
    let ls4 = (q(3, 2) * &pi * &z3 + q(2, 1) * &direct).abs();
    let routes = (&direct - &expanded).abs();
    let m3_closed = -(q(3, 4) * &pi * &z3) - q(1, 8) * pi.pow(3) * &ln2 - q(1, 2) * &pi * ln2.pow(3);
    let m3 = (&moments[3] - m3_closed).abs();
    Ok([ls4, routes, m3].into_iter().fold(Real::zero(ctx), |a, b| if b > a { b } else { a }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::with_digits(d).unwrap()
    }

    #[test]
    fn low_moments() {
        let c = ctx(30);
        let opts = QuadratureOptions::new(c);
        let m0 = log_sin_moment(0, &opts).unwrap();
        assert!(m0.value.agrees_to(&(const_pi(c) / Real::from_i64(2, c)), 29));
        let m1 = log_sin_moment(1, &opts).unwrap();
        let want = -(const_pi(c) * const_ln2(c)) / Real::from_i64(2, c);
        assert!((m1.value - want).abs() < 1e-28);
        assert!(m1.self_error <= c.tolerance().to_f64());
    }

    #[test]
    fn moment_signs_alternate() {
        let opts = QuadratureOptions::new(ctx(20));
        for n in 1..=6u32 {
            let v = log_sin_moment(n, &opts).unwrap().value;
            assert_eq!(v.is_sign_negative(), n % 2 == 1, "n={n}");
        }
    }

    #[test]
    fn level_cap_is_enforced() {
        let opts = QuadratureOptions::new(ctx(40)).with_level(3);
        assert!(matches!(log_sin_moment(2, &opts), Err(LogSineError::NotConverged { .. })));
        assert!(log_sin_moment(2, &QuadratureOptions::new(ctx(20)).with_level(2)).is_err());
    }

    #[test]
    fn theorem_and_ls4() {
        let c = ctx(30);
        for n in 1..=3 {
            let r = theorem1_residual(n, c).unwrap();
            assert!(r < 1e-20, "n={n}: {r}");
        }
        let r = ls4_check(c).unwrap();
        assert!(r < 1e-20, "{r}");
        assert!(theorem1_residual(0, c).is_err());
    }
}
