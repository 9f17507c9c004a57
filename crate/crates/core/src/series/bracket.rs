//! Rigorous-style two-sided bounds on series tails by integral comparison.

use rug::{Float, Integer};

use super::asymptotic::LogSeries;
use super::evaluate::float_partial_sums;
use super::kernel::{Kernel, LinearFactor};
use super::{SeriesError, SeriesFamily};
use crate::numerics::{raw, PrecisionContext, Real};

/// Lower and upper bound series for one factor, valid for `x ≥ kernel_bound_start`.
fn factor_bounds(kernel: &Kernel, bits: u32) -> Vec<(LogSeries, LogSeries)> {
    let f = |v: Float| Float::with_val(bits, v);
    let gamma = raw::gamma(bits);
    let ln2 = raw::ln2(bits);
    let mut out = Vec::new();
    if kernel.central {
        // (πx)^(-1/2)(1 - 1/(4x)) ≤ c_x ≤ (πx)^(-1/2)
        let s = f(raw::pi(bits).sqrt()).recip();
        let mut lo = LogSeries::zero(bits);
        lo.push(1, 0, s.clone());
        lo.push(3, 0, f(-s.clone() / 4u32));
        let mut up = LogSeries::zero(bits);
        up.push(1, 0, s);
        out.push((lo, up));
    }
    for _ in 0..kernel.harmonic {
        let mut lo = LogSeries::zero(bits);
        lo.push(0, 1, f(Float::with_val(bits, 1)));
        lo.push(0, 0, gamma.clone());
        let mut up = lo.clone();
        up.push(2, 0, f(Float::with_val(bits, 0.5)));
        out.push((lo, up));
    }
    for _ in 0..kernel.odd_harmonic {
        let mut base = LogSeries::zero(bits);
        base.push(0, 1, f(Float::with_val(bits, 0.5)));
        base.push(0, 0, f(Float::with_val(bits, &gamma / 2u32) + &ln2));
        let mut lo = base.clone();
        lo.push(2, 0, f(Float::with_val(bits, -0.25)));
        let mut up = base;
        up.push(2, 0, f(Float::with_val(bits, 0.25)));
        out.push((lo, up));
    }
    for _ in 0..kernel.harmonic_double {
        let mut lo = LogSeries::zero(bits);
        lo.push(0, 1, f(Float::with_val(bits, 1)));
        lo.push(0, 0, f(Float::with_val(bits, &gamma + &ln2)));
        let mut up = lo.clone();
        up.push(2, 0, f(Float::with_val(bits, 0.25)));
        out.push((lo, up));
    }
    for l in &kernel.linear {
        out.push(linear_bounds(l, bits));
    }
    out
}

fn linear_bounds(l: &LinearFactor, bits: u32) -> (LogSeries, LogSeries) {
    let q = l.power.unsigned_abs();
    let a_pow = Float::with_val(bits, Integer::from(Integer::u_pow_u(l.scale, q)));
    let lead = if l.power > 0 { a_pow.recip() } else { a_pow };
    let half = 2 * l.power as i64;
    // relative first-order correction t = |b|/(a x), with q·t ≤ 1/4 on the valid range
    let corr = Float::with_val(bits, &lead * Integer::from(l.offset.unsigned_abs())) / l.scale;
    let corr = Float::with_val(bits, corr * q);
    let mut plain = LogSeries::zero(bits);
    plain.push(half, 0, lead);
    let mut shifted = plain.clone();
    let grows = (l.power > 0) == (l.offset < 0);
    if grows {
        shifted.push(half + 2, 0, Float::with_val(bits, corr * 2u32));
        (plain, shifted)
    } else {
        shifted.push(half + 2, 0, -corr);
        (shifted, plain)
    }
}

/// First index from which every per-factor bound holds and is positive.
fn bound_start(kernel: &Kernel) -> u64 {
    let mut start = 64u64;
    for l in &kernel.linear {
        let need = 4 * l.offset.unsigned_abs() * l.power.unsigned_abs() as u64;
        start = start.max(need.div_ceil(l.scale as u64));
    }
    start
}

/// Bounds `(L, U)` with `L ≤ Σ_{k>K} term(k) ≤ U`.
pub fn tail_bracket(spec: &SeriesFamily, k: u64, ctx: PrecisionContext) -> Result<(Real, Real), SeriesError> {
    tail_bracket_kernel(&spec.kernel(), k, ctx)
}

/// Integral comparison on product bounds; below the bound start the terms are summed directly.
pub fn tail_bracket_kernel(kernel: &Kernel, k: u64, ctx: PrecisionContext) -> Result<(Real, Real), SeriesError> {
    kernel.validate()?;
    if kernel.alternating {
        return Err(SeriesError::Alternating(kernel.to_string()));
    }
    let bits = ctx.bits() + 32;
    let start = bound_start(kernel).max(k);
    let sums = float_partial_sums(kernel, &[k, start], bits);
    let direct = Float::with_val(bits, &sums[1] - &sums[0]);

    let mut lo = LogSeries::one(bits);
    let mut up = LogSeries::one(bits);
    for (l, u) in factor_bounds(kernel, bits) {
        lo = lo.mul(&l, i64::MAX);
        up = up.mul(&u, i64::MAX);
    }
    let lower = lo.integral_from(&Float::with_val(bits, start + 1)) + &direct;
    let upper = up.integral_from(&Float::with_val(bits, start)) + &direct;
    // absorb rounding in the working precision
    let slack = Float::with_val(bits, Float::i_exp(1, -(ctx.bits() as i32)));
    Ok((Real::new(lower - &slack, ctx), Real::new(upper + &slack, ctx)))
}
