//! Double-exponential quadrature on `[0, π/2]` for integrands of the form `φ(ln sin x)`.
//!
//! The map `x = (π/4)(1 + tanh((π/2) sinh t))` sends the real line onto the
//! interval and squeezes both endpoints doubly exponentially. For `t ≥ 0` the
//! distance to the right endpoint is `d = (π/2)/(1 + e^{2u})`, `u = (π/2) sinh t`,
//! and the mirror node at `−t` sits at `x = d`, so one `d` serves both sides
//! and `sin`, `cos` are taken of the small quantity directly.

use rug::ops::Pow;
use rug::Float;

use crate::numerics::raw;

/// Per-level state: the running trapezoid value and its change at the last refinement.
pub(crate) struct Ladder {
    pub value: Float,
    pub last_change: Float,
    pub level: u32,
}

/// Node contributions at `t`: `(w(t), ln sin d, ln cos d)`; for `t = 0` both logs are equal.
fn node(t: &Float, bits: u32) -> (Float, Float, Float) {
    let pi = raw::pi(bits);
    let half_pi = Float::with_val(bits, &pi / 2u32);
    let u = Float::with_val(bits, t.sinh_ref()) * &half_pi;
    let cosh_u = Float::with_val(bits, u.cosh_ref());
    let weight = Float::with_val(bits, &half_pi * &half_pi) / 2u32 * Float::with_val(bits, t.cosh_ref())
        / Float::with_val(bits, cosh_u.square_ref());
    let e2u = Float::with_val(bits, Float::with_val(bits, &u * 2u32).exp_ref());
    let d = half_pi / (e2u + 1u32);
    let ln_sin = Float::with_val(bits, d.sin_ref()).ln();
    let ln_cos = Float::with_val(bits, d.cos_ref()).ln();
    (weight, ln_sin, ln_cos)
}

/// Sum of `w(t)·(φ(ln sin d) + φ(ln cos d))` over `t = jh`, odd `j` only when refining,
/// truncated once `w·(1 + |ln d|)^degree` drops below the working epsilon.
fn level_sum(phi: &dyn Fn(&Float) -> Float, degree: u32, h: &Float, odd_only: bool, bits: u32) -> Float {
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32) - 8));
    let mut sum = Float::new(bits);
    let mut j: u64 = if odd_only { 1 } else { 0 };
    let step = if odd_only { 2 } else { 1 };
    loop {
        let t = Float::with_val(bits, h * j);
        let (w, ls, lc) = node(&t, bits);
        let contribution = if j == 0 {
            Float::with_val(bits, phi(&ls) * &w)
        } else {
            Float::with_val(bits, (phi(&ls) + phi(&lc)) * &w)
        };
        sum += &contribution;
        let size = Float::with_val(bits, Float::with_val(bits, ls.abs_ref()) + 1u32).pow(degree) * &w;
        if t > 1 && size < eps {
            break;
        }
        j += step;
    }
    sum
}

/// Refines level by level until two successive values differ by at most `tol`
/// (relative to `max(1, |value|)`) or `max_level` is reached.
pub(crate) fn integrate(phi: &dyn Fn(&Float) -> Float, degree: u32, tol: &Float, max_level: u32, bits: u32) -> Ladder {
    let mut h = Float::with_val(bits, 1);
    let mut value = Float::with_val(bits, level_sum(phi, degree, &h, false, bits) * &h);
    let mut last_change = Float::with_val(bits, f64::INFINITY);
    let mut level = 0;
    while level < max_level {
        level += 1;
        h /= 2u32;
        let fresh = Float::with_val(bits, level_sum(phi, degree, &h, true, bits) * &h);
        let next = Float::with_val(bits, &value / 2u32) + fresh;
        last_change = Float::with_val(bits, &next - &value).abs();
        value = next;
        let scale = Float::with_val(bits, value.abs_ref()).max(&Float::with_val(bits, 1));
        if level >= 3 && last_change <= Float::with_val(bits, tol * &scale) {
            break;
        }
    }
    Ladder { value, last_change, level }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand_gives_half_pi() {
        let bits = 200;
        let tol = Float::with_val(bits, Float::i_exp(1, -180));
        let r = integrate(&|_| Float::with_val(bits, 1), 0, &tol, 12, bits);
        let err = Float::with_val(bits, &r.value - raw::pi(bits) / 2u32).abs();
        assert!(err < Float::i_exp(1, -170), "{err}");
    }

    #[test]
    fn first_moment() {
        let bits = 160;
        let tol = Float::with_val(bits, Float::i_exp(1, -140));
        let r = integrate(&|ls| ls.clone(), 1, &tol, 12, bits);
        let want = -raw::pi(bits) / 2u32 * raw::ln2(bits);
        let err = Float::with_val(bits, &r.value - want).abs();
        assert!(err < Float::i_exp(1, -130), "{err}");
    }
}
