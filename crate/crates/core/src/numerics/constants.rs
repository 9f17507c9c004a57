//! Fundamental constants computed from first principles.
//!
//! Each constant is produced by a single internal route here; the test suite
//! cross-checks every one of them against an independent route (classical
//! identities, a second series, or MPFR's own implementation).

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Float, Rational};

use super::bernoulli::bernoulli;
use super::{NumericsError, PrecisionContext, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    Pi,
    Ln2,
    Gamma,
    Zeta(u32),
    LiHalf(u32),
}

fn cache() -> &'static Mutex<HashMap<(Key, u32), Float>> {
    static CACHE: OnceLock<Mutex<HashMap<(Key, u32), Float>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: Key, bits: u32, compute: impl FnOnce(u32) -> Float) -> Float {
    if let Some(v) = cache().lock().expect("constant cache poisoned").get(&(key, bits)) {
        return v.clone();
    }
    // computed outside the lock; a racing thread may compute the same value
    let v = compute(bits);
    cache()
        .lock()
        .expect("constant cache poisoned")
        .entry((key, bits))
        .or_insert(v)
        .clone()
}

fn eps_at(bits: u32) -> Float {
    Float::with_val(bits, Float::i_exp(1, -(bits as i32)))
}

/// `atan(1/x)` by its alternating Taylor series.
fn atan_inv(x: u32, bits: u32) -> Float {
    let work = bits + 32;
    let eps = eps_at(work);
    let x2 = Float::with_val(work, x) * x;
    let mut power = Float::with_val(work, 1) / x;
    let mut sum = Float::new(work);
    let mut j: u64 = 0;
    loop {
        let term = Float::with_val(work, &power / (2 * j + 1));
        if j.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        if term.abs() < eps {
            break;
        }
        power /= &x2;
        j += 1;
    }
    sum
}

fn pi_bits(bits: u32) -> Float {
    cached(Key::Pi, bits, |bits| {
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        let v = Float::with_val(bits + 32, atan_inv(5, bits) * 16u32) - atan_inv(239, bits) * 4u32;
        Float::with_val(bits, v)
    })
}

fn ln2_bits(bits: u32) -> Float {
    cached(Key::Ln2, bits, |bits| {
        // ln 2 = 2 atanh(1/3) = 2 sum 1/((2j+1) 3^(2j+1))
        let work = bits + 32;
        let eps = eps_at(work);
        let mut power = Float::with_val(work, 1) / 3u32;
        let mut sum = Float::new(work);
        let mut j: u64 = 0;
        loop {
            let term = Float::with_val(work, &power / (2 * j + 1));
            sum += &term;
            if term < eps {
                break;
            }
            power /= 9u32;
            j += 1;
        }
        Float::with_val(bits, sum * 2u32)
    })
}

fn gamma_bits(bits: u32) -> Float {
    cached(Key::Gamma, bits, |bits| {
        // gamma = H_N - ln N - 1/(2N) + sum_j B_2j / (2j N^2j)
        let work = bits + 32;
        let n: u32 = 1000.max(bits / 2);
        let mut h = Float::new(work);
        for i in 1..=n {
            h += Float::with_val(work, 1) / i;
        }
        let nf = Float::with_val(work, n);
        let mut g = h - Float::with_val(work, nf.ln_ref()) - Float::with_val(work, 1) / (2 * n);
        let eps = eps_at(work);
        let n2 = Float::with_val(work, &nf * &nf);
        let mut npow = n2.clone();
        for j in 1.. {
            let b = bernoulli(2 * j);
            let term = Float::with_val(work, &b / Rational::from(2 * j as u64)) / &npow;
            g += &term;
            if term.abs() < eps || j > 200 {
                break;
            }
            npow *= &n2;
        }
        Float::with_val(bits, g)
    })
}

fn zeta_bits(m: u32, bits: u32) -> Float {
    cached(Key::Zeta(m), bits, |bits| {
        // Borwein's accelerated eta series: eta(m) = zeta(m) (1 - 2^(1-m))
        let work = bits + 32;
        let rate = (3.0 + 8f64.sqrt()).log2();
        let n = (work as f64 / rate).ceil() as u64 + 2;
        let mut d = Vec::with_capacity(n as usize + 1);
        let mut t = Rational::from(1);
        let mut acc = Rational::from(1);
        d.push(acc.clone());
        for i in 1..=n {
            t *= Rational::from(((n + i - 1) * (n - i + 1) * 4, (2 * i) * (2 * i - 1)));
            acc += &t;
            d.push(acc.clone());
        }
        let dn = d[n as usize].clone();
        let mut s = Float::new(work);
        for k in 0..n {
            let diff = Float::with_val(work, Rational::from(&d[k as usize] - &dn));
            let denom = Float::with_val(work, k + 1).pow(m);
            let term = diff / denom;
            if k % 2 == 0 {
                s += term;
            } else {
                s -= term;
            }
        }
        let eta = -s / Float::with_val(work, &dn);
        let factor = Float::with_val(work, 1) - Float::with_val(work, Float::i_exp(1, 1 - m as i32));
        Float::with_val(bits, eta / factor)
    })
}

fn li_half_bits(m: u32, bits: u32) -> Float {
    cached(Key::LiHalf(m), bits, |bits| {
        // truncate at K with tail <= 2^-K
        let work = bits + 32;
        let k_max = work as u64 + 2;
        let mut sum = Float::new(work);
        let mut two_pow = Float::with_val(work, 0.5);
        for k in 1..=k_max {
            let denom = Float::with_val(work, k).pow(m);
            sum += Float::with_val(work, &two_pow / denom);
            two_pow /= 2u32;
        }
        Float::with_val(bits, sum)
    })
}

pub fn const_pi(ctx: PrecisionContext) -> Real {
    Real::new(pi_bits(ctx.bits()), ctx)
}

pub fn const_ln2(ctx: PrecisionContext) -> Real {
    Real::new(ln2_bits(ctx.bits()), ctx)
}

/// Euler's constant. Internal to the tail evaluator; never a closed-form symbol.
pub fn const_euler_gamma(ctx: PrecisionContext) -> Real {
    Real::new(gamma_bits(ctx.bits()), ctx)
}

pub fn const_zeta(m: u32, ctx: PrecisionContext) -> Result<Real, NumericsError> {
    if m < 2 {
        return Err(NumericsError::ZetaPole(m));
    }
    Ok(Real::new(zeta_bits(m, ctx.bits()), ctx))
}

pub fn const_li_half(m: u32, ctx: PrecisionContext) -> Result<Real, NumericsError> {
    if m < 1 {
        return Err(NumericsError::Domain(format!("Li_{m}(1/2) requires m >= 1")));
    }
    Ok(Real::new(li_half_bits(m, ctx.bits()), ctx))
}

/// Raw-Float accessors for internal hot paths working at a given bit precision.
pub(crate) mod raw {
    use rug::Float;

    pub fn pi(bits: u32) -> Float {
        super::pi_bits(bits)
    }
    pub fn ln2(bits: u32) -> Float {
        super::ln2_bits(bits)
    }
    pub fn gamma(bits: u32) -> Float {
        super::gamma_bits(bits)
    }
    #[cfg(test)]
    pub fn zeta(m: u32, bits: u32) -> Float {
        super::zeta_bits(m, bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::with_digits(d).unwrap()
    }

    fn mpfr(c: Constant, ctx: PrecisionContext) -> Real {
        Real::new(Float::with_val(ctx.bits(), c), ctx)
    }

    #[test]
    fn pi_at_15_digits() {
        let c = ctx(15);
        assert_eq!(const_pi(c).to_decimal(15), "3.14159265358979");
        assert!(const_pi(c).agrees_to(&mpfr(Constant::Pi, c), 15));
    }

    #[test]
    fn pi_against_mpfr_at_200_digits() {
        let c = ctx(200);
        assert!(const_pi(c).agrees_to(&mpfr(Constant::Pi, c), 200));
    }

    #[test]
    fn ln2_routes_agree() {
        let c = ctx(60);
        assert_eq!(const_ln2(ctx(15)).to_decimal(15), "6.93147180559945e-1");
        assert!(const_ln2(c).agrees_to(&mpfr(Constant::Log2, c), 60));
        // sum 1/(k 2^k) is an independent series for ln 2
        assert!(const_ln2(c).agrees_to(&const_li_half(1, c).unwrap(), 60));
    }

    #[test]
    fn gamma_against_mpfr() {
        let c = ctx(80);
        assert!(const_euler_gamma(c).agrees_to(&mpfr(Constant::Euler, c), 80));
    }

    #[test]
    fn zeta_even_values_match_pi_powers() {
        let c = ctx(50);
        let pi = const_pi(c);
        let z2 = const_zeta(2, c).unwrap();
        let z4 = const_zeta(4, c).unwrap();
        assert!(z2.agrees_to(&(pi.pow(2) / Real::from_i64(6, c)), 50));
        assert!(z4.agrees_to(&(pi.pow(4) / Real::from_i64(90, c)), 50));
    }

    #[test]
    fn zeta_odd_against_mpfr() {
        let c = ctx(60);
        for m in [3u32, 5, 7, 9] {
            let reference = Float::with_val(c.bits(), Float::with_val(c.bits(), m).zeta());
            assert!(const_zeta(m, c).unwrap().agrees_to(&Real::new(reference, c), 60), "zeta({m})");
        }
    }

    #[test]
    fn zeta_rejects_pole() {
        assert!(matches!(const_zeta(1, ctx(20)), Err(NumericsError::ZetaPole(1))));
        assert!(const_zeta(0, ctx(20)).is_err());
    }

    #[test]
    fn li_half_dilog_value() {
        let c = ctx(40);
        let pi = const_pi(c);
        let l2 = const_ln2(c);
        let expected = pi.pow(2) / Real::from_i64(12, c) - l2.pow(2) / Real::from_i64(2, c);
        assert!(const_li_half(2, c).unwrap().agrees_to(&expected, 40));
    }

    #[test]
    fn precision_doubling_agreement() {
        let d = 25;
        let lo = ctx(d);
        let hi = lo.doubled();
        assert!(const_pi(lo).agrees_to(&const_pi(hi), d));
        assert!(const_ln2(lo).agrees_to(&const_ln2(hi), d));
        for m in 2..=8 {
            assert!(const_zeta(m, lo).unwrap().agrees_to(&const_zeta(m, hi).unwrap(), d));
        }
        for m in 1..=5 {
            assert!(const_li_half(m, lo).unwrap().agrees_to(&const_li_half(m, hi).unwrap(), d));
        }
    }
}
