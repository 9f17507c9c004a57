//! Asymptotic expansions in `1/k` (with `ln k` powers) and their tail sums.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use rug::{Float, Integer, Rational};

use super::kernel::{Kernel, LinearFactor};
use crate::numerics::{bernoulli, bernoulli_over_factorial, raw};

/// A finite sum `Σ coeff · x^(-half/2) · (ln x)^log`, keyed by `(half, log)`.
#[derive(Clone, Debug)]
pub(crate) struct LogSeries {
    bits: u32,
    terms: BTreeMap<(i64, u32), Float>,
}

impl LogSeries {
    pub fn zero(bits: u32) -> Self {
        Self { bits, terms: BTreeMap::new() }
    }

    pub fn one(bits: u32) -> Self {
        let mut s = Self::zero(bits);
        s.push(0, 0, Float::with_val(bits, 1));
        s
    }

    pub fn push(&mut self, half: i64, log: u32, coeff: Float) {
        if coeff.is_zero() {
            return;
        }
        let bits = self.bits;
        self.terms
            .entry((half, log))
            .and_modify(|c| *c += &coeff)
            .or_insert_with(|| Float::with_val(bits, coeff));
    }

    pub fn push_rational(&mut self, half: i64, log: u32, coeff: &Rational) {
        let bits = self.bits;
        self.push(half, log, Float::with_val(bits, coeff));
    }

    pub fn lead_half(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn mul(&self, other: &Self, max_half: i64) -> Self {
        let mut out = Self::zero(self.bits);
        for ((h1, l1), c1) in &self.terms {
            for ((h2, l2), c2) in &other.terms {
                if h1 + h2 <= max_half {
                    out.push(h1 + h2, l1 + l2, Float::with_val(self.bits, c1 * c2));
                }
            }
        }
        out
    }

    #[cfg(test)]
    fn x_pow(ln_x: &Float, half: i64, bits: u32) -> Float {
        Float::with_val(bits, ln_x * Rational::from((-half, 2))).exp()
    }

    #[cfg(test)]
    pub fn eval(&self, x: &Float) -> Float {
        let bits = self.bits;
        let ln_x = Float::with_val(bits, x.ln_ref());
        let mut sum = Float::new(bits);
        for ((half, log), c) in &self.terms {
            let mut t = Self::x_pow(&ln_x, *half, bits);
            for _ in 0..*log {
                t *= &ln_x;
            }
            sum += t * c;
        }
        sum
    }

    /// `∫_a^∞` of the series; every term must decay faster than `1/x`.
    pub fn integral_from(&self, a: &Float) -> Float {
        let bits = self.bits;
        let ln_a = Float::with_val(bits, a.ln_ref());
        let mut sum = Float::new(bits);
        for ((half, log), c) in &self.terms {
            assert!(*half > 2, "integral of a non-integrable term x^(-{half}/2)");
            sum += Float::with_val(bits, power_log_integral(*half, *log, &ln_a, bits) * c);
        }
        sum
    }

    /// `Σ_{k>n}` of the series by Euler–Maclaurin with `em_terms` Bernoulli corrections.
    pub fn tail_sum(&self, n: u64, em_terms: usize) -> Float {
        let bits = self.bits;
        let mut sum = Float::new(bits);
        for ((half, log), c) in &self.terms {
            sum += Float::with_val(bits, power_log_tail_raw(*half, *log, n, em_terms, bits) * c);
        }
        sum
    }
}

/// `∫_a^∞ x^(-s) (ln x)^m dx` with `s = half/2 > 1`.
fn power_log_integral(half: i64, m: u32, ln_a: &Float, bits: u32) -> Float {
    let s_minus_1 = Float::with_val(bits, Rational::from((half - 2, 2)));
    let a_pow = Float::with_val(bits, ln_a * Rational::from((2 - half, 2))).exp();
    // a^(1-s) Σ_i m!/(m-i)! (ln a)^(m-i) / (s-1)^(i+1)
    let mut sum = Float::new(bits);
    let mut falling = Float::with_val(bits, 1);
    let mut denom = s_minus_1.clone();
    for i in 0..=m {
        let mut t = Float::with_val(bits, &falling / &denom);
        for _ in 0..(m - i) {
            t *= ln_a;
        }
        sum += t;
        falling *= m - i;
        denom *= &s_minus_1;
    }
    sum * a_pow
}

/// `Σ_{k>n} k^(-half/2) (ln k)^m` by Euler–Maclaurin at `n`.
pub(crate) fn power_log_tail_raw(half: i64, m: u32, n: u64, em_terms: usize, bits: u32) -> Float {
    let x = Float::with_val(bits, n);
    let ln_x = Float::with_val(bits, x.ln_ref());
    let s = Rational::from((half, 2));
    let x_pow_s = Float::with_val(bits, &ln_x * (-s.clone())).exp();
    let inv_x = Float::with_val(bits, x.recip_ref());

    let poly_at = |p: &[Float]| -> Float {
        let mut acc = Float::new(bits);
        for c in p.iter().rev() {
            acc *= &ln_x;
            acc += c;
        }
        acc
    };

    // g^(r)(x) = x^(-s-r) P_r(ln x) with P_0 = L^m and P_{r+1} = P_r' - (s+r) P_r
    let mut p: Vec<Float> = (0..=m).map(|i| Float::with_val(bits, if i == m { 1 } else { 0 })).collect();
    let g0 = Float::with_val(bits, &x_pow_s * poly_at(&p));
    let mut total = power_log_integral(half, m, &ln_x, bits) - g0 / 2u32;

    let mut x_pow_r = x_pow_s;
    for r in 0..(2 * em_terms) {
        let shift = Float::with_val(bits, &s + Rational::from(r as u64));
        let mut next: Vec<Float> = Vec::with_capacity(p.len());
        for i in 0..p.len() {
            let mut v = Float::with_val(bits, &p[i] * &shift);
            v = -v;
            if i + 1 < p.len() {
                v += Float::with_val(bits, &p[i + 1] * (i as u32 + 1));
            }
            next.push(v);
        }
        p = next;
        x_pow_r *= &inv_x;
        let order = r + 1;
        if order % 2 == 1 {
            let b = bernoulli_over_factorial(order + 1);
            let deriv = Float::with_val(bits, &x_pow_r * poly_at(&p));
            total -= deriv * b;
        }
    }
    total
}

fn central_coefficients() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Coefficients `e_n` with `c_k ~ (πk)^(-1/2) Σ e_n k^(-n)`.
pub fn central_asymptotic_coefficients(order: usize) -> Vec<Rational> {
    let mut cache = central_coefficients().lock().expect("coefficient cache poisoned");
    if cache.len() <= order {
        // ln(c_k sqrt(πk)) = Σ_{n odd} (2^-n - 2) B_{n+1} / (n(n+1)) k^-n
        let a: Vec<Rational> = (0..=order)
            .map(|n| {
                if n % 2 == 0 {
                    return Rational::new();
                }
                let two_pow = Rational::from((Integer::from(1), Integer::from(1) << n as u32));
                let factor = two_pow - Rational::from(2);
                factor * bernoulli(n + 1) / Rational::from((n * (n + 1)) as u64)
            })
            .collect();
        let mut e = vec![Rational::from(1)];
        for n in 1..=order {
            let mut acc = Rational::new();
            for j in 1..=n {
                acc += Rational::from(j as u64) * &a[j] * &e[n - j];
            }
            e.push(acc / Rational::from(n as u64));
        }
        *cache = e;
    }
    cache[..=order].to_vec()
}

fn generalized_binomial(top: i64, i: u32) -> Rational {
    let mut r = Rational::from(1);
    for j in 0..i as i64 {
        r *= Rational::from((top - j, j + 1));
    }
    r
}

fn central_series(order: usize, bits: u32) -> LogSeries {
    let pi = raw::pi(bits);
    let inv_sqrt_pi = Float::with_val(bits, pi.sqrt_ref()).recip();
    let mut s = LogSeries::zero(bits);
    for (n, e) in central_asymptotic_coefficients(order).iter().enumerate() {
        s.push(1 + 2 * n as i64, 0, Float::with_val(bits, e * &inv_sqrt_pi));
    }
    s
}

enum HarmonicKind {
    Full,
    Odd,
    Double,
}

fn harmonic_series(kind: HarmonicKind, order: usize, bits: u32) -> LogSeries {
    let gamma = raw::gamma(bits);
    let ln2 = raw::ln2(bits);
    let mut s = LogSeries::zero(bits);
    let (log_coeff, constant, first): (Rational, Float, Rational) = match kind {
        HarmonicKind::Full => (Rational::from(1), gamma.clone(), Rational::from((1, 2))),
        HarmonicKind::Odd => (Rational::from((1, 2)), Float::with_val(bits, &gamma / 2u32) + &ln2, Rational::new()),
        HarmonicKind::Double => (Rational::from(1), Float::with_val(bits, &gamma + &ln2), Rational::from((1, 4))),
    };
    s.push_rational(0, 1, &log_coeff);
    s.push(0, 0, constant);
    if order >= 1 {
        s.push_rational(2, 0, &first);
    }
    let mut j = 1usize;
    while 2 * j <= order {
        let b = bernoulli(2 * j) / Rational::from(2 * j as u64);
        let four_j = Rational::from((Integer::from(1), Integer::from(1) << (2 * j as u32)));
        let c = match kind {
            HarmonicKind::Full => -b,
            HarmonicKind::Odd => b * (Rational::from((1, 2)) - four_j),
            HarmonicKind::Double => -b * four_j,
        };
        s.push_rational(4 * j as i64, 0, &c);
        j += 1;
    }
    s
}

fn linear_series(f: &LinearFactor, order: usize, bits: u32) -> LogSeries {
    let mut s = LogSeries::zero(bits);
    let ratio = Rational::from((f.offset, f.scale as i64));
    let a_pow = Integer::from(Integer::u_pow_u(f.scale, f.power.unsigned_abs()));
    let lead = if f.power >= 0 {
        Rational::from((Integer::from(1), a_pow))
    } else {
        Rational::from(a_pow)
    };
    let mut ratio_pow = Rational::from(1);
    for i in 0..=order as u32 {
        let binom = generalized_binomial(-(f.power as i64), i);
        if binom == 0 {
            break;
        }
        let c = Rational::from(&lead * &binom) * &ratio_pow;
        s.push_rational(2 * (f.power as i64 + i as i64), 0, &c);
        if ratio == 0 {
            break;
        }
        ratio_pow *= &ratio;
    }
    s
}

/// Asymptotic expansion of a kernel, accurate through relative order `k^-order`.
pub(crate) fn kernel_expansion(kernel: &Kernel, order: usize, bits: u32) -> LogSeries {
    let mut factors: Vec<LogSeries> = Vec::new();
    if kernel.central {
        factors.push(central_series(order, bits));
    }
    for _ in 0..kernel.harmonic {
        factors.push(harmonic_series(HarmonicKind::Full, order, bits));
    }
    for _ in 0..kernel.odd_harmonic {
        factors.push(harmonic_series(HarmonicKind::Odd, order, bits));
    }
    for _ in 0..kernel.harmonic_double {
        factors.push(harmonic_series(HarmonicKind::Double, order, bits));
    }
    for f in &kernel.linear {
        factors.push(linear_series(f, order, bits));
    }
    let span = 2 * order as i64;
    let mut acc = LogSeries::one(bits);
    let mut lead = 0i64;
    for f in &factors {
        lead += f.lead_half().unwrap_or(0);
        acc = acc.mul(f, lead + span);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::central_ratio;

    const BITS: u32 = 256;

    #[test]
    fn central_coefficients_start_correctly() {
        let e = central_asymptotic_coefficients(3);
        assert_eq!(e[0], 1);
        assert_eq!(e[1], Rational::from((-1, 8)));
        assert_eq!(e[2], Rational::from((1, 128)));
        assert_eq!(e[3], Rational::from((5, 1024)));
    }

    #[test]
    fn central_expansion_matches_exact_values() {
        for (k, order, digits) in [(1000u64, 12usize, 40.0), (10_000, 12, 50.0)] {
            let exact = Float::with_val(BITS, &central_ratio(k));
            let approx = central_series(order, BITS).eval(&Float::with_val(BITS, k));
            let rel = Float::with_val(BITS, (exact.clone() - approx) / exact).abs();
            assert!(rel.to_f64() < 10f64.powf(-digits), "k={k}: {}", rel.to_f64());
        }
    }

    #[test]
    fn harmonic_expansions_match_exact_values() {
        let k = 500u64;
        let x = Float::with_val(BITS, k);
        let cases = [
            (HarmonicKind::Full, crate::numerics::harmonic(k)),
            (HarmonicKind::Odd, crate::numerics::odd_harmonic(k)),
            (HarmonicKind::Double, crate::numerics::harmonic(2 * k)),
        ];
        for (kind, exact) in cases {
            let approx = harmonic_series(kind, 16, BITS).eval(&x);
            let err = Float::with_val(BITS, approx - Float::with_val(BITS, &exact)).abs();
            assert!(err.to_f64() < 1e-40, "{}", err.to_f64());
        }
    }

    #[test]
    fn linear_expansion_handles_numerators_and_shifts() {
        let x = Float::with_val(BITS, 300);
        for (a, b, p) in [(2u32, -1i64, 3i32), (1, 5, 2), (1, -1, -1), (2, 1, -2)] {
            let f = LinearFactor::new(a, b, p);
            let approx = linear_series(&f, 30, BITS).eval(&x);
            let base = Float::with_val(BITS, 300 * a as i64 + b);
            let exact = Float::with_val(BITS, rug::ops::Pow::pow(base, -p));
            let rel = Float::with_val(BITS, (approx - &exact) / &exact).abs();
            assert!(rel.to_f64() < 1e-50, "({a},{b},{p}): {}", rel.to_f64());
        }
    }

    #[test]
    fn tail_of_inverse_squares() {
        // Σ_{k>100} 1/k² = ζ(2) − H_100^(2)
        let tail = power_log_tail_raw(4, 0, 100, 20, BITS);
        let mut partial = Rational::new();
        for k in 1..=100u64 {
            partial += Rational::from((1, k * k));
        }
        let expected = raw::zeta(2, BITS) - Float::with_val(BITS, &partial);
        let err = Float::with_val(BITS, tail - expected).abs();
        assert!(err.to_f64() < 1e-60, "{}", err.to_f64());
    }

    #[test]
    fn tail_with_log_matches_direct_difference() {
        // Σ_{k>200} ln k / k³ via the tail at 200 minus the tail at 400 equals the direct block
        let t200 = power_log_tail_raw(6, 1, 200, 20, BITS);
        let t400 = power_log_tail_raw(6, 1, 400, 20, BITS);
        let mut direct = Float::new(BITS);
        for k in 201..=400u64 {
            let kf = Float::with_val(BITS, k);
            direct += Float::with_val(BITS, kf.ln_ref()) / (kf.clone() * &kf * &kf);
        }
        let err = Float::with_val(BITS, t200 - t400 - direct).abs();
        assert!(err.to_f64() < 1e-60, "{}", err.to_f64());
    }

    #[test]
    fn integral_of_log_power() {
        // ∫_1^∞ (ln x)² x^-3 dx = 2/(2³) = 1/4
        let mut s = LogSeries::zero(BITS);
        s.push(6, 2, Float::with_val(BITS, 1));
        let v = s.integral_from(&Float::with_val(BITS, 1));
        assert!((v.to_f64() - 0.25).abs() < 1e-30);
    }
}
