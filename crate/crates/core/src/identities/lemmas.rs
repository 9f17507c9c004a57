use std::sync::OnceLock;

use rug::{Float, Rational};

use super::{BasisValue, IdentityError};
use crate::numerics::{PrecisionContext, Real, SequenceTable};

fn table() -> &'static SequenceTable {
    static TABLE: OnceLock<SequenceTable> = OnceLock::new();
    TABLE.get_or_init(SequenceTable::new)
}

fn check_index(k: u64) -> Result<(), IdentityError> {
    if k == 0 {
        return Err(IdentityError::InvalidArgument("index must be >= 1".into()));
    }
    Ok(())
}

fn recip(q: &Rational) -> Rational {
    Rational::from(q.recip_ref())
}

/// `Σ_i c_i/(i+k) = 1/(k·c_k) − 1/k`.
pub fn lemma1_f(k: u64) -> Result<Rational, IdentityError> {
    check_index(k)?;
    let inv_k = Rational::from((1, k));
    Ok((&inv_k * recip(&table().central(k))) - inv_k)
}

/// `Σ_i c_i/(i+k)² = (1/k² − 2ln2/k + 2h_k/k − H_k/k)/c_k − 1/k²`.
pub fn lemma2_f(k: u64) -> Result<BasisValue, IdentityError> {
    check_index(k)?;
    let t = table();
    let inv_c = recip(&t.central(k));
    let inv_k = Rational::from((1, k));
    let inv_k2 = Rational::from(inv_k.square_ref());
    let mut rational = &inv_k2 + (&inv_k * (t.odd_harmonic(k) * 2u32 - t.harmonic(k))) ;
    rational *= &inv_c;
    rational -= &inv_k2;
    let ln2 = Rational::from(&inv_k * &inv_c) * -2i32;
    Ok(BasisValue::new(rational, Rational::new(), ln2))
}

/// `Σ_i c_i/(2i+2j−1) = (π/2)·c_{j−1} − 1/(2j−1)`.
pub fn lemma3_g(j: u64) -> Result<BasisValue, IdentityError> {
    check_index(j)?;
    let pi = table().central(j - 1) / 2u32 ;
    Ok(BasisValue::new(Rational::from((-1, 2 * j - 1)), pi, Rational::new()))
}

/// `Σ_i h_i c_i/(i+k) = (h_k/k)/c_k`.
pub fn lemma4_rhs(k: u64) -> Result<Rational, IdentityError> {
    check_index(k)?;
    let t = table();
    Ok(t.odd_harmonic(k) / k * recip(&t.central(k)))
}

/// `h(1) + Σ_{i≤K} (h(i+1) − h(i))·c_i`, plus a hint whether the increments decay fast enough.
///
/// With `c_i ~ i^(-1/2)` the series converges only if the increments shrink
/// faster than `i^(-1/2)`. The hint compares `|Δ|·√i` at `K` and `K/2`.
pub fn telescope(hseq: impl Fn(u64) -> Rational, k: u64) -> (Rational, bool) {
    let mut prev = hseq(1);
    let mut partial = prev.clone();
    let mut c = Rational::from(1);
    let mut deltas = Vec::with_capacity(k as usize);
    for i in 1..=k {
        c *= Rational::from((2 * i - 1, 2 * i));
        let next = hseq(i + 1);
        let delta = Rational::from(&next - &prev);
        partial += Rational::from(&delta * &c);
        deltas.push(delta);
        prev = next;
    }
    (partial, increments_vanish(&deltas))
}

fn increments_vanish(deltas: &[Rational]) -> bool {
    let k = deltas.len();
    let Some(last) = deltas.last() else {
        return true;
    };
    if *last == 0 {
        return true;
    }
    let half = k / 2;
    if half == 0 {
        return false;
    }
    let weight = |i: usize| deltas[i - 1].to_f64().abs() * (i as f64).sqrt();
    let earlier = weight(half);
    earlier > 0.0 && weight(k) / earlier < 0.9
}

/// Floating telescope `h(1) + Σ_{i≤K} Δ(i)·c_i` for long truncations, `Δ(i) = h(i+1) − h(i)`.
pub fn telescope_increments(h1: &Rational, delta: impl Fn(u64) -> Rational, k: u64, ctx: PrecisionContext) -> Real {
    let bits = ctx.bits() + 32;
    let mut c = Float::with_val(bits, 1);
    let mut sum = Float::with_val(bits, h1);
    for i in 1..=k {
        c *= 2 * i - 1;
        c /= 2 * i;
        sum += Float::with_val(bits, &c * &delta(i));
    }
    Real::new(sum, ctx)
}

/// `Σ_{i≤k} (1/(2i(2i+1)))/c_i`, returned only when it equals `1 − 1/((2k+1)c_k)`.
pub fn finite_binom_sum(k: u64) -> Result<Rational, IdentityError> {
    let mut c = Rational::from(1);
    let mut lhs = Rational::new();
    for i in 1..=k {
        c *= Rational::from((2 * i - 1, 2 * i));
        lhs += Rational::from((1, 2 * i * (2 * i + 1))) / &c;
    }
    let rhs = Rational::from(1) - recip(&c) / (2 * k + 1);
    if lhs != rhs {
        return Err(IdentityError::InternalMismatch(format!("finite binomial sum at k={k}: {lhs} != {rhs}")));
    }
    Ok(lhs)
}

/// `Σ_{k≤K} 1/((2k−1)(2k+2i−1))` and its limit `h_i/(2i)`.
///
/// The limit is the telescoped form: after splitting into
/// `(1/(2k−1) − 1/(2k+2i−1))/(2i)` only the first `i` positive terms survive.
pub fn odd_partial_fraction(i: u64, k_max: u64) -> Result<(Rational, Rational), IdentityError> {
    check_index(i)?;
    let mut partial = Rational::new();
    for k in 1..=k_max {
        partial += Rational::from((1, (2 * k - 1) * (2 * k + 2 * i - 1)));
    }
    let mut survivors = Rational::new();
    for k in 1..=i {
        survivors += Rational::from((1, 2 * k - 1));
    }
    Ok((partial, survivors / (2 * i)))
}

/// Checks both decompositions exactly:
///
/// ```text
/// 1/(i(k+i)²)  = (1/k²)/i − (1/k²)/(k+i) − (1/k)/(k+i)²
/// 1/(i²(k+i)²) = (1/k²)/i² − (2/k³)/i + (2/k³)/(k+i) + (1/k²)/(k+i)²
/// ```
///
/// Returns `false` for a zero argument.
pub fn partial_fraction_check(i: u64, k: u64) -> bool {
    if i == 0 || k == 0 {
        return false;
    }
    let q = |n: i64, d: rug::Integer| Rational::from((rug::Integer::from(n), d));
    let (ii, kk) = (rug::Integer::from(i), rug::Integer::from(k));
    let s = rug::Integer::from(&ii + &kk);
    let s2 = rug::Integer::from(s.square_ref());
    let k2 = rug::Integer::from(kk.square_ref());
    let k3 = rug::Integer::from(&k2 * &kk);
    let i2 = rug::Integer::from(ii.square_ref());

    let lhs1 = q(1, rug::Integer::from(&ii * &s2));
    let rhs1 = q(1, rug::Integer::from(&k2 * &ii)) - q(1, rug::Integer::from(&k2 * &s)) - q(1, rug::Integer::from(&kk * &s2));
    let lhs2 = q(1, rug::Integer::from(&i2 * &s2));
    let rhs2 = q(1, rug::Integer::from(&k2 * &i2)) - q(2, rug::Integer::from(&k3 * &ii))
        + q(2, rug::Integer::from(&k3 * &s))
        + q(1, rug::Integer::from(&k2 * &s2));
    lhs1 == rhs1 && lhs2 == rhs2
}
