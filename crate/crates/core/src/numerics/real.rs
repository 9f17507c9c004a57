use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::Pow;
use serde::{Serialize, Serializer};
use rug::{Float, Rational};

use super::{NumericsError, PrecisionContext};

/// An arbitrary-precision real tagged with the context it was produced under.
///
/// Binary operations between Reals of different contexts run at the smaller
/// precision and the result carries that context.
#[derive(Clone, Debug)]
pub struct Real {
    value: Float,
    ctx: PrecisionContext,
}

impl Real {
    pub fn new(value: Float, ctx: PrecisionContext) -> Self {
        let value = if value.prec() == ctx.bits() {
            value
        } else {
            Float::with_val(ctx.bits(), value)
        };
        Self { value, ctx }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        Self::new(Float::new(ctx.bits()), ctx)
    }

    pub fn from_rational(q: &Rational, ctx: PrecisionContext) -> Self {
        Self::new(Float::with_val(ctx.bits(), q), ctx)
    }

    pub fn from_i64(v: i64, ctx: PrecisionContext) -> Self {
        Self::new(Float::with_val(ctx.bits(), v), ctx)
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn into_value(self) -> Float {
        self.value
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.ctx
    }

    pub fn abs(&self) -> Self {
        Self::new(Float::with_val(self.ctx.bits(), self.value.abs_ref()), self.ctx)
    }

    pub fn is_sign_negative(&self) -> bool {
        self.value.is_sign_negative() && !self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self::new(Float::with_val(self.ctx.bits(), (&self.value).pow(exp)), self.ctx)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Rounds to `digits` decimal digits of the smaller context.
    pub fn to_context(&self, ctx: PrecisionContext) -> Self {
        Self::new(self.value.clone(), ctx)
    }

    /// True when `|self - other| <= 10^-digits`.
    pub fn agrees_to(&self, other: &Real, digits: u32) -> bool {
        let diff = (self - other).abs();
        let bits = diff.ctx.bits().max(64);
        diff.value <= super::precision::pow10_neg(digits, bits)
    }

    /// Parses a decimal literal such as `1e-25` or `0.125` at the context precision.
    pub fn parse_decimal(text: &str, ctx: PrecisionContext) -> Result<Self, NumericsError> {
        let parsed = Float::parse(text.trim()).map_err(|e| NumericsError::Domain(format!("'{text}': {e}")))?;
        let value = Float::with_val(ctx.bits(), parsed);
        if !value.is_finite() {
            return Err(NumericsError::Domain(format!("'{text}' is not finite")));
        }
        Ok(Self::new(value, ctx))
    }

    /// Scientific decimal rendering with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        format_decimal(&self.value, sig)
    }
}

/// Renders a Float as `d.ddddde±x` (or `0`) with `sig` significant digits.
pub fn format_decimal(v: &Float, sig: usize) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sig = sig.max(1);
    let raw = v.to_string_radix(10, Some(sig));
    let (mantissa, exp) = match raw.find('e') {
        Some(pos) => (&raw[..pos], raw[pos + 1..].parse::<i64>().unwrap_or(0)),
        None => (raw.as_str(), 0),
    };
    let (sign, digits_part) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    // normalise to a single leading digit
    let dot = digits_part.find('.').unwrap_or(digits_part.len());
    let all: String = digits_part.chars().filter(|c| *c != '.').collect();
    let lead = all.find(|c: char| c != '0').unwrap_or(0);
    let exp10 = exp + dot as i64 - 1 - lead as i64;
    let mut digits: String = all[lead..].chars().take(sig).collect();
    while digits.len() < sig {
        digits.push('0');
    }
    let (first, rest) = digits.split_at(1);
    let rest = rest.trim_end_matches('0');
    let mut out = String::from(sign);
    out.push_str(first);
    if !rest.is_empty() {
        out.push('.');
        out.push_str(rest);
    }
    if exp10 != 0 {
        out.push_str(&format!("e{exp10}"));
    }
    out
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.ctx.digits() as usize))
    }
}

/// Serialized as a decimal string carrying the context's significant digits.
impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal(self.ctx.digits() as usize))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        self.value == *other
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.value.partial_cmp(other)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let ctx = self.ctx.min(rhs.ctx);
                Real::new(Float::with_val(ctx.bits(), &self.value $op &rhs.value), ctx)
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                &self $op &rhs
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                &self $op rhs
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self $op &rhs
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);
real_binop!(Div, div, /);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::new(-self.value, self.ctx)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::new(Float::with_val(self.ctx.bits(), -&self.value), self.ctx)
    }
}
