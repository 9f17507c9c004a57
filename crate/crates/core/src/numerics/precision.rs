use rug::ops::Pow;
use rug::Float;

use super::NumericsError;

/// Smallest accepted number of decimal working digits.
pub const MIN_DIGITS: u32 = 10;
/// Smallest accepted number of guard digits.
pub const MIN_GUARD: u32 = 5;
/// Guard digits used by [`PrecisionContext::with_digits`].
pub const DEFAULT_GUARD: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Decimal working precision shared by every high-precision computation.
///
/// `digits` is the number of correct digits promised to callers, `guard` the
/// extra digits carried internally to absorb rounding in long sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32, guard: u32) -> Result<Self, NumericsError> {
        if digits < MIN_DIGITS {
            return Err(NumericsError::Precision(format!(
                "digits must be at least {MIN_DIGITS}, got {digits}"
            )));
        }
        if guard < MIN_GUARD {
            return Err(NumericsError::Precision(format!(
                "guard must be at least {MIN_GUARD}, got {guard}"
            )));
        }
        Ok(Self { digits, guard })
    }

    pub fn with_digits(digits: u32) -> Result<Self, NumericsError> {
        Self::new(digits, DEFAULT_GUARD)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// Binary precision (in bits) of Floats created under this context.
    pub fn bits(&self) -> u32 {
        ((self.digits + self.guard) as f64 * LOG2_10).ceil() as u32 + 8
    }

    /// The context with the smaller number of digits.
    pub fn min(self, other: Self) -> Self {
        if (other.digits, other.guard) < (self.digits, self.guard) {
            other
        } else {
            self
        }
    }

    /// Same guard, twice the digits.
    pub fn doubled(&self) -> Self {
        Self {
            digits: self.digits * 2,
            guard: self.guard,
        }
    }

    /// `10^-digits` at working precision.
    pub fn tolerance(&self) -> Float {
        pow10_neg(self.digits, self.bits())
    }

    /// `10^-(digits + guard)`, the internal rounding target.
    pub fn epsilon(&self) -> Float {
        pow10_neg(self.digits + self.guard, self.bits())
    }
}

pub(crate) fn pow10_neg(exp: u32, bits: u32) -> Float {
    let ten = Float::with_val(bits, 10);
    let p = Float::with_val(bits, ten.pow(exp));
    Float::with_val(bits, 1) / p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_digits_and_guard() {
        assert!(PrecisionContext::new(9, 10).is_err());
        assert!(PrecisionContext::new(10, 4).is_err());
        assert!(PrecisionContext::new(10, 5).is_ok());
    }

    #[test]
    fn bits_cover_digits() {
        let ctx = PrecisionContext::with_digits(40).unwrap();
        assert!(ctx.bits() as f64 >= 50.0 * LOG2_10);
    }

    #[test]
    fn min_picks_smaller() {
        let a = PrecisionContext::with_digits(20).unwrap();
        let b = PrecisionContext::with_digits(40).unwrap();
        assert_eq!(a.min(b), a);
        assert_eq!(b.min(a), a);
    }
}
