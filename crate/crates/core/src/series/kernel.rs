use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::SeriesError;

/// The factor `(scale·k + offset)^(-power)`; a negative power puts the factor in the numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinearFactor {
    pub scale: u32,
    pub offset: i64,
    pub power: i32,
}

impl LinearFactor {
    pub fn new(scale: u32, offset: i64, power: i32) -> Self {
        Self { scale, offset, power }
    }

    fn base(&self, k: u64) -> Integer {
        Integer::from(self.scale) * k + self.offset
    }

    pub(crate) fn exact(&self, k: u64) -> Rational {
        let b = self.base(k);
        let p = b.pow(self.power.unsigned_abs());
        if self.power >= 0 {
            Rational::from((Integer::from(1), p))
        } else {
            Rational::from(p)
        }
    }

    pub(crate) fn apply(&self, acc: &mut Float, k: u64) {
        let b = self.base(k);
        let p = b.pow(self.power.unsigned_abs());
        if self.power >= 0 {
            *acc /= p;
        } else {
            *acc *= p;
        }
    }
}

/// A summand `k ↦ sign · c_k^[central] · H_k^a · h_k^b · H_{2k}^d · Π (s·k+o)^(-p)`.
///
/// Every series family in the crate, and every auxiliary series used by the
/// identity checks, is described by one of these.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Kernel {
    pub central: bool,
    pub harmonic: u32,
    pub odd_harmonic: u32,
    pub harmonic_double: u32,
    pub linear: Vec<LinearFactor>,
    pub alternating: bool,
}

impl Kernel {
    pub fn one() -> Self {
        Self {
            central: false,
            harmonic: 0,
            odd_harmonic: 0,
            harmonic_double: 0,
            linear: Vec::new(),
            alternating: false,
        }
    }

    pub fn central() -> Self {
        Self { central: true, ..Self::one() }
    }

    pub fn with_harmonic(mut self, power: u32) -> Self {
        self.harmonic += power;
        self
    }

    pub fn with_odd_harmonic(mut self, power: u32) -> Self {
        self.odd_harmonic += power;
        self
    }

    pub fn with_harmonic_double(mut self, power: u32) -> Self {
        self.harmonic_double += power;
        self
    }

    /// Multiplies by `(scale·k + offset)^(-power)`.
    pub fn over(mut self, scale: u32, offset: i64, power: i32) -> Self {
        if power != 0 {
            self.linear.push(LinearFactor::new(scale, offset, power));
        }
        self
    }

    pub fn alternating(mut self) -> Self {
        self.alternating = true;
        self
    }

    /// Decay exponent of the kernel in units of 1/2 (ignoring logarithms).
    pub fn decay_half(&self) -> i64 {
        let central = if self.central { 1 } else { 0 };
        central + self.linear.iter().map(|f| 2 * f.power as i64).sum::<i64>()
    }

    pub fn has_logs(&self) -> bool {
        self.harmonic + self.odd_harmonic + self.harmonic_double > 0
    }

    pub fn validate(&self) -> Result<(), SeriesError> {
        for f in &self.linear {
            if f.scale == 0 {
                return Err(SeriesError::InvalidKernel(format!("zero scale in {self}")));
            }
            if f.power > 0 && (f.scale as i64) + f.offset <= 0 {
                return Err(SeriesError::InvalidKernel(format!(
                    "factor {}k{:+} vanishes or changes sign for k >= 1",
                    f.scale, f.offset
                )));
            }
        }
        if self.decay_half() <= 2 && !self.alternating {
            return Err(SeriesError::Divergent(self.to_string()));
        }
        if self.decay_half() <= 0 {
            return Err(SeriesError::Divergent(self.to_string()));
        }
        Ok(())
    }

    /// Largest `|offset|/scale` ratio; the asymptotic expansion needs `k` well above it.
    pub(crate) fn max_shift(&self) -> f64 {
        self.linear
            .iter()
            .map(|f| f.offset.unsigned_abs() as f64 / f.scale as f64)
            .fold(0.0, f64::max)
    }

    pub(crate) fn eval_exact(&self, k: u64, state: &ExactState) -> Rational {
        let mut t = Rational::from(1);
        if self.central {
            t *= &state.c;
        }
        for _ in 0..self.harmonic {
            t *= &state.big_h;
        }
        for _ in 0..self.odd_harmonic {
            t *= &state.odd_h;
        }
        for _ in 0..self.harmonic_double {
            t *= &state.big_h2;
        }
        for f in &self.linear {
            t *= f.exact(k);
        }
        if self.alternating && k.is_multiple_of(2) {
            t = -t;
        }
        t
    }

    pub(crate) fn eval_float(&self, k: u64, state: &FloatState) -> Float {
        let mut t = Float::with_val(state.bits, 1);
        if self.central {
            t *= &state.c;
        }
        for _ in 0..self.harmonic {
            t *= &state.big_h;
        }
        for _ in 0..self.odd_harmonic {
            t *= &state.odd_h;
        }
        for _ in 0..self.harmonic_double {
            t *= &state.big_h2;
        }
        for f in &self.linear {
            f.apply(&mut t, k);
        }
        if self.alternating && k.is_multiple_of(2) {
            t = -t;
        }
        t
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.alternating {
            parts.push("(-1)^(k-1)".to_string());
        }
        if self.central {
            parts.push("c_k".to_string());
        }
        for (name, p) in [("H_k", self.harmonic), ("h_k", self.odd_harmonic), ("H_2k", self.harmonic_double)] {
            match p {
                0 => {}
                1 => parts.push(name.to_string()),
                p => parts.push(format!("{name}^{p}")),
            }
        }
        for l in &self.linear {
            let base = match (l.scale, l.offset) {
                (1, 0) => "k".to_string(),
                (s, 0) => format!("{s}k"),
                (1, o) => format!("(k{o:+})"),
                (s, o) => format!("({s}k{o:+})"),
            };
            parts.push(format!("{base}^{}", -l.power));
        }
        if parts.is_empty() {
            parts.push("1".to_string());
        }
        f.write_str(&parts.join("·"))
    }
}

/// Which running sequences a kernel reads.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Needs {
    c: bool,
    big_h: bool,
    odd_h: bool,
    big_h2: bool,
}

impl Needs {
    pub fn of(kernel: &Kernel) -> Self {
        Self {
            c: kernel.central,
            big_h: kernel.harmonic > 0,
            odd_h: kernel.odd_harmonic > 0,
            big_h2: kernel.harmonic_double > 0,
        }
    }

    #[cfg(test)]
    pub fn all() -> Self {
        Self { c: true, big_h: true, odd_h: true, big_h2: true }
    }
}

/// Running exact values of the sequences at index `k`.
#[derive(Clone, Debug)]
pub(crate) struct ExactState {
    needs: Needs,
    pub k: u64,
    pub c: Rational,
    pub big_h: Rational,
    pub odd_h: Rational,
    pub big_h2: Rational,
}

impl ExactState {
    pub fn start(needs: Needs) -> Self {
        Self {
            needs,
            k: 0,
            c: Rational::from(1),
            big_h: Rational::new(),
            odd_h: Rational::new(),
            big_h2: Rational::new(),
        }
    }

    pub fn advance(&mut self) {
        self.k += 1;
        let k = self.k;
        if self.needs.c {
            self.c *= Rational::from((2 * k - 1, 2 * k));
        }
        if self.needs.big_h {
            self.big_h += Rational::from((1, k));
        }
        if self.needs.odd_h {
            self.odd_h += Rational::from((1, 2 * k - 1));
        }
        if self.needs.big_h2 {
            self.big_h2 += Rational::from((4 * k - 1, (2 * k - 1) * (2 * k)));
        }
    }
}

/// Running floating values of the sequences at index `k`.
#[derive(Clone, Debug)]
pub(crate) struct FloatState {
    needs: Needs,
    pub bits: u32,
    pub k: u64,
    pub c: Float,
    pub big_h: Float,
    pub odd_h: Float,
    pub big_h2: Float,
}

impl FloatState {
    pub fn start(bits: u32, needs: Needs) -> Self {
        Self {
            needs,
            bits,
            k: 0,
            c: Float::with_val(bits, 1),
            big_h: Float::new(bits),
            odd_h: Float::new(bits),
            big_h2: Float::new(bits),
        }
    }

    pub fn advance(&mut self) {
        self.k += 1;
        let k = self.k;
        if self.needs.c {
            self.c *= 2 * k - 1;
            self.c /= 2 * k;
        }
        let one = Float::with_val(self.bits, 1);
        if self.needs.big_h {
            self.big_h += Float::with_val(self.bits, &one / k);
        }
        if self.needs.odd_h || self.needs.big_h2 {
            let inv_odd = Float::with_val(self.bits, &one / (2 * k - 1));
            if self.needs.big_h2 {
                self.big_h2 += &inv_odd;
                self.big_h2 += Float::with_val(self.bits, &one / (2 * k));
            }
            if self.needs.odd_h {
                self.odd_h += inv_odd;
            }
        }
    }
}
