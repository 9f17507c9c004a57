use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;
use serde::{Serialize, Serializer};

use crate::closed_form::{ClosedForm, ConstSymbol, Monomial};
use crate::numerics::{const_ln2, const_pi, PrecisionContext, Real};

/// An exact element `rational + pi·π + ln2·ln 2` of the span `{1, π, ln 2}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BasisValue {
    pub rational: Rational,
    pub pi: Rational,
    pub ln2: Rational,
}

impl BasisValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        Self { rational: q, ..Self::default() }
    }

    pub fn new(rational: Rational, pi: Rational, ln2: Rational) -> Self {
        Self { rational, pi, ln2 }
    }

    pub fn is_zero(&self) -> bool {
        self.rational == 0 && self.pi == 0 && self.ln2 == 0
    }

    pub fn evaluate(&self, ctx: PrecisionContext) -> Real {
        Real::from_rational(&self.rational, ctx)
            + Real::from_rational(&self.pi, ctx) * const_pi(ctx)
            + Real::from_rational(&self.ln2, ctx) * const_ln2(ctx)
    }

    pub fn to_closed_form(&self) -> ClosedForm {
        ClosedForm::from_monomials(vec![
            Monomial::constant(self.rational.clone()),
            Monomial::new(self.pi.clone(), &[(ConstSymbol::Pi, 1)]),
            Monomial::new(self.ln2.clone(), &[(ConstSymbol::Ln2, 1)]),
        ])
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            rational: Rational::from(&self.rational * q),
            pi: Rational::from(&self.pi * q),
            ln2: Rational::from(&self.ln2 * q),
        }
    }
}

impl From<Rational> for BasisValue {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl Add for &BasisValue {
    type Output = BasisValue;
    fn add(self, rhs: &BasisValue) -> BasisValue {
        BasisValue {
            rational: Rational::from(&self.rational + &rhs.rational),
            pi: Rational::from(&self.pi + &rhs.pi),
            ln2: Rational::from(&self.ln2 + &rhs.ln2),
        }
    }
}

impl Add for BasisValue {
    type Output = BasisValue;
    fn add(self, rhs: BasisValue) -> BasisValue {
        &self + &rhs
    }
}

impl Neg for &BasisValue {
    type Output = BasisValue;
    fn neg(self) -> BasisValue {
        self.scale(&Rational::from(-1))
    }
}

impl Neg for BasisValue {
    type Output = BasisValue;
    fn neg(self) -> BasisValue {
        -&self
    }
}

impl Sub for &BasisValue {
    type Output = BasisValue;
    fn sub(self, rhs: &BasisValue) -> BasisValue {
        self + &(-rhs)
    }
}

impl Sub for BasisValue {
    type Output = BasisValue;
    fn sub(self, rhs: BasisValue) -> BasisValue {
        &self - &rhs
    }
}

impl Mul<&Rational> for &BasisValue {
    type Output = BasisValue;
    fn mul(self, rhs: &Rational) -> BasisValue {
        self.scale(rhs)
    }
}

impl Mul<&Rational> for BasisValue {
    type Output = BasisValue;
    fn mul(self, rhs: &Rational) -> BasisValue {
        self.scale(rhs)
    }
}

impl fmt::Display for BasisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_closed_form())
    }
}

impl Serialize for BasisValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
