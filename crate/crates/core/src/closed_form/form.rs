use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;
use serde::{Serialize, Serializer};

use super::ConstSymbol;
use crate::numerics::{PrecisionContext, Real};

/// `coeff · Π symbol^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: Rational,
    pub powers: BTreeMap<ConstSymbol, u32>,
}

impl Monomial {
    pub fn constant(coeff: Rational) -> Self {
        Self { coeff, powers: BTreeMap::new() }
    }

    pub fn new(coeff: Rational, factors: &[(ConstSymbol, u32)]) -> Self {
        let mut powers = BTreeMap::new();
        for &(s, e) in factors {
            if e > 0 {
                *powers.entry(s).or_insert(0) += e;
            }
        }
        Self { coeff, powers }
    }

    pub fn is_constant(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.values().sum()
    }

    fn key(&self) -> Vec<(ConstSymbol, u32)> {
        self.powers.iter().map(|(s, e)| (*s, *e)).collect()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut powers = self.powers.clone();
        for (s, e) in &other.powers {
            *powers.entry(*s).or_insert(0) += e;
        }
        Monomial { coeff: Rational::from(&self.coeff * &other.coeff), powers }
    }

    pub fn evaluate(&self, ctx: PrecisionContext) -> Real {
        let mut v = Real::from_rational(&self.coeff, ctx);
        for (s, e) in &self.powers {
            v = v * s.evaluate(ctx).pow(*e);
        }
        v
    }
}

/// Canonical order: lexicographic over `(symbol, exponent)` lists, rational constant last.
fn key_order(a: &[(ConstSymbol, u32)], b: &[(ConstSymbol, u32)]) -> Ordering {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => a.cmp(b),
    }
}

/// A sum of monomials over the constant basis, always kept canonical.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClosedForm {
    monomials: Vec<Monomial>,
}

impl ClosedForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_monomials(vec![Monomial::constant(q)])
    }

    pub fn symbol(s: ConstSymbol) -> Self {
        Self::from_monomials(vec![Monomial::new(Rational::from(1), &[(s, 1)])])
    }

    /// Collects like terms, drops zeros and sorts.
    pub fn from_monomials(items: Vec<Monomial>) -> Self {
        let mut collected: Vec<(Vec<(ConstSymbol, u32)>, Monomial)> = Vec::new();
        for m in items {
            let key = m.key();
            match collected.iter_mut().find(|(k, _)| *k == key) {
                Some((_, existing)) => existing.coeff += &m.coeff,
                None => collected.push((key, m)),
            }
        }
        collected.retain(|(_, m)| m.coeff != 0);
        collected.sort_by(|a, b| key_order(&a.0, &b.0));
        Self {
            monomials: collected.into_iter().map(|(_, m)| m).collect(),
        }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn symbols(&self) -> Vec<ConstSymbol> {
        let mut v: Vec<ConstSymbol> = self.monomials.iter().flat_map(|m| m.powers.keys().copied()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// The rational part (coefficient of the empty monomial).
    pub fn constant_term(&self) -> Rational {
        self.monomials
            .iter()
            .find(|m| m.is_constant())
            .map(|m| m.coeff.clone())
            .unwrap_or_default()
    }

    /// Coefficient of the monomial with exactly these powers.
    pub fn coefficient(&self, factors: &[(ConstSymbol, u32)]) -> Rational {
        let key = Monomial::new(Rational::from(1), factors).key();
        self.monomials
            .iter()
            .find(|m| m.key() == key)
            .map(|m| m.coeff.clone())
            .unwrap_or_default()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_monomials(
            self.monomials
                .iter()
                .map(|m| Monomial { coeff: Rational::from(&m.coeff * q), powers: m.powers.clone() })
                .collect(),
        )
    }

    pub fn evaluate(&self, ctx: PrecisionContext) -> Real {
        self.monomials
            .iter()
            .fold(Real::zero(ctx), |acc, m| acc + m.evaluate(ctx))
    }
}

impl Add for &ClosedForm {
    type Output = ClosedForm;
    fn add(self, rhs: &ClosedForm) -> ClosedForm {
        ClosedForm::from_monomials(self.monomials.iter().chain(rhs.monomials.iter()).cloned().collect())
    }
}

impl Add for ClosedForm {
    type Output = ClosedForm;
    fn add(self, rhs: ClosedForm) -> ClosedForm {
        &self + &rhs
    }
}

impl Neg for &ClosedForm {
    type Output = ClosedForm;
    fn neg(self) -> ClosedForm {
        self.scale(&Rational::from(-1))
    }
}

impl Neg for ClosedForm {
    type Output = ClosedForm;
    fn neg(self) -> ClosedForm {
        -&self
    }
}

impl Sub for &ClosedForm {
    type Output = ClosedForm;
    fn sub(self, rhs: &ClosedForm) -> ClosedForm {
        self + &(-rhs)
    }
}

impl Sub for ClosedForm {
    type Output = ClosedForm;
    fn sub(self, rhs: ClosedForm) -> ClosedForm {
        &self - &rhs
    }
}

impl Mul for &ClosedForm {
    type Output = ClosedForm;
    fn mul(self, rhs: &ClosedForm) -> ClosedForm {
        let mut out = Vec::with_capacity(self.monomials.len() * rhs.monomials.len());
        for a in &self.monomials {
            for b in &rhs.monomials {
                out.push(a.mul(b));
            }
        }
        ClosedForm::from_monomials(out)
    }
}

impl Mul for ClosedForm {
    type Output = ClosedForm;
    fn mul(self, rhs: ClosedForm) -> ClosedForm {
        &self * &rhs
    }
}

impl Mul<&Rational> for &ClosedForm {
    type Output = ClosedForm;
    fn mul(self, rhs: &Rational) -> ClosedForm {
        self.scale(rhs)
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, q: &Rational) -> fmt::Result {
    if *q.denom() == 1 {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            let negative = m.coeff < 0;
            let magnitude = Rational::from(m.coeff.abs_ref());
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mut first = true;
            // a leading "-pi" is outside the grammar, so the first term keeps an explicit 1
            if m.is_constant() || magnitude != 1 || (i == 0 && negative) {
                write_coeff(f, &magnitude)?;
                first = false;
            }
            for (s, e) in &m.powers {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                if *e == 1 {
                    write!(f, "{s}")?;
                } else {
                    write!(f, "{s}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Serialized in the text grammar.
impl Serialize for ClosedForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn like_terms_collect_and_cancel() {
        let pi = ClosedForm::symbol(ConstSymbol::Pi);
        let twice = &pi + &pi;
        assert_eq!(twice.coefficient(&[(ConstSymbol::Pi, 1)]), 2);
        assert!((&twice - &twice).is_zero());
    }

    #[test]
    fn formatting() {
        let f = ClosedForm::from_monomials(vec![
            Monomial::constant(q(-1, 1)),
            Monomial::new(q(1, 2), &[(ConstSymbol::Pi, 1)]),
        ]);
        assert_eq!(f.to_string(), "1/2*pi - 1");
        let g = ClosedForm::from_monomials(vec![Monomial::new(q(-1, 1), &[(ConstSymbol::Pi, 1), (ConstSymbol::Ln2, 2)])]);
        assert_eq!(g.to_string(), "-1*pi*ln2^2");
        assert_eq!(ClosedForm::zero().to_string(), "0");
    }

    #[test]
    fn product_of_forms() {
        let a = ClosedForm::symbol(ConstSymbol::Zeta(2)) + ClosedForm::from_rational(q(1, 1));
        let sq = &a * &a;
        assert_eq!(sq.coefficient(&[(ConstSymbol::Zeta(2), 2)]), 1);
        assert_eq!(sq.coefficient(&[(ConstSymbol::Zeta(2), 1)]), 2);
        assert_eq!(sq.constant_term(), 1);
    }
}
