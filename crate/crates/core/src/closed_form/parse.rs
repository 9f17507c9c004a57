//! Text grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := 'pi' | 'ln2' | 'z' uint | 'Li' uint
//! coeff  := int | int '/' uint
//! ```

use rug::{Integer, Rational};

use super::{ClosedForm, ClosedFormError, ConstSymbol, Monomial};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, pos: usize, message: impl Into<String>) -> ClosedFormError {
        ClosedFormError::Parse { position: pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<Integer, ClosedFormError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(start, "expected an unsigned integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse::<Integer>().expect("digits parse"))
    }

    fn small_uint(&mut self, what: &str) -> Result<u32, ClosedFormError> {
        let start = self.pos;
        let v = self.uint()?;
        v.to_u32().ok_or_else(|| self.err(start, format!("{what} too large")))
    }

    fn coeff(&mut self) -> Result<Rational, ClosedFormError> {
        let num = self.uint()?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.uint()?;
            if den == 0 {
                return Err(self.err(at, "zero denominator"));
            }
            Ok(Rational::from((num, den)))
        } else {
            Ok(Rational::from(num))
        }
    }

    fn atom(&mut self) -> Result<ConstSymbol, ClosedFormError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        if rest.starts_with(b"pi") {
            self.pos += 2;
            Ok(ConstSymbol::Pi)
        } else if rest.starts_with(b"ln2") {
            self.pos += 3;
            Ok(ConstSymbol::Ln2)
        } else if rest.starts_with(b"Li") {
            self.pos += 2;
            let m = self.small_uint("polylog order")?;
            ConstSymbol::li_half(m).map_err(|e| self.err(start, e.to_string()))
        } else if rest.starts_with(b"z") {
            self.pos += 1;
            let m = self.small_uint("zeta argument")?;
            ConstSymbol::zeta(m).map_err(|e| self.err(start, e.to_string()))
        } else {
            Err(self.err(start, "expected pi, ln2, z<n> or Li<n>"))
        }
    }

    fn factor(&mut self) -> Result<(ConstSymbol, u32), ClosedFormError> {
        let s = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.small_uint("exponent")?;
            if e == 0 {
                return Err(self.err(at, "exponent must be positive"));
            }
            Ok((s, e))
        } else {
            Ok((s, 1))
        }
    }

    fn term(&mut self, sign: i32) -> Result<Monomial, ClosedFormError> {
        let mut factors = Vec::new();
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => self.coeff()?,
            Some(_) => {
                factors.push(self.factor()?);
                Rational::from(1)
            }
            None => return Err(self.err(self.pos, "expected a term")),
        };
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(Monomial::new(coeff * sign, &factors))
    }

    fn expr(&mut self) -> Result<ClosedForm, ClosedFormError> {
        // a leading sign is accepted as part of the first coefficient
        let first_sign = if self.eat(b'-') {
            -1
        } else {
            self.eat(b'+');
            1
        };
        let mut monomials = vec![self.term(first_sign)?];
        loop {
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    monomials.push(self.term(1)?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    monomials.push(self.term(-1)?);
                }
                Some(c) => return Err(self.err(self.pos, format!("unexpected '{}'", c as char))),
            }
        }
        Ok(ClosedForm::from_monomials(monomials))
    }
}

pub fn cf_parse(text: &str) -> Result<ClosedForm, ClosedFormError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.expr()
}

pub fn cf_format(cf: &ClosedForm) -> String {
    cf.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_s4_display() {
        let cf = cf_parse("9/4*z4 - 4*ln2*z3 + 2*ln2^2*z2 - 2/3*ln2^4").unwrap();
        assert_eq!(cf.coefficient(&[(ConstSymbol::Zeta(4), 1)]), Rational::from((9, 4)));
        assert_eq!(cf.coefficient(&[(ConstSymbol::Ln2, 4)]), Rational::from((-2, 3)));
        assert_eq!(cf_parse(&cf_format(&cf)).unwrap(), cf);
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(cf_parse(" 1 / 2 * pi-1 ").unwrap(), cf_parse("1/2*pi - 1").unwrap());
    }

    #[test]
    fn leading_signs() {
        assert_eq!(cf_parse("-pi").unwrap(), cf_parse("-1*pi").unwrap());
        assert_eq!(cf_format(&cf_parse("-pi + 2").unwrap()), "-1*pi + 2");
    }

    #[test]
    fn rejects_guarded_symbols() {
        let e = cf_parse("z1").unwrap_err();
        assert!(e.to_string().contains("zeta(1) diverges"), "{e}");
        let e = cf_parse("2*Li1").unwrap_err();
        assert!(e.to_string().contains("use ln2"), "{e}");
    }

    #[test]
    fn reports_positions() {
        match cf_parse("pi + * ln2") {
            Err(ClosedFormError::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        match cf_parse("1/0") {
            Err(ClosedFormError::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(cf_parse("").is_err());
        assert!(cf_parse("pi^0").is_err());
        assert!(cf_parse("e").is_err());
    }
}
