//! Parser for the canonical text rendering.
//!
//! Grammar, whitespace-insensitive:
//!
//! ```text
//! rational := poly | "(" poly ")" "/" "(" poly ")"
//! poly     := ["-"] term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := integer | var ["^" ["-"] integer]
//! var      := "x[" int "," int "]" | "a[" int "]" | "v[" int "]"
//! ```

use std::str::FromStr;

use num_bigint::BigInt;

use super::{AlgebraError, LaurentPolynomial, Monomial, RationalFunction, VariableId};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Self {
            src: s.as_bytes(),
            pos: 0,
        }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), AlgebraError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn digits(&mut self) -> Result<&'a str, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn signed_i32(&mut self) -> Result<i32, AlgebraError> {
        let neg = self.eat(b'-');
        let d = self.digits()?;
        let v: i32 = d.parse().map_err(|_| self.error("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn var(&mut self) -> Result<VariableId, AlgebraError> {
        let kind = self.peek().ok_or_else(|| self.error("unexpected end"))?;
        self.pos += 1;
        self.expect(b'[')?;
        let v = match kind {
            b'x' => {
                let n = self.signed_i32()?;
                self.expect(b',')?;
                let t = self.signed_i32()?;
                VariableId::Site { n, t }
            }
            b'a' => VariableId::Free(self.signed_i32()?),
            b'v' => {
                let i = self.signed_i32()?;
                VariableId::Anonymous(u32::try_from(i).map_err(|_| self.error("negative index"))?)
            }
            _ => return Err(self.error("unknown variable")),
        };
        self.expect(b']')?;
        Ok(v)
    }

    fn term(&mut self) -> Result<LaurentPolynomial, AlgebraError> {
        let mut coeff = BigInt::from(1);
        let mut pairs = Vec::new();
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let d = self.digits()?;
                    coeff *= BigInt::from_str(d).expect("digits");
                }
                Some(b'x' | b'a' | b'v') => {
                    let v = self.var()?;
                    let e = if self.eat(b'^') { self.signed_i32()? } else { 1 };
                    pairs.push((v, e));
                }
                _ => return Err(self.error("expected factor")),
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok(LaurentPolynomial::term(coeff, Monomial::from_pairs(pairs)))
    }

    fn poly(&mut self) -> Result<LaurentPolynomial, AlgebraError> {
        let mut acc = LaurentPolynomial::zero();
        let mut neg = self.eat(b'-');
        loop {
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn finish(&mut self) -> Result<(), AlgebraError> {
        if self.peek().is_some() {
            return Err(self.error("trailing input"));
        }
        Ok(())
    }
}

impl FromStr for LaurentPolynomial {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor::new(s);
        let p = c.poly()?;
        c.finish()?;
        Ok(p)
    }
}

impl FromStr for RationalFunction {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor::new(s);
        if c.peek() == Some(b'(') {
            c.pos += 1;
            let num = c.poly()?;
            c.expect(b')')?;
            c.expect(b'/')?;
            c.expect(b'(')?;
            let den = c.poly()?;
            c.expect(b')')?;
            c.finish()?;
            RationalFunction::new(num, den)
        } else {
            let p = c.poly()?;
            c.finish()?;
            Ok(RationalFunction::from_poly(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_rendering() {
        let src = "x[0,0]^-1*x[0,1]*x[2,0] + x[0,0]^-1*x[1,0] - 3*a[2]^2 + 7";
        let p: LaurentPolynomial = src.parse().unwrap();
        assert_eq!(p.num_terms(), 4);
        let again: LaurentPolynomial = p.to_string().parse().unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn negative_site_indices() {
        let p: LaurentPolynomial = "-x[-1,2]^-2 - 5".parse().unwrap();
        assert_eq!(p.to_string(), "-5 - x[-1,2]^-2");
    }

    #[test]
    fn rational_round_trip() {
        let r: RationalFunction = "(a[1]*a[3] + 1)/(a[1]*a[3] - a[2]^2)".parse().unwrap();
        assert!(!r.is_laurent());
        let again: RationalFunction = r.to_string().parse().unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn rejects_garbage() {
        assert!("x[1]".parse::<LaurentPolynomial>().is_err());
        assert!("2 +".parse::<LaurentPolynomial>().is_err());
        assert!("q[1]".parse::<LaurentPolynomial>().is_err());
        assert!("(1)/(0)".parse::<RationalFunction>().is_err());
    }
}
