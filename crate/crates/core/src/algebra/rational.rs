use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::{poly_gcd, AlgebraError, LaurentPolynomial, VariableId};

/// Reduced quotient of two Laurent polynomials.
///
/// Canonical form: the denominator is a polynomial with minimum exponent
/// zero in every variable and a positive leading coefficient, and it shares
/// no non-unit factor with the numerator. Monomial factors of the
/// denominator are units and live in the numerator. A Laurent polynomial is
/// therefore exactly a rational function with denominator `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: LaurentPolynomial,
    den: LaurentPolynomial,
}

impl RationalFunction {
    pub fn zero() -> Self {
        Self::from_poly(LaurentPolynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPolynomial::one())
    }

    pub fn from_poly(p: LaurentPolynomial) -> Self {
        Self {
            num: p,
            den: LaurentPolynomial::one(),
        }
    }

    pub fn var(v: VariableId) -> Self {
        Self::from_poly(LaurentPolynomial::var(v))
    }

    /// Reduces `num / den` to canonical form.
    pub fn new(num: LaurentPolynomial, den: LaurentPolynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        // fast path: exact Laurent quotient
        if let Ok(q) = num.exact_divide(&den) {
            return Ok(Self::from_poly(q));
        }
        let dm = den.min_monomial();
        let den = den.mul_monomial(&dm.inverse());
        let num = num.mul_monomial(&dm.inverse());
        let g = poly_gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_divide(&g).expect("gcd divides numerator"),
                den.exact_divide(&g).expect("gcd divides denominator"),
            )
        };
        let dm = den.min_monomial();
        if !dm.is_one() {
            den = den.mul_monomial(&dm.inverse());
            num = num.mul_monomial(&dm.inverse());
        }
        if den.leading_term().map_or(false, |t| t.1 < Zero::zero()) {
            den = -den;
            num = -num;
        }
        if den.is_one() {
            return Ok(Self::from_poly(num));
        }
        Ok(Self { num, den })
    }

    pub fn numerator(&self) -> &LaurentPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPolynomial {
        &self.den
    }

    pub fn into_parts(self) -> (LaurentPolynomial, LaurentPolynomial) {
        (self.num, self.den)
    }

    /// The value as a Laurent polynomial, when its denominator is trivial.
    pub fn as_laurent(&self) -> Option<&LaurentPolynomial> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Canonical form of `num / den` for coprime inputs: moves the monomial
    /// part of `den` into `num` and fixes the sign.
    fn normalized(mut num: LaurentPolynomial, mut den: LaurentPolynomial) -> Self {
        let dm = den.min_monomial();
        if !dm.is_one() {
            den = den.mul_monomial(&dm.inverse());
            num = num.mul_monomial(&dm.inverse());
        }
        if den.leading_term().map_or(false, |t| t.1 < Zero::zero()) {
            den = -den;
            num = -num;
        }
        if den.is_one() {
            return Self::from_poly(num);
        }
        Self { num, den }
    }

    // Sums and products are reduced by the Henrici reductions, which only
    // take GCDs of pieces no larger than the operands.

    pub fn add(&self, other: &Self) -> Self {
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(&self.num + &other.num);
        }
        let g = poly_gcd(&self.den, &other.den);
        if g.is_one() {
            let num = &(&self.num * &other.den) + &(&other.num * &self.den);
            return Self::normalized(num, &self.den * &other.den);
        }
        let b = self.den.exact_divide(&g).expect("gcd divides");
        let d = other.den.exact_divide(&g).expect("gcd divides");
        let t = &(&self.num * &d) + &(&other.num * &b);
        if t.is_zero() {
            return Self::zero();
        }
        let g2 = poly_gcd(&t, &g);
        let num = t.exact_divide(&g2).expect("gcd divides");
        let den = &b * &other.den.exact_divide(&g2).expect("gcd divides");
        Self::normalized(num, den)
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(&self.num * &other.num);
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let cross = |n: &LaurentPolynomial, d: &LaurentPolynomial| {
            if d.is_one() {
                return (n.clone(), d.clone());
            }
            let g = poly_gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (
                    n.exact_divide(&g).expect("gcd divides"),
                    d.exact_divide(&g).expect("gcd divides"),
                )
            }
        };
        let (a, d) = cross(&self.num, &other.den);
        let (c, b) = cross(&other.num, &self.den);
        Self::normalized(&a * &c, &b * &d)
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn evaluate<F>(&self, assignment: F) -> Result<BigRational, AlgebraError>
    where
        F: Fn(VariableId) -> Option<BigRational>,
    {
        let d = self.den.evaluate(&assignment)?;
        if d.is_zero() {
            return Err(AlgebraError::Pole);
        }
        Ok(self.num.evaluate(&assignment)? / d)
    }
}

impl From<LaurentPolynomial> for RationalFunction {
    fn from(p: LaurentPolynomial) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    /// `num` for Laurent values, `(num)/(den)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;

    fn v(i: u32) -> LaurentPolynomial {
        LaurentPolynomial::var(VariableId::Anonymous(i))
    }
    fn c(k: i64) -> LaurentPolynomial {
        LaurentPolynomial::constant(k)
    }

    #[test]
    fn reduces_common_factor() {
        let (x, y) = (v(0), v(1));
        let r = RationalFunction::new(&(&x * &x) - &(&y * &y), (&x + &y).pow(2)).unwrap();
        assert_eq!(r.numerator(), &(&x - &y));
        assert_eq!(r.denominator(), &(&x + &y));
    }

    #[test]
    fn monomial_denominators_collapse_to_laurent() {
        let (x, y) = (v(0), v(1));
        let r = RationalFunction::new(&x + &y, &x * &y).unwrap();
        assert!(r.is_laurent());
        let inv = |p: &LaurentPolynomial| LaurentPolynomial::term(1, p.terms()[0].0.inverse());
        assert_eq!(r.numerator(), &(&inv(&y) + &inv(&x)));
    }

    #[test]
    fn sign_and_monomial_normalization() {
        let (x, y) = (v(0), v(1));
        let den = &(&(-&x) * &x) - &(&x * &y);
        let r = RationalFunction::new(c(1), den).unwrap();
        assert_eq!(r.denominator(), &(&x + &y));
        let expected = LaurentPolynomial::term(-1, Monomial::var_pow(VariableId::Anonymous(0), -1));
        assert_eq!(r.numerator(), &expected);
    }

    #[test]
    fn arithmetic_round_trip() {
        let (x, y) = (v(0), v(1));
        let a = RationalFunction::new(x.clone(), &y + &c(1)).unwrap();
        let b = RationalFunction::new(y.clone(), &x - &c(1)).unwrap();
        let s = a.add(&b);
        assert_eq!(s.sub(&b), a);
        let p = a.mul(&b);
        assert_eq!(p.div(&b).unwrap(), a);
        assert_eq!(a.div(&RationalFunction::zero()), Err(AlgebraError::DivisionByZero));
    }
}
