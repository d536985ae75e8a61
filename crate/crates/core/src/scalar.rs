//! The value field shared by numeric and symbolic runs.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{AlgebraError, LaurentPolynomial, RationalFunction, VariableId};

/// Exact rational number.
pub type Rational = BigRational;

/// Exact field arithmetic as used by the lattice engine, the determinant
/// routines and the linear solves.
///
/// Implemented by [`Rational`] (numeric mode) and [`RationalFunction`]
/// (symbolic mode). Zero testing is exact in both.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// `"numeric"` or `"symbolic"`, recorded in serialized grids.
    const MODE: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` when `o` is zero.
    fn checked_div(&self, o: &Self) -> Option<Self>;

    /// Whether the value lies in the Laurent ring of its generators.
    fn is_laurent(&self) -> bool {
        true
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Parses the output of `Display`.
    fn parse_value(s: &str) -> Result<Self, AlgebraError>;

    /// Exact value once every generator is assigned.
    fn evaluate_at(
        &self,
        assignment: &dyn Fn(VariableId) -> Option<Rational>,
    ) -> Result<Rational, AlgebraError>;
}

impl Scalar for Rational {
    const MODE: &'static str = "numeric";

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_bigint(v: &BigInt) -> Self {
        Rational::from_integer(v.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_div(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
    fn parse_value(s: &str) -> Result<Self, AlgebraError> {
        s.trim()
            .parse::<Rational>()
            .map_err(|e| AlgebraError::Parse(format!("{s:?}: {e}")))
    }
    fn evaluate_at(
        &self,
        _assignment: &dyn Fn(VariableId) -> Option<Rational>,
    ) -> Result<Rational, AlgebraError> {
        Ok(self.clone())
    }
}

impl Scalar for RationalFunction {
    const MODE: &'static str = "symbolic";

    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn from_i64(v: i64) -> Self {
        RationalFunction::from_poly(v.into())
    }
    fn from_bigint(v: &BigInt) -> Self {
        RationalFunction::from_poly(v.clone().into())
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RationalFunction::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RationalFunction::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFunction::mul(self, o)
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
    fn checked_div(&self, o: &Self) -> Option<Self> {
        self.div(o).ok()
    }
    fn is_laurent(&self) -> bool {
        RationalFunction::is_laurent(self)
    }
    fn parse_value(s: &str) -> Result<Self, AlgebraError> {
        s.parse()
    }
    fn evaluate_at(
        &self,
        assignment: &dyn Fn(VariableId) -> Option<Rational>,
    ) -> Result<Rational, AlgebraError> {
        self.evaluate(assignment)
    }
}

/// Substitutes values of `V` for the variables of `p`.
///
/// `None` when a variable is unassigned or a negative power of a zero
/// value is requested.
pub fn substitute<V: Scalar>(p: &LaurentPolynomial, value_of: &dyn Fn(VariableId) -> Option<V>) -> Option<V> {
    let mut acc = V::zero();
    for (m, c) in p.terms() {
        let mut term = V::from_bigint(c);
        for &(v, e) in m.pairs() {
            let x = value_of(v)?;
            let base = if e < 0 { V::one().checked_div(&x)? } else { x };
            for _ in 0..e.unsigned_abs() {
                term = term.mul(&base);
            }
        }
        acc = acc.add(&term);
    }
    Some(acc)
}

/// Small integer helper for tests and examples.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
