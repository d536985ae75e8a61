//! Exact sparse Laurent-polynomial and rational-function arithmetic over
//! arbitrary-precision integers.

mod gcd;
mod monomial;
mod poly;
mod rational;
mod text;
mod var;

pub use gcd::{poly_gcd, MIN_TRIALS, SPECIALIZATION_BOUND};
pub(crate) use gcd::specialized_pair_gcd;
pub use monomial::Monomial;
pub use poly::{DegreeReport, LaurentPolynomial, MonomialSplit};
pub use rational::RationalFunction;
pub use var::{VarKind, VariableId};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("pole: a denominator evaluates to zero")]
    Pole,
    #[error("variable {0} has no assigned value")]
    Unassigned(VariableId),
    #[error("parse error: {0}")]
    Parse(String),
}
