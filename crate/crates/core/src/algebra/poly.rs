use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Monomial, VariableId};

/// Sparse Laurent polynomial with arbitrary-precision integer coefficients.
///
/// Terms are kept strictly descending in the lexicographic monomial order
/// and never carry a zero coefficient, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolynomial {
    terms: Vec<(Monomial, BigInt)>,
}

/// `original = coefficient * monomial * residual`, with `residual` a
/// primitive polynomial whose minimum exponent in every occurring variable
/// is zero and whose leading coefficient is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSplit {
    pub coefficient: BigInt,
    pub monomial: Monomial,
    pub residual: LaurentPolynomial,
}

/// Degrees of `p / q` where `q` is the monomial denominator of a Laurent
/// polynomial and `p` the polynomial numerator coprime to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DegreeReport {
    /// Total degree of `p`.
    pub numerator: i64,
    /// Total degree of `q` (sum of the negated negative exponents).
    pub denominator: i64,
    /// Sum of absolute exponents of the split monomial.
    pub split_monomial: i64,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: VariableId) -> Self {
        Self::term(1, Monomial::var(v))
    }

    pub fn term<C: Into<BigInt>>(c: C, m: Monomial) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: vec![(m, c)],
        }
    }

    /// Canonicalizes an arbitrary list of terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self { terms }
    }

    /// Terms already strictly descending with nonzero coefficients.
    fn from_sorted(terms: Vec<(Monomial, BigInt)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Self { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Single term, i.e. a unit of the Laurent ring up to its coefficient.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// `±monomial`: a unit of the Laurent ring over the integers.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.abs().is_one()
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_polynomial())
    }

    pub fn leading_term(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn trailing_term(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.last()
    }

    pub fn variables(&self) -> BTreeSet<VariableId> {
        self.terms.iter().flat_map(|(m, _)| m.variables()).collect()
    }

    pub fn degree_in(&self, v: VariableId) -> i32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: VariableId) -> i32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).min().unwrap_or(0)
    }

    /// Maximum total degree over the terms.
    pub fn total_degree(&self) -> i64 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Coefficient of `v^e`, as a polynomial free of `v`.
    pub fn coefficient_of(&self, v: VariableId, e: i32) -> LaurentPolynomial {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let (ev, rest) = m.remove_var(v);
                (ev == e).then(|| (rest, c.clone()))
            })
            .collect::<Vec<_>>();
        // removing a fixed power of v keeps the relative order
        Self::from_sorted(terms)
    }

    /// Decomposition `sum_e coeff_e * v^e`, ascending in `e`.
    pub fn coefficients_in(&self, v: VariableId) -> Vec<(i32, LaurentPolynomial)> {
        let mut buckets: BTreeMap<i32, Vec<(Monomial, BigInt)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.remove_var(v);
            buckets.entry(e).or_default().push((rest, c.clone()));
        }
        buckets
            .into_iter()
            .map(|(e, t)| (e, Self::from_sorted(t)))
            .collect()
    }

    /// Integer content, always nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_sorted(self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect())
    }

    /// Divides every coefficient by `c`; the caller guarantees exactness.
    pub(crate) fn div_integer_exact(&self, c: &BigInt) -> Self {
        Self::from_sorted(self.terms.iter().map(|(m, x)| (m.clone(), x / c)).collect())
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self::from_sorted(self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sgn = |c: &BigInt| if negate_other { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0.clone(), sgn(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sgn(c))));
        Self::from_sorted(out)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_monomial(m).scale(c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m).scale(c);
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let prod = ca * cb;
                match acc.get_mut(&m) {
                    Some(c) => *c += prod,
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some((m, _)) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, (m, _)| acc.gcd_exponents(m))
    }

    /// Exact quotient `self / d` in the Laurent ring.
    pub fn exact_divide(&self, d: &Self) -> Result<Self, AlgebraError> {
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return Err(AlgebraError::NotDivisible);
                }
                out.push((m.div(dm), q));
            }
            return Ok(Self::from_sorted(out));
        }
        // Monomials are units: shift both sides to polynomials whose minimum
        // exponent in each variable is zero and divide there.
        let pm = self.min_monomial();
        let dm = d.min_monomial();
        let p = self.mul_monomial(&pm.inverse());
        let dd = d.mul_monomial(&dm.inverse());
        let q = p.poly_divide(&dd).ok_or(AlgebraError::NotDivisible)?;
        Ok(q.mul_monomial(&pm.div(&dm)))
    }

    /// Lexicographic division of polynomials; `None` unless exact.
    fn poly_divide(&self, d: &Self) -> Option<Self> {
        let (lm, lc) = d.leading_term()?;
        let (tm, tc) = d.trailing_term()?;
        let (pt, pc) = self.trailing_term()?;
        // the trailing terms must divide as well
        if !pt.divisible_by(tm) || !pc.is_multiple_of(tc) {
            return None;
        }
        let (pl, plc) = self.leading_term()?;
        if !pl.divisible_by(lm) || !plc.is_multiple_of(lc) {
            return None;
        }
        let mut rem: BTreeMap<Monomial, BigInt> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !m.divisible_by(lm) {
                return None;
            }
            let (qc, r) = c.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            let qm = m.div(lm);
            for (dm, dc) in d.terms.iter().skip(1) {
                let key = dm.mul(&qm);
                let delta = &qc * dc;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Some(Self::from_sorted(quotient))
    }

    /// Factors out the monomial of minimal exponents and the integer content.
    pub fn split_monomial_content(&self) -> Result<MonomialSplit, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let monomial = self.min_monomial();
        let mut content = self.content();
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        let residual = self
            .mul_monomial(&monomial.inverse())
            .div_integer_exact(&content);
        Ok(MonomialSplit {
            coefficient: content,
            monomial,
            residual,
        })
    }

    /// Degrees of the numerator and monomial denominator.
    pub fn degree_report(&self) -> Result<DegreeReport, AlgebraError> {
        let split = self.split_monomial_content()?;
        let (pos, neg) = split.monomial.split_signs();
        Ok(DegreeReport {
            numerator: pos.degree() + split.residual.total_degree(),
            denominator: neg.degree(),
            split_monomial: split.monomial.abs_degree(),
        })
    }

    /// Numerator polynomial `p` and monomial denominator `q` with `self = p / q`.
    pub fn numerator_denominator(&self) -> Result<(LaurentPolynomial, Monomial), AlgebraError> {
        let split = self.split_monomial_content()?;
        let (pos, neg) = split.monomial.split_signs();
        let p = split.residual.mul_monomial(&pos).scale(&split.coefficient);
        Ok((p, neg))
    }

    /// Exact value under a rational assignment.
    pub fn evaluate<F>(&self, assignment: F) -> Result<BigRational, AlgebraError>
    where
        F: Fn(VariableId) -> Option<BigRational>,
    {
        let mut cache: HashMap<VariableId, BigRational> = HashMap::new();
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut val = BigRational::from_integer(c.clone());
            for &(v, e) in m.pairs() {
                let x = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = assignment(v).ok_or(AlgebraError::Unassigned(v))?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                if e < 0 && x.is_zero() {
                    return Err(AlgebraError::Pole);
                }
                val *= num_traits::pow::Pow::pow(&x, e);
            }
            total += val;
        }
        Ok(total)
    }

    /// Substitutes integer values for some variables; the others stay symbolic.
    /// Specialized variables must not carry negative exponents.
    pub(crate) fn specialize(&self, values: &HashMap<VariableId, BigInt>) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Vec::new();
            for &(v, e) in m.pairs() {
                match values.get(&v) {
                    Some(x) => {
                        debug_assert!(e >= 0);
                        coeff *= num_traits::pow(x.clone(), e as usize);
                    }
                    None => kept.push((v, e)),
                }
            }
            if coeff.is_zero() {
                continue;
            }
            *acc.entry(Monomial::from_pairs(kept)).or_default() += coeff;
        }
        Self::from_map(acc)
    }

    /// Flips the overall sign so the leading coefficient is positive.
    pub fn normalize_sign(self) -> Self {
        match self.terms.first() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self,
        }
    }
}

impl From<i64> for LaurentPolynomial {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for LaurentPolynomial {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl From<VariableId> for LaurentPolynomial {
    fn from(v: VariableId) -> Self {
        Self::var(v)
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(mut self) -> Self {
        for t in &mut self.terms {
            t.1 = -std::mem::take(&mut t.1);
        }
        self
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -self.clone()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&LaurentPolynomial> for &LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $method(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
                let f: fn(&LaurentPolynomial, &LaurentPolynomial) -> LaurentPolynomial = $body;
                f(self, rhs)
            }
        }
        impl $tr<LaurentPolynomial> for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $method(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPolynomial> for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $method(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
                (&self).$method(rhs)
            }
        }
        impl $tr<LaurentPolynomial> for &LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $method(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.merge(b, false));
forward_binop!(Sub, sub, |a, b| a.merge(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> LaurentPolynomial {
        LaurentPolynomial::var(VariableId::Anonymous(0))
    }
    fn y() -> LaurentPolynomial {
        LaurentPolynomial::var(VariableId::Anonymous(1))
    }
    fn c(k: i64) -> LaurentPolynomial {
        LaurentPolynomial::constant(k)
    }
    fn inv(p: &LaurentPolynomial) -> LaurentPolynomial {
        let (m, _) = &p.terms()[0];
        LaurentPolynomial::term(1, m.inverse())
    }

    #[test]
    fn difference_of_squares() {
        let lhs = (&x() + &y()) * (&x() - &y());
        assert_eq!(lhs, &x() * &x() - &y() * &y());
    }

    #[test]
    fn cancellation_and_identity() {
        let p = &inv(&x()) + &y();
        assert_eq!(&p + &(-y()), inv(&x()));
        assert_eq!(&p * &c(1), p);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn exact_division_examples() {
        let num = &x() * &x() - &y() * &y();
        assert_eq!(num.exact_divide(&(&x() + &y())).unwrap(), &x() - &y());

        let mono = LaurentPolynomial::term(3, Monomial::from_pairs([
            (VariableId::Anonymous(0), 2),
            (VariableId::Anonymous(1), -1),
        ]));
        let d = &x() * &inv(&y());
        assert_eq!(mono.exact_divide(&d).unwrap(), x().scale(&BigInt::from(3)));

        assert_eq!(
            (&x() + &c(1)).exact_divide(&(&x() - &c(1))),
            Err(AlgebraError::NotDivisible)
        );
        assert_eq!(x().exact_divide(&c(0)), Err(AlgebraError::DivisionByZero));
        assert_eq!(c(3).exact_divide(&c(2)), Err(AlgebraError::NotDivisible));
    }

    #[test]
    fn laurent_division_through_monomial_shifts() {
        let d = &inv(&x()) + &y();
        let q = &(&x() * &y()) - &c(2);
        let p = &d * &q;
        assert_eq!(p.exact_divide(&d).unwrap(), q);
        assert_eq!(p.exact_divide(&q).unwrap(), d);
    }

    #[test]
    fn split_examples() {
        let p = &(&inv(&x()) * &y().pow(2)) + &y().pow(3);
        let s = p.split_monomial_content().unwrap();
        assert_eq!(s.coefficient, BigInt::one());
        assert_eq!(
            s.monomial,
            Monomial::from_pairs([(VariableId::Anonymous(0), -1), (VariableId::Anonymous(1), 2)])
        );
        assert_eq!(s.residual, &c(1) + &(&x() * &y()));

        let s = x().pow(2).scale(&BigInt::from(6)).split_monomial_content().unwrap();
        assert_eq!(s.coefficient, BigInt::from(6));
        assert_eq!(s.monomial, Monomial::var_pow(VariableId::Anonymous(0), 2));
        assert!(s.residual.is_one());

        let s = (&x() + &y()).split_monomial_content().unwrap();
        assert!(s.monomial.is_one());
        assert_eq!(s.residual, &x() + &y());

        let s = (-(&x() + &y())).scale(&BigInt::from(2)).split_monomial_content().unwrap();
        assert_eq!(s.coefficient, BigInt::from(-2));
        assert_eq!(s.residual, &x() + &y());

        assert_eq!(c(0).split_monomial_content(), Err(AlgebraError::ZeroPolynomial));
    }

    #[test]
    fn degree_examples() {
        let p = &(&x().pow(2) * &y()) + &y();
        let d = p.degree_report().unwrap();
        assert_eq!((d.numerator, d.denominator), (3, 0));

        let p = &inv(&x()) * &y().pow(2);
        let d = p.degree_report().unwrap();
        assert_eq!(d.split_monomial, 3);
        assert_eq!((d.numerator, d.denominator), (2, 1));

        let d = c(5).degree_report().unwrap();
        assert_eq!((d.numerator, d.denominator, d.split_monomial), (0, 0, 0));
        assert!(c(0).degree_report().is_err());
    }

    #[test]
    fn evaluate_examples() {
        let assign = |vals: [(u32, i64); 2]| {
            move |v: VariableId| match v {
                VariableId::Anonymous(i) => vals
                    .iter()
                    .find(|p| p.0 == i)
                    .map(|p| BigRational::from_integer(BigInt::from(p.1))),
                _ => None,
            }
        };
        let p = &x().pow(2) - &y().pow(2);
        assert_eq!(
            p.evaluate(assign([(0, 3), (1, 2)])).unwrap(),
            BigRational::from_integer(5.into())
        );
        assert_eq!(
            inv(&x()).evaluate(assign([(0, 2), (1, 0)])).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(
            inv(&x()).evaluate(assign([(0, 0), (1, 0)])),
            Err(AlgebraError::Pole)
        );
    }

    #[test]
    fn display_sorted_terms() {
        let p = &(&x().pow(2) - &y().scale(&BigInt::from(3))) + &(&inv(&x()) - &c(4));
        assert_eq!(p.to_string(), "v[0]^2 - 3*v[1] - 4 + v[0]^-1");
        assert_eq!(c(0).to_string(), "0");
        assert_eq!((-x()).to_string(), "-v[0]");
    }
}
