use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::VariableId;

/// Exponent vector with possibly negative entries.
///
/// Stored sparsely as `(variable, exponent)` pairs sorted by variable with
/// no zero exponents, so derived equality and hashing are structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(VariableId, i32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VariableId) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: VariableId, e: i32) -> Self {
        let mut m = SmallVec::new();
        if e != 0 {
            m.push((v, e));
        }
        Monomial(m)
    }

    /// Builds a monomial from arbitrary pairs; repeated variables are merged.
    pub fn from_pairs<I: IntoIterator<Item = (VariableId, i32)>>(pairs: I) -> Self {
        let mut v: SmallVec<[(VariableId, i32); 4]> = pairs.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: SmallVec<[(VariableId, i32); 4]> = SmallVec::new();
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        out.retain(|p| p.1 != 0);
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(VariableId, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: VariableId) -> i32 {
        match self.0.binary_search_by(|p| p.0.cmp(&v)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.combine(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.combine(other, -1)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    fn combine(&self, other: &Monomial, sign: i32) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, sign * b[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + sign * b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(v, e)| (v, sign * e)));
        Monomial(out)
    }

    /// Componentwise minimum, treating absent variables as exponent 0.
    pub fn gcd_exponents(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, |x, y| x.min(y))
    }

    /// Componentwise maximum, treating absent variables as exponent 0.
    pub fn lcm_exponents(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, |x, y| x.max(y))
    }

    fn merge_with(&self, other: &Monomial, f: impl Fn(i32, i32) -> i32) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (v, x, y) = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, a[i - 1].1, 0)
            } else if i >= a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, 0, b[j - 1].1)
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, a[i - 1].1, b[j - 1].1)
            };
            let e = f(x, y);
            if e != 0 {
                out.push((v, e));
            }
        }
        Monomial(out)
    }

    /// True when every exponent of `self` is at least the matching one of `other`.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        let q = self.div(other);
        q.0.iter().all(|p| p.1 >= 0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|p| p.1 >= 0)
    }

    /// Sum of exponents.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|p| p.1 as i64).sum()
    }

    /// Sum of absolute exponents.
    pub fn abs_degree(&self) -> i64 {
        self.0.iter().map(|p| p.1.unsigned_abs() as i64).sum()
    }

    /// Splits into (positive part, inverse of the negative part).
    pub fn split_signs(&self) -> (Monomial, Monomial) {
        let pos = self.0.iter().copied().filter(|p| p.1 > 0).collect();
        let neg = self
            .0
            .iter()
            .filter(|p| p.1 < 0)
            .map(|&(v, e)| (v, -e))
            .collect();
        (Monomial(pos), Monomial(neg))
    }

    /// Drops variable `v`, returning its exponent alongside the rest.
    pub fn remove_var(&self, v: VariableId) -> (i32, Monomial) {
        let mut rest = self.0.clone();
        match rest.binary_search_by(|p| p.0.cmp(&v)) {
            Ok(i) => {
                let e = rest.remove(i).1;
                (e, Monomial(rest))
            }
            Err(_) => (0, Monomial(rest)),
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = VariableId> + '_ {
        self.0.iter().map(|p| p.0)
    }
}

impl Ord for Monomial {
    /// Lexicographic order on dense exponent vectors, variables in
    /// ascending `VariableId` order, most significant first.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, e))) => return 0.cmp(&e),
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> VariableId {
        VariableId::Anonymous(0)
    }
    fn y() -> VariableId {
        VariableId::Anonymous(1)
    }

    #[test]
    fn lex_order_is_translation_invariant() {
        let a = Monomial::from_pairs([(x(), 2), (y(), -1)]);
        let b = Monomial::from_pairs([(x(), 1), (y(), 5)]);
        assert!(a > b);
        let s = Monomial::from_pairs([(x(), -3), (y(), 2)]);
        assert!(a.mul(&s) > b.mul(&s));
        assert!(Monomial::var_pow(y(), -1) < Monomial::one());
        assert!(Monomial::var(y()) > Monomial::one());
        assert!(Monomial::var(x()) > Monomial::var_pow(y(), 9));
    }

    #[test]
    fn mul_cancels_to_identity() {
        let a = Monomial::from_pairs([(x(), 2), (y(), -1)]);
        assert!(a.mul(&a.inverse()).is_one());
        assert_eq!(a.div(&a), Monomial::one());
        assert_eq!(a.abs_degree(), 3);
        assert_eq!(a.degree(), 1);
    }

    #[test]
    fn exponent_merges() {
        let a = Monomial::from_pairs([(x(), 2), (y(), -1)]);
        let b = Monomial::from_pairs([(x(), -1)]);
        assert_eq!(a.gcd_exponents(&b), Monomial::from_pairs([(x(), -1), (y(), -1)]));
        assert_eq!(a.lcm_exponents(&b), Monomial::from_pairs([(x(), 2)]));
        assert!(a.divisible_by(&Monomial::from_pairs([(x(), 1), (y(), -3)])));
        assert!(!a.divisible_by(&Monomial::var(y())));
    }
}
