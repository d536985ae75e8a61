//! Multivariate GCD over the integers.
//!
//! The workhorse is a recursive primitive PRS over a chosen main variable.
//! In front of it sits a specialization pre-check: all variables except two
//! are replaced by random integers and the bivariate GCD is taken. When the
//! leading coefficients of the kept variables survive the specialization,
//! the degree of the specialized GCD bounds the true degree from above, so a
//! trivial specialized GCD is an exact proof that the true GCD does not
//! involve those variables. Coprime pairs, the common case, therefore never
//! reach the PRS.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LaurentPolynomial, Monomial, VariableId};

/// Bound of the specialization range `[-SPECIALIZATION_BOUND, SPECIALIZATION_BOUND]`.
pub const SPECIALIZATION_BOUND: i64 = 1_000_000;

/// Minimum number of specialization trials in the pre-check.
pub const MIN_TRIALS: usize = 3;

const CERTIFICATE_SEED: u64 = 0x5eed_9cd_2024;

/// Greatest common divisor in the Laurent ring.
///
/// Monomials are units, so the result is the GCD of the polynomial
/// residuals (including their integer content), normalized to have a
/// positive leading coefficient and no monomial factor.
pub fn poly_gcd(p: &LaurentPolynomial, q: &LaurentPolynomial) -> LaurentPolynomial {
    let strip = |x: &LaurentPolynomial| x.mul_monomial(&x.min_monomial().inverse());
    match (p.is_zero(), q.is_zero()) {
        (true, true) => LaurentPolynomial::zero(),
        (false, true) => strip(p).normalize_sign(),
        (true, false) => strip(q).normalize_sign(),
        (false, false) => {
            let mut rng = ChaCha8Rng::seed_from_u64(CERTIFICATE_SEED);
            gcd_poly(&strip(p), &strip(q), &mut rng)
        }
    }
}

/// GCD of two polynomials (no negative exponents).
pub(crate) fn gcd_poly(
    a: &LaurentPolynomial,
    b: &LaurentPolynomial,
    rng: &mut ChaCha8Rng,
) -> LaurentPolynomial {
    if a.is_zero() {
        return b.clone().normalize_sign();
    }
    if b.is_zero() {
        return a.clone().normalize_sign();
    }
    if a.is_constant() || b.is_constant() {
        return LaurentPolynomial::constant(a.content().gcd(&b.content()));
    }

    let (ma, mb) = (a.min_monomial(), b.min_monomial());
    let mg = ma.gcd_exponents(&mb);
    if !ma.is_one() || !mb.is_one() {
        let a = a.mul_monomial(&ma.inverse());
        let b = b.mul_monomial(&mb.inverse());
        return gcd_poly(&a, &b, rng).mul_monomial(&mg);
    }

    if a == b || *a == -b {
        return a.clone().normalize_sign();
    }
    if a.exact_divide(b).is_ok() {
        return b.clone().normalize_sign();
    }
    if b.exact_divide(a).is_ok() {
        return a.clone().normalize_sign();
    }

    let va = a.variables();
    let vb = b.variables();
    let shared: Vec<VariableId> = va.intersection(&vb).copied().collect();
    if shared.is_empty() {
        return LaurentPolynomial::constant(a.content().gcd(&b.content()));
    }
    let all: BTreeSet<VariableId> = va.union(&vb).copied().collect();
    if all.len() > 2 && certify_free_of(a, b, &shared, &all, rng) {
        return LaurentPolynomial::constant(a.content().gcd(&b.content()));
    }

    // A variable occurring in only one operand cannot occur in the GCD.
    if let Some(&v) = va.symmetric_difference(&vb).next() {
        let (x, y) = if va.contains(&v) { (a, b) } else { (b, a) };
        let mut g = y.clone();
        for (_, c) in x.coefficients_in(v) {
            g = gcd_poly(&g, &c, rng);
            if g.is_constant() && g.as_constant().map_or(false, |c| c.is_one()) {
                break;
            }
        }
        return g.normalize_sign();
    }

    if let Some(g) = heuristic_gcd(a, b, rng) {
        return g;
    }
    let v = *shared
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("shared variables are nonempty");
    prs_gcd(a, b, v, rng)
}

fn max_norm(x: &LaurentPolynomial) -> BigInt {
    x.terms().iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

/// Heuristic GCD: evaluate the last variable at a large integer `xi`,
/// take the GCD of the images, and read the candidate back from its
/// balanced `xi`-adic expansion. With `xi > 2 min(|a|, |b|) + 1` a
/// candidate dividing both operands is the GCD; `None` when no evaluation
/// point produced one.
fn heuristic_gcd(
    a: &LaurentPolynomial,
    b: &LaurentPolynomial,
    rng: &mut ChaCha8Rng,
) -> Option<LaurentPolynomial> {
    let v = *a.variables().union(&b.variables()).last()?;
    let (ca, cb) = (a.content(), b.content());
    let pa = a.div_integer_exact(&ca);
    let pb = b.div_integer_exact(&cb);
    let content = LaurentPolynomial::constant(ca.gcd(&cb));
    let mut xi: BigInt = 2 * max_norm(&pa).min(max_norm(&pb)) + 2;
    for _ in 0..4 {
        let point: HashMap<VariableId, BigInt> = [(v, xi.clone())].into_iter().collect();
        let (ea, eb) = (pa.specialize(&point), pb.specialize(&point));
        if !ea.is_zero() && !eb.is_zero() {
            let h = gcd_poly(&ea, &eb, rng);
            let cand = interpolate(&h, &xi, v);
            if !cand.is_zero() {
                let cand = cand.div_integer_exact(&cand.content());
                let cand = cand.mul_monomial(&cand.min_monomial().inverse()).normalize_sign();
                if pa.exact_divide(&cand).is_ok() && pb.exact_divide(&cand).is_ok() {
                    return Some(&content * &cand);
                }
            }
        }
        xi = &xi * 73794 / 27011 + 1;
    }
    None
}

/// Inverse of evaluation at `v = xi`, with balanced residues in
/// `(-xi/2, xi/2]`.
fn interpolate(h: &LaurentPolynomial, xi: &BigInt, v: VariableId) -> LaurentPolynomial {
    let half = xi / 2;
    let mut rest = h.clone();
    let mut terms = Vec::new();
    let mut e = 0;
    while !rest.is_zero() {
        let digit: Vec<(Monomial, BigInt)> = rest
            .terms()
            .iter()
            .filter_map(|(m, c)| {
                let mut r = c.mod_floor(xi);
                if r > half {
                    r -= xi;
                }
                (!r.is_zero()).then(|| (m.clone(), r))
            })
            .collect();
        let digit = LaurentPolynomial::from_terms(digit);
        for (m, c) in digit.terms() {
            terms.push((m.mul(&Monomial::var_pow(v, e)), c.clone()));
        }
        rest = (&rest - &digit).div_integer_exact(xi);
        e += 1;
    }
    LaurentPolynomial::from_terms(terms)
}

fn content_in(x: &LaurentPolynomial, v: VariableId, rng: &mut ChaCha8Rng) -> LaurentPolynomial {
    let mut g = LaurentPolynomial::zero();
    for (_, c) in x.coefficients_in(v) {
        g = gcd_poly(&g, &c, rng);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(x: &LaurentPolynomial, v: VariableId, rng: &mut ChaCha8Rng) -> LaurentPolynomial {
    let c = content_in(x, v, rng);
    x.exact_divide(&c)
        .expect("content divides every coefficient")
        .normalize_sign()
}

/// Pseudo-remainder of `f` by `g` with respect to `v`.
fn prem(f: &LaurentPolynomial, g: &LaurentPolynomial, v: VariableId) -> LaurentPolynomial {
    let n = g.degree_in(v);
    let lc = g.coefficient_of(v, n);
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= n {
        let d = r.degree_in(v);
        let lr = r.coefficient_of(v, d).mul_monomial(&Monomial::var_pow(v, d - n));
        r = &(&r * &lc) - &(g * &lr);
    }
    r
}

fn prs_gcd(
    a: &LaurentPolynomial,
    b: &LaurentPolynomial,
    v: VariableId,
    rng: &mut ChaCha8Rng,
) -> LaurentPolynomial {
    let ca = content_in(a, v, rng);
    let cb = content_in(b, v, rng);
    let pa = a.exact_divide(&ca).expect("content divides");
    let pb = b.exact_divide(&cb).expect("content divides");
    let c = gcd_poly(&ca, &cb, rng);

    let (mut f, mut g) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let h = loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            break g;
        }
        if r.degree_in(v) == 0 {
            break LaurentPolynomial::one();
        }
        let r = primitive_part(&r, v, rng);
        f = g;
        g = r;
    };
    let h = primitive_part(&h, v, rng);
    (&c * &h).normalize_sign()
}

/// Proves that `gcd(a, b)` involves none of `shared` by bivariate
/// specializations. Returns `false` when the proof could not be completed,
/// which happens when a common factor exists.
fn certify_free_of(
    a: &LaurentPolynomial,
    b: &LaurentPolynomial,
    shared: &[VariableId],
    all: &BTreeSet<VariableId>,
    rng: &mut ChaCha8Rng,
) -> bool {
    let mut pending: Vec<VariableId> = shared.to_vec();
    let mut failures = 0;
    while !pending.is_empty() {
        let v = pending[0];
        let w = pending
            .get(1)
            .copied()
            .or_else(|| all.iter().copied().find(|&u| u != v));
        let keep: Vec<VariableId> = std::iter::once(v).chain(w).collect();
        match specialized_pair_gcd(a, b, &keep, all, rng) {
            Some(g) => {
                if keep.iter().any(|&u| g.degree_in(u) > 0) {
                    return false;
                }
                pending.retain(|u| !keep.contains(u));
            }
            None => {
                failures += 1;
                if failures > 8 {
                    return false;
                }
            }
        }
    }
    true
}

/// Specializes every variable outside `keep` at random and returns the GCD
/// of the specialized pair, or `None` when a leading coefficient in a kept
/// variable vanished (the specialization would not bound the degree).
pub(crate) fn specialized_pair_gcd(
    a: &LaurentPolynomial,
    b: &LaurentPolynomial,
    keep: &[VariableId],
    all: &BTreeSet<VariableId>,
    rng: &mut ChaCha8Rng,
) -> Option<LaurentPolynomial> {
    let values: HashMap<VariableId, BigInt> = all
        .iter()
        .filter(|v| !keep.contains(v))
        .map(|&v| {
            (
                v,
                BigInt::from(rng.gen_range(-SPECIALIZATION_BOUND..=SPECIALIZATION_BOUND)),
            )
        })
        .collect();
    for &u in keep {
        if a.degree_in(u) > 0 {
            let lc = a.coefficient_of(u, a.degree_in(u));
            if lc.specialize(&values).is_zero() {
                return None;
            }
        }
    }
    let sa = a.specialize(&values);
    let sb = b.specialize(&values);
    if sa.is_zero() || sb.is_zero() {
        return None;
    }
    Some(gcd_poly(&sa, &sb, rng))
}
