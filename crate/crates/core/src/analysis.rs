//! Structural certificates for symbolic iterates: Laurent property with
//! explicit monomial denominators, pairwise coprimeness, the inductive
//! irreducibility certificate, the extended Laurent property of the
//! reduced frieze map, and degree growth.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    poly_gcd, specialized_pair_gcd, LaurentPolynomial, Monomial, RationalFunction, VariableId,
    SPECIALIZATION_BOUND,
};
use crate::lattice::{site, LatticeGrid, Region, SitePos, Sublattice};
use crate::reduction::Sequence;
use crate::report::as_display;
use crate::scalar::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("site {0} is not in the grid")]
    MissingSite(SitePos),
    #[error("value at {0} is not a Laurent polynomial")]
    NotLaurent(SitePos),
    #[error("value at {site} has degree {degree} in x[{n},0]; expected at most 1", n = site.n)]
    NotLinearInX { site: SitePos, degree: i32 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

fn laurent_at(grid: &LatticeGrid<RationalFunction>, s: SitePos) -> Result<&LaurentPolynomial, AnalysisError> {
    grid.get(s)
        .ok_or(AnalysisError::MissingSite(s))?
        .as_laurent()
        .ok_or(AnalysisError::NotLaurent(s))
}

fn x(n: i64, t: i64) -> VariableId {
    VariableId::site(n, t)
}

/// `q[n,t] = prod_{0<=m<=n-2} x[m,0] * prod_{1<=s<=t-1} x[0,s] x[1,s]`
/// for a site computed from the L-frame (`n >= 2`, `t >= 1`).
pub fn predicted_q(n: i64, t: i64) -> Monomial {
    let row = (0..=n - 2).map(|m| (x(m, 0), 1));
    let cols = (1..t).flat_map(|s| [(x(0, s), 1), (x(1, s), 1)]);
    Monomial::from_pairs(row.chain(cols))
}

/// Denominator actually produced by the evolution: the product formula for
/// `n >= 3`, but on the boundary column `n = 2` only `x[0,0] ... x[0,t-1]`
/// appears, since `x[2,t]` divides by `x[0,t-1]` alone and its other
/// inputs are initial values.
pub fn boundary_corrected_q(n: i64, t: i64) -> Monomial {
    if n == 2 {
        Monomial::from_pairs((0..t).map(|s| (x(0, s), 1)))
    } else {
        predicted_q(n, t)
    }
}

/// `2t + n - 3`, the degree of `q[n,t]`.
pub fn predicted_q_degree(n: i64, t: i64) -> i64 {
    2 * t + n - 3
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiteLaurent {
    pub site: SitePos,
    pub is_laurent: bool,
    /// Monomial denominator `q` of the stored value.
    pub denominator_monomial: Option<String>,
    /// `q[n,t]` from the product formula; absent for initial values.
    pub predicted_q: Option<String>,
    pub q_matches: bool,
    pub q_degree: Option<i64>,
    pub p_degree: Option<i64>,
    /// `deg q = 2t + n - 3` and `deg p = deg q + 1`.
    pub degrees_match: bool,
    /// `deg p = deg q + 1` alone.
    pub p_exceeds_q_by_one: bool,
    /// Agreement with [`boundary_corrected_q`].
    pub corrected_q_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaurentReport {
    pub sites: Vec<SiteLaurent>,
    pub all_laurent: bool,
    /// Every site matches the product formula and its degree.
    pub all_match: bool,
    pub all_match_corrected: bool,
    /// Sites where the product formula fails.
    pub mismatches: Vec<SitePos>,
}

/// Laurent status and monomial denominators of every site of `region`
/// present in a symbolic grid seeded on an L-frame.
pub fn laurent_report(grid: &LatticeGrid<RationalFunction>, region: Region) -> LaurentReport {
    let sites: Vec<SiteLaurent> = region
        .sites(Sublattice::All)
        .filter_map(|s| grid.get(s).map(|v| site_laurent(s, v)))
        .collect();
    LaurentReport {
        all_laurent: sites.iter().all(|s| s.is_laurent),
        all_match: sites.iter().all(|s| s.q_matches && s.degrees_match),
        all_match_corrected: sites.iter().all(|s| s.corrected_q_matches && s.p_exceeds_q_by_one),
        mismatches: sites
            .iter()
            .filter(|s| !(s.q_matches && s.degrees_match))
            .map(|s| s.site)
            .collect(),
        sites,
    }
}

fn site_laurent(s: SitePos, v: &RationalFunction) -> SiteLaurent {
    let computed = s.n >= 2 && s.t >= 1;
    let predicted = computed.then(|| predicted_q(s.n, s.t));
    let Some(p) = v.as_laurent() else {
        return SiteLaurent {
            site: s,
            is_laurent: false,
            denominator_monomial: None,
            predicted_q: predicted.map(|m| m.to_string()),
            q_matches: false,
            q_degree: None,
            p_degree: None,
            degrees_match: false,
            p_exceeds_q_by_one: false,
            corrected_q_matches: false,
        };
    };
    let (q, report) = match (p.numerator_denominator(), p.degree_report()) {
        (Ok((_, q)), Ok(r)) => (q, r),
        // zero never arises from a nonsingular evolution
        _ => (Monomial::one(), crate::algebra::DegreeReport { numerator: 0, denominator: 0, split_monomial: 0 }),
    };
    let expected_q = predicted.clone().unwrap_or_else(Monomial::one);
    let corrected = if computed { boundary_corrected_q(s.n, s.t) } else { Monomial::one() };
    let p_exceeds_q_by_one = !computed || report.numerator == report.denominator + 1;
    let degrees_match = if computed {
        report.denominator == predicted_q_degree(s.n, s.t) && p_exceeds_q_by_one
    } else {
        report.denominator == 0
    };
    SiteLaurent {
        site: s,
        is_laurent: true,
        denominator_monomial: Some(q.to_string()),
        predicted_q: predicted.map(|m| m.to_string()),
        q_matches: q == expected_q,
        corrected_q_matches: q == corrected,
        p_exceeds_q_by_one,
        q_degree: Some(report.denominator),
        p_degree: Some(report.numerator),
        degrees_match,
    }
}

/// Parameters of [`coprimeness_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoprimeOptions {
    /// Rounds of specializations; each round keeps every shared variable
    /// in at least one bivariate draw.
    pub trials: usize,
    pub seed: u64,
    /// Run the exact multivariate GCD even when every draw is trivial.
    pub confirm: bool,
}

impl Default for CoprimeOptions {
    fn default() -> Self {
        Self {
            trials: crate::algebra::MIN_TRIALS,
            seed: 0,
            confirm: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoprimeReport {
    pub coprime: bool,
    /// A common non-unit factor, when one exists.
    pub witness: Option<String>,
    /// Whether the verdict comes from the exact GCD.
    pub exact: bool,
    pub draws: usize,
    pub nontrivial_draws: usize,
    /// Upper bound on the probability that a common factor went unseen
    /// (zero for exact verdicts).
    pub failure_bound: f64,
}

/// Coprimeness of two Laurent polynomials (monomials are units).
///
/// Each draw specializes all but two shared variables at integers from
/// `[-10^6, 10^6]` and takes the bivariate GCD. A common factor involving a
/// kept variable survives the draw unless its leading coefficient vanishes,
/// which by the Schwartz-Zippel lemma has probability at most `D / |S|`
/// (`D` the smaller total degree, `|S| = 2*10^6 + 1`). A nontrivial draw,
/// or `confirm`, triggers the exact GCD.
pub fn coprimeness_check(p: &LaurentPolynomial, q: &LaurentPolynomial, opts: CoprimeOptions) -> CoprimeReport {
    let exact = |draws, nontrivial_draws| {
        let g = poly_gcd(p, q);
        let coprime = g.is_constant();
        CoprimeReport {
            coprime,
            witness: (!coprime).then(|| g.to_string()),
            exact: true,
            draws,
            nontrivial_draws,
            failure_bound: 0.0,
        }
    };
    if p.is_zero() || q.is_zero() {
        return exact(0, 0);
    }
    let strip = |x: &LaurentPolynomial| x.mul_monomial(&x.min_monomial().inverse());
    let (a, b) = (strip(p), strip(q));
    let va = a.variables();
    let vb = b.variables();
    let shared: Vec<VariableId> = va.intersection(&vb).copied().collect();
    let all: BTreeSet<VariableId> = va.union(&vb).copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut draws = 0;
    let mut nontrivial = 0;
    if !shared.is_empty() {
        for _ in 0..opts.trials.max(1) {
            for pair in shared.chunks(2) {
                let keep: Vec<VariableId> = match pair {
                    [v] => std::iter::once(*v)
                        .chain(all.iter().copied().find(|u| u != v))
                        .collect(),
                    _ => pair.to_vec(),
                };
                draws += 1;
                match specialized_pair_gcd(&a, &b, &keep, &all, &mut rng) {
                    Some(g) if keep.iter().all(|&u| g.degree_in(u) == 0) => {}
                    _ => nontrivial += 1,
                }
            }
        }
    }
    if nontrivial > 0 || opts.confirm {
        return exact(draws, nontrivial);
    }
    let d = a.total_degree().min(b.total_degree()).max(1) as f64;
    let s = (2 * SPECIALIZATION_BOUND + 1) as f64;
    CoprimeReport {
        coprime: true,
        witness: None,
        exact: shared.is_empty(),
        draws,
        nontrivial_draws: 0,
        failure_bound: if shared.is_empty() { 0.0 } else { (d / s).powi(opts.trials.max(1) as i32) },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairwiseCoprimeness {
    pub pairs: usize,
    pub failures: Vec<(SitePos, SitePos, String)>,
    pub all_exact: bool,
}

/// Every distinct pair of values in `region`.
pub fn pairwise_coprimeness(
    grid: &LatticeGrid<RationalFunction>,
    region: Region,
    opts: CoprimeOptions,
) -> Result<PairwiseCoprimeness, AnalysisError> {
    let values: Vec<(SitePos, &LaurentPolynomial)> = region
        .sites(Sublattice::All)
        .filter(|&s| grid.get(s).is_some())
        .map(|s| Ok((s, laurent_at(grid, s)?)))
        .collect::<Result<_, AnalysisError>>()?;
    let pairs: Vec<(usize, usize)> = (0..values.len())
        .flat_map(|i| (i + 1..values.len()).map(move |j| (i, j)))
        .collect();
    let reports = crate::par::map(crate::par::Schedule::default(), &pairs, |&(i, j)| {
        coprimeness_check(values[i].1, values[j].1, opts)
    });
    Ok(PairwiseCoprimeness {
        pairs: pairs.len(),
        all_exact: reports.iter().all(|r| r.exact),
        failures: pairs
            .iter()
            .zip(&reports)
            .filter(|(_, r)| !r.coprime)
            .map(|(&(i, j), r)| (values[i].0, values[j].0, r.witness.clone().unwrap_or_default()))
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Irreducibility {
    /// Initial value: a single generator.
    Skipped,
    /// `x[n,t] = A X + B` with `X = x[n,0]`, `A = x[n-2,t]/x[n-2,0]`, `A, B`
    /// nonzero and coprime.
    Holds {
        #[serde(serialize_with = "as_display")]
        a: LaurentPolynomial,
        #[serde(serialize_with = "as_display")]
        b: LaurentPolynomial,
    },
    Fails { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrreducibilityReport {
    pub site: SitePos,
    pub result: Irreducibility,
}

impl IrreducibilityReport {
    pub fn holds(&self) -> bool {
        !matches!(self.result, Irreducibility::Fails { .. })
    }
}

/// The inductive certificate behind irreducibility: linearity in
/// `X = x[n,0]` with the predicted coefficient of `X`, and coprime
/// coefficients.
pub fn irreducibility_evidence(
    grid: &LatticeGrid<RationalFunction>,
    s: SitePos,
) -> Result<IrreducibilityReport, AnalysisError> {
    let v = laurent_at(grid, s)?;
    if s.n < 2 || s.t < 1 {
        return Ok(IrreducibilityReport { site: s, result: Irreducibility::Skipped });
    }
    let xv = x(s.n, 0);
    let degree = v.degree_in(xv);
    if degree != 1 || v.min_degree_in(xv) < 0 {
        return Err(AnalysisError::NotLinearInX { site: s, degree });
    }
    let a = v.coefficient_of(xv, 1);
    let b = v.coefficient_of(xv, 0);
    let predicted = laurent_at(grid, site(s.n - 2, s.t))?.mul_monomial(&Monomial::var_pow(x(s.n - 2, 0), -1));
    let fail = |reason: String| Ok(IrreducibilityReport { site: s, result: Irreducibility::Fails { reason } });
    if a != predicted {
        return fail(format!("A = {a}, expected {predicted}"));
    }
    if a.is_zero() || b.is_zero() {
        return fail("a coefficient vanishes".into());
    }
    let c = coprimeness_check(&a, &b, CoprimeOptions { confirm: true, ..Default::default() });
    if !c.coprime {
        return fail(format!("A and B share {}", c.witness.unwrap_or_default()));
    }
    Ok(IrreducibilityReport { site: s, result: Irreducibility::Holds { a, b } })
}

/// Access to a symbolic denominator; numeric values have none.
pub trait SymbolicDenominator {
    fn symbolic_denominator(&self) -> Option<&LaurentPolynomial>;
    fn as_polynomial(&self) -> Option<&LaurentPolynomial>;
}

impl SymbolicDenominator for RationalFunction {
    fn symbolic_denominator(&self) -> Option<&LaurentPolynomial> {
        Some(self.denominator())
    }
    fn as_polynomial(&self) -> Option<&LaurentPolynomial> {
        self.as_laurent()
    }
}

impl SymbolicDenominator for Rational {
    fn symbolic_denominator(&self) -> Option<&LaurentPolynomial> {
        None
    }
    fn as_polynomial(&self) -> Option<&LaurentPolynomial> {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedLaurentEntry {
    pub index: i64,
    pub is_laurent: bool,
    /// Exponents of the two discriminants removed from the denominator.
    pub u: u32,
    pub v: u32,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedLaurentReport {
    pub discriminants: Option<(String, String)>,
    pub entries: Vec<ExtendedLaurentEntry>,
    pub holds: bool,
}

/// Checks that every denominator of a sequence seeded by four generators
/// `a1..a4` is, up to a unit, `d1^u d2^v` with `d1 = a2^2 - a1 a3` and
/// `d2 = a3^2 - a2 a4`. Numeric sequences pass vacuously.
pub fn extended_laurent_check<V: SymbolicDenominator + Clone + fmt::Debug>(
    seq: &Sequence<V>,
) -> Result<ExtendedLaurentReport, AnalysisError> {
    if seq.terms.first().and_then(SymbolicDenominator::symbolic_denominator).is_none() {
        return Ok(ExtendedLaurentReport { discriminants: None, entries: Vec::new(), holds: true });
    }
    let a: Vec<&LaurentPolynomial> = seq
        .terms
        .iter()
        .take(4)
        .map(|v| v.as_polynomial())
        .collect::<Option<_>>()
        .filter(|a: &Vec<_>| a.len() == 4)
        .ok_or_else(|| AnalysisError::InsufficientData("four polynomial seeds are needed".into()))?;
    let d1 = &(a[1] * a[1]) - &(a[0] * a[2]);
    let d2 = &(a[2] * a[2]) - &(a[1] * a[3]);
    let entries: Vec<ExtendedLaurentEntry> = seq
        .terms
        .iter()
        .zip(seq.start..)
        .map(|(v, index)| {
            let den = v.symbolic_denominator().expect("symbolic").clone();
            let is_laurent = den.is_one();
            let (u, rest) = strip_powers(den, &d1);
            let (w, rest) = strip_powers(rest, &d2);
            let passes = rest.is_monomial() && rest.terms()[0].1.abs() == BigInt::from(1);
            ExtendedLaurentEntry { index, is_laurent, u, v: w, passes }
        })
        .collect();
    Ok(ExtendedLaurentReport {
        discriminants: Some((d1.to_string(), d2.to_string())),
        holds: entries.iter().all(|e| e.passes),
        entries,
    })
}

fn strip_powers(mut p: LaurentPolynomial, d: &LaurentPolynomial) -> (u32, LaurentPolynomial) {
    let mut k = 0;
    if d.is_constant() {
        return (0, p);
    }
    while let Ok(q) = p.exact_divide(d) {
        p = q;
        k += 1;
    }
    (k, p)
}

/// A line of sites along which degrees are followed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ray {
    /// Fixed `t`, `n = 2, 3, ...`.
    AlongN { t: i64 },
    /// Fixed `n`, `t = 1, 2, ...`.
    AlongT { n: i64 },
}

impl Ray {
    fn site(self, i: i64) -> SitePos {
        match self {
            Ray::AlongN { t } => site(2 + i, t),
            Ray::AlongT { n } => site(n, 1 + i),
        }
    }

    fn coordinate(self, s: SitePos) -> i64 {
        match self {
            Ray::AlongN { .. } => s.n,
            Ray::AlongT { .. } => s.t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GrowthClass {
    Constant,
    Linear,
    /// Degrees fitted by a polynomial of the given order (exact when
    /// `exact_fit`).
    Polynomial { order: usize, exact_fit: bool },
    Exponential { rate: f64 },
}

impl GrowthClass {
    pub fn is_subexponential(&self) -> bool {
        !matches!(self, GrowthClass::Exponential { .. })
    }
}

/// Successive log-degree differences must exceed this, and agree to within
/// 10%, for a sequence to count as exponential.
pub const EXPONENTIAL_THRESHOLD: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub ray: Ray,
    pub sites: Vec<SitePos>,
    pub q_degrees: Vec<i64>,
    pub p_degrees: Vec<i64>,
    pub growth: GrowthClass,
    /// Leading sites excluded from the fit.
    pub transient: usize,
    /// Exact least-squares slope of `deg q` against the ray coordinate,
    /// over the fitted tail.
    #[serde(serialize_with = "as_display")]
    pub slope: Rational,
    /// `0` for sub-exponential growth, else the fitted rate.
    pub entropy: f64,
    /// `ln(d_N) / N` on the last site.
    pub log_ratio: f64,
}

impl EntropyEstimate {
    /// CSV with header `index,n,t,q_degree,p_degree`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,n,t,q_degree,p_degree\n");
        for (i, s) in self.sites.iter().enumerate() {
            out.push_str(&format!("{i},{},{},{},{}\n", s.n, s.t, self.q_degrees[i], self.p_degrees[i]));
        }
        out
    }
}

/// Degrees of `q` and `p` along `ray` (at least 8 computed sites), the
/// growth class and the entropy estimate.
pub fn degree_growth(grid: &LatticeGrid<RationalFunction>, ray: Ray) -> Result<EntropyEstimate, AnalysisError> {
    let mut sites = Vec::new();
    let mut q = Vec::new();
    let mut p = Vec::new();
    for i in 0.. {
        let s = ray.site(i);
        let Some(v) = grid.get(s) else { break };
        let l = v.as_laurent().ok_or(AnalysisError::NotLaurent(s))?;
        let r = l.degree_report().map_err(|_| AnalysisError::InsufficientData(format!("zero at {s}")))?;
        sites.push(s);
        q.push(r.denominator);
        p.push(r.numerator);
    }
    if sites.len() < 8 {
        return Err(AnalysisError::InsufficientData(format!(
            "{} sites on the ray; need 8",
            sites.len()
        )));
    }
    let (growth, transient) = classify(&q);
    let xs: Vec<i64> = sites.iter().map(|&s| ray.coordinate(s)).collect();
    let slope = ls_slope(&xs[transient..], &q[transient..]);
    let last = *q.last().expect("nonempty") as f64;
    let log_ratio = if last > 0.0 { last.ln() / q.len() as f64 } else { 0.0 };
    let entropy = match growth {
        GrowthClass::Exponential { rate } => rate,
        _ => 0.0,
    };
    Ok(EntropyEstimate { ray, sites, q_degrees: q, p_degrees: p, growth, transient, slope, entropy, log_ratio })
}

/// Minimum number of points a polynomial fit must cover.
pub const MIN_FIT_POINTS: usize = 6;

/// Growth class of a degree sequence, with the number of leading points
/// skipped as a boundary transient. Exponential growth is tested first;
/// otherwise the lowest polynomial order (at most 3) whose finite
/// differences are constant on a tail of at least [`MIN_FIT_POINTS`]
/// points wins, preferring the longest such tail.
pub fn classify(d: &[i64]) -> (GrowthClass, usize) {
    let logs: Vec<f64> = d.iter().map(|&x| (x.max(1) as f64).ln()).collect();
    let diffs: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.len() >= 3 {
        let tail = &diffs[diffs.len() - 3..];
        let (lo, hi) = tail.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        if lo > EXPONENTIAL_THRESHOLD && hi - lo <= 0.1 * hi {
            return (GrowthClass::Exponential { rate: tail[2] }, 0);
        }
    }
    for order in 0..=3usize {
        for skip in 0..=d.len().saturating_sub(MIN_FIT_POINTS.max(order + 2)) {
            let mut cur = d[skip..].to_vec();
            for _ in 0..order {
                cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
            }
            if cur.windows(2).all(|w| w[0] == w[1]) {
                let class = match order {
                    0 => GrowthClass::Constant,
                    1 => GrowthClass::Linear,
                    _ => GrowthClass::Polynomial { order, exact_fit: true },
                };
                return (class, skip);
            }
        }
    }
    (GrowthClass::Polynomial { order: d.len().saturating_sub(1), exact_fit: false }, 0)
}

fn ls_slope(xs: &[i64], ys: &[i64]) -> Rational {
    let n = Rational::from_integer(xs.len().into());
    let r = |v: i64| Rational::from_integer(v.into());
    let mx = xs.iter().map(|&v| r(v)).sum::<Rational>() / &n;
    let my = ys.iter().map(|&v| r(v)).sum::<Rational>() / &n;
    let mut num = Rational::zero();
    let mut den = Rational::zero();
    for (&xv, &yv) in xs.iter().zip(ys) {
        let dx = r(xv) - &mx;
        num += &dx * (r(yv) - &my);
        den += &dx * &dx;
    }
    if den.is_zero() {
        Rational::zero()
    } else {
        num / den
    }
}

/// Smallest `n0` such that `x[n,t]` is strictly increasing in `n` from
/// `n0` to the end of row `t`.
pub fn row_increasing_from(grid: &LatticeGrid<Rational>, t: i64) -> Option<i64> {
    let row: Vec<(i64, &Rational)> = grid
        .values()
        .iter()
        .filter(|(s, _)| s.t == t)
        .map(|(s, v)| (s.n, v))
        .collect();
    if row.len() < 2 {
        return None;
    }
    let mut n0 = row.last()?.0;
    for w in row.windows(2).rev() {
        if w[1].0 == w[0].0 + 1 && w[0].1 < w[1].1 {
            n0 = w[0].0;
        } else {
            break;
        }
    }
    Some(n0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_formula() {
        assert_eq!(predicted_q(2, 1), Monomial::var(x(0, 0)));
        assert_eq!(predicted_q(4, 2).degree(), predicted_q_degree(4, 2));
        assert_eq!(predicted_q_degree(4, 2), 5);
    }

    #[test]
    fn classes() {
        assert_eq!(classify(&[3; 8]), (GrowthClass::Constant, 0));
        assert_eq!(classify(&[3, 4, 5, 6, 7, 8, 9, 10]), (GrowthClass::Linear, 0));
        assert_eq!(classify(&[2, 4, 5, 6, 7, 8, 9, 10]), (GrowthClass::Linear, 1));
        assert_eq!(
            classify(&[1, 4, 9, 16, 25, 36, 49, 64]),
            (GrowthClass::Polynomial { order: 2, exact_fit: true }, 0)
        );
        let fib = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89];
        assert!(matches!(classify(&fib).0, GrowthClass::Exponential { rate } if (rate - 0.48).abs() < 0.01));
    }

    #[test]
    fn exact_slope() {
        assert_eq!(ls_slope(&[1, 2, 3, 4], &[3, 5, 7, 9]), Rational::from_integer(2.into()));
    }
}
