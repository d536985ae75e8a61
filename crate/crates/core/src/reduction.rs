//! One-dimensional recurrences obtained from the lattice by the reduction
//! `x[n,t] = x[n+M,t-K]`, `a_j = x[n,t]` with `j = nK + tM`, together with
//! the classic Heideman-Hogan, Dana-Scott and reduced frieze recurrences,
//! constant-coefficient recurrence detection and the periodicity checks of
//! the reduced linearizations.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{RationalFunction, VariableId};
use crate::lattice::{site, EquationSpec, InitialFrame, LatticeGrid, SitePos};
use crate::linalg;
use crate::linearization::{alpha_beta_closed_form, Coef, LinError, LineParity, Linearizer, solve_shared};
use crate::report::{as_display, as_display_vec};
use crate::scalar::{Rational, Scalar};
use crate::SCHEMA_VERSION;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("K and M must be coprime positive integers, got K={k}, M={m}")]
    InvalidSpec { k: i64, m: i64 },
    #[error("expected {expected} initial values, got {got}")]
    InitLength { expected: usize, got: usize },
    #[error("pole computing a[{index}]: division by zero (last good index {})", index - 1)]
    Pole { index: i64 },
    #[error("singular denominator a[j+2]a[j] - a[j+1]^2 = 0 at step j={step} (computing a[{index}])")]
    SingularDenominator { step: i64, index: i64 },
    #[error("no single constant fits: {0}")]
    Inconsistent(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("linearization: {0}")]
    Lin(#[from] LinError),
    #[error("sequence format: {0}")]
    Format(String),
}

/// The reduction `x[n,t] = x[n+M,t-K]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReductionSpec {
    pub k: i64,
    pub m: i64,
}

impl ReductionSpec {
    pub fn new(k: i64, m: i64) -> Result<Self, ReductionError> {
        if k < 1 || m < 1 || k.gcd(&m) != 1 {
            return Err(ReductionError::InvalidSpec { k, m });
        }
        Ok(Self { k, m })
    }

    /// Number of initial values of the reduced recurrence, `2K + M`.
    pub fn order(&self) -> usize {
        (2 * self.k + self.m) as usize
    }

    /// Sequence index of the site `(n, t)`.
    pub fn index(&self, n: i64, t: i64) -> i64 {
        n * self.k + t * self.m
    }

    /// Bound `6KM` on the order of a constant-coefficient recurrence.
    pub fn constant_order_bound(&self) -> usize {
        (6 * self.k * self.m) as usize
    }
}

impl fmt::Display for ReductionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={}, M={}", self.k, self.m)
    }
}

/// Contiguous terms `a[start], a[start+1], ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence<V> {
    pub start: i64,
    pub terms: Vec<V>,
}

impl<V: Scalar> Sequence<V> {
    pub fn new(start: i64, terms: Vec<V>) -> Self {
        Self { start, terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Index one past the last term.
    pub fn end(&self) -> i64 {
        self.start + self.terms.len() as i64
    }

    pub fn get(&self, j: i64) -> Option<&V> {
        usize::try_from(j - self.start).ok().and_then(|i| self.terms.get(i))
    }

    fn at(&self, j: i64) -> Result<&V, ReductionError> {
        self.get(j)
            .ok_or_else(|| ReductionError::InsufficientData(format!("a[{j}] is not in the sequence")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &V)> {
        self.terms.iter().enumerate().map(move |(i, v)| (self.start + i as i64, v))
    }
}

impl Sequence<RationalFunction> {
    /// Free generators `a[start], ..., a[start+count-1]`.
    pub fn generators(start: i64, count: usize) -> Self {
        let terms = (0..count as i64)
            .map(|i| RationalFunction::var(VariableId::Free((start + i) as i32)))
            .collect();
        Self { start, terms }
    }
}

impl Sequence<Rational> {
    pub fn from_i64(start: i64, values: &[i64]) -> Self {
        Self::new(start, values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn integer_flags(&self) -> Vec<bool> {
        self.terms.iter().map(Rational::is_integer).collect()
    }

    pub fn all_integers(&self) -> bool {
        self.terms.iter().all(Rational::is_integer)
    }
}

/// Numerator and denominator text of an exact value, and whether it is
/// integral (an integer, or a Laurent polynomial in symbolic mode).
pub trait ExactParts: Scalar {
    fn parts(&self) -> (String, String, bool);
}

impl ExactParts for Rational {
    fn parts(&self) -> (String, String, bool) {
        (self.numer().to_string(), self.denom().to_string(), self.is_integer())
    }
}

impl ExactParts for RationalFunction {
    fn parts(&self) -> (String, String, bool) {
        (
            self.numerator().to_string(),
            self.denominator().to_string(),
            self.is_laurent(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceTerm {
    pub index: i64,
    pub value: String,
    pub numerator: String,
    pub denominator: String,
    pub is_integer: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub schema_version: u32,
    pub start: i64,
    pub terms: Vec<SequenceTerm>,
}

impl<V: ExactParts> Sequence<V> {
    pub fn to_records(&self) -> SequenceJson {
        SequenceJson {
            schema_version: SCHEMA_VERSION,
            start: self.start,
            terms: self
                .iter()
                .map(|(index, v)| {
                    let (numerator, denominator, is_integer) = v.parts();
                    SequenceTerm {
                        index,
                        value: v.to_string(),
                        numerator,
                        denominator,
                        is_integer,
                    }
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_records()).expect("sequence serializes")
    }

    /// CSV with header `index,numerator,denominator,is_integer`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,numerator,denominator,is_integer\n");
        for (j, v) in self.iter() {
            let (n, d, int) = v.parts();
            out.push_str(&format!("{j},{},{},{int}\n", csv_field(&n), csv_field(&d)));
        }
        out
    }

    pub fn from_json(src: &str) -> Result<Self, ReductionError> {
        let doc: SequenceJson =
            serde_json::from_str(src).map_err(|e| ReductionError::Format(e.to_string()))?;
        let pairs: Vec<(i64, String, String)> = doc
            .terms
            .into_iter()
            .map(|t| (t.index, t.numerator, t.denominator))
            .collect();
        Self::from_parts(pairs)
    }

    pub fn from_csv(src: &str) -> Result<Self, ReductionError> {
        let mut lines = src.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "index,numerator,denominator,is_integer" => {}
            other => return Err(ReductionError::Format(format!("unexpected header {other:?}"))),
        }
        let pairs = lines
            .map(|line| {
                let fields = split_csv(line);
                if fields.len() != 4 {
                    return Err(ReductionError::Format(format!("expected 4 fields in {line:?}")));
                }
                let j = fields[0]
                    .parse()
                    .map_err(|_| ReductionError::Format(format!("bad index {:?}", fields[0])))?;
                Ok((j, fields[1].clone(), fields[2].clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(pairs)
    }

    fn from_parts(pairs: Vec<(i64, String, String)>) -> Result<Self, ReductionError> {
        let start = pairs.first().map_or(0, |p| p.0);
        let mut terms = Vec::with_capacity(pairs.len());
        for (i, (j, n, d)) in pairs.into_iter().enumerate() {
            if j != start + i as i64 {
                return Err(ReductionError::Format(format!("index {j} breaks contiguity")));
            }
            let parse = |s: &str| V::parse_value(s).map_err(|e| ReductionError::Format(e.to_string()));
            let v = parse(&n)?
                .checked_div(&parse(&d)?)
                .ok_or_else(|| ReductionError::Format(format!("zero denominator at index {j}")))?;
            terms.push(v);
        }
        Ok(Self { start, terms })
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn split_csv(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => quoted = !quoted,
            (',', false) => out.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out
}

fn check_init<V>(init: &[V], expected: usize) -> Result<(), ReductionError> {
    if init.len() != expected {
        return Err(ReductionError::InitLength {
            expected,
            got: init.len(),
        });
    }
    Ok(())
}

/// Iterates `a[j+order] = step(window)` from `init` (indices `start..`)
/// until `len` terms exist.
fn iterate<V: Scalar>(
    start: i64,
    init: &[V],
    len: usize,
    step: impl Fn(i64, &[V]) -> Result<V, ReductionError>,
) -> Result<Sequence<V>, ReductionError> {
    let order = init.len();
    let mut terms = init.to_vec();
    while terms.len() < len {
        let j = terms.len() - order;
        let next = step(start + j as i64, &terms[j..])?;
        terms.push(next);
    }
    terms.truncate(len.max(order));
    Ok(Sequence { start, terms })
}

/// `a[j+2K+M] a[j] = a[j+M] a[j+2K] + a[j+M+K] + a[j+K]` from
/// `a[0..2K+M]`, up to `len` terms.
pub fn iterate_generalized_hh<V: Scalar>(
    spec: ReductionSpec,
    init: &[V],
    len: usize,
) -> Result<Sequence<V>, ReductionError> {
    check_init(init, spec.order())?;
    let (k, m) = (spec.k as usize, spec.m as usize);
    iterate(0, init, len, |j, w| {
        let num = w[m].mul(&w[2 * k]).add(&w[m + k]).add(&w[k]);
        num.checked_div(&w[0]).ok_or(ReductionError::Pole {
            index: j + spec.order() as i64,
        })
    })
}

/// `a[n+2k+1] a[n] = a[n+2k] a[n+1] + a[n+k] + a[n+k+1]`, the reduction
/// with `K = k`, `M = 1`.
pub fn heideman_hogan<V: Scalar>(k: i64, init: &[V], len: usize) -> Result<Sequence<V>, ReductionError> {
    iterate_generalized_hh(ReductionSpec::new(k, 1)?, init, len)
}

/// The constant `K_lin` of `a[n+6k] - K_lin (a[n+4k] - a[n+2k]) - a[n] = 0`,
/// solved on the first window and verified on every other one.
pub fn hh_linear_constant<V: Scalar>(k: i64, seq: &Sequence<V>) -> Result<V, ReductionError> {
    let k = k as usize;
    if k == 0 || seq.len() < 6 * k + 2 {
        return Err(ReductionError::InsufficientData(format!(
            "{} terms; need at least {}",
            seq.len(),
            6 * k + 2
        )));
    }
    let t = &seq.terms;
    let windows: Vec<Vec<V>> = (0..t.len() - 6 * k)
        .map(|n| vec![t[n].clone(), t[n + 4 * k].sub(&t[n + 2 * k]).neg(), t[n + 6 * k].clone()])
        .collect();
    let labels: Vec<String> = (0..windows.len()).map(|n| format!("n={}", seq.start + n as i64)).collect();
    let sig = [Coef::Fixed(-1), Coef::Free, Coef::Fixed(1)];
    match solve_shared(&windows, &sig, &labels) {
        Ok((c, _)) => Ok(c[1].clone()),
        Err(LinError::Inconsistent { window }) => Err(ReductionError::Inconsistent(format!(
            "relation fails at {window}"
        ))),
        Err(LinError::SingularSystem) => Err(ReductionError::Inconsistent(
            "first window does not determine the constant".into(),
        )),
        Err(e) => Err(e.into()),
    }
}

/// `2k^2 + 8k + 4`, the value of `K_lin` for all-ones initial data.
pub fn hh_linear_constant_ones(k: i64) -> i64 {
    2 * k * k + 8 * k + 4
}

/// `a[n+1] a[n-3] = a[n] a[n-2] + a[n-1]` from `a[0..4]`.
pub fn dana_scott<V: Scalar>(init: &[V], len: usize) -> Result<Sequence<V>, ReductionError> {
    check_init(init, 4)?;
    iterate(0, init, len, |j, w| {
        let num = w[3].mul(&w[1]).add(&w[2]);
        num.checked_div(&w[0]).ok_or(ReductionError::Pole { index: j + 4 })
    })
}

/// The reduced frieze map from `a[1..=4]`:
///
/// `a[j+4] = (a[j] a[j+3]^2 + a[j+2]^3 + a[j+1] a[j+3] - 2 a[j+1] a[j+2] a[j+3] - a[j+2]^2)
///           / (a[j+2] a[j] - a[j+1]^2)`.
pub fn reduced_frieze_iterate<V: Scalar>(init: &[V], len: usize) -> Result<Sequence<V>, ReductionError> {
    check_init(init, 4)?;
    iterate(1, init, len, |j, w| {
        let num = w[0]
            .mul(&w[3])
            .mul(&w[3])
            .add(&w[2].mul(&w[2]).mul(&w[2]))
            .add(&w[1].mul(&w[3]))
            .sub(&V::from_i64(2).mul(&w[1]).mul(&w[2]).mul(&w[3]))
            .sub(&w[2].mul(&w[2]));
        let den = w[2].mul(&w[0]).sub(&w[1].mul(&w[1]));
        num.checked_div(&den)
            .ok_or(ReductionError::SingularDenominator { step: j, index: j + 4 })
    })
}

/// `a[j+d] = c_1 a[j+d-1] + ... + c_d a[j]` on every window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantRecurrence<V: fmt::Display> {
    pub order: usize,
    #[serde(serialize_with = "as_display_vec")]
    pub coefficients: Vec<V>,
    pub windows_checked: usize,
}

impl<V: Scalar> ConstantRecurrence<V> {
    /// Coefficients of `sum_i w_i a[j+i] = 0` with `w_d = 1`, lowest index first.
    pub fn relation(&self) -> Vec<V> {
        let mut w: Vec<V> = self.coefficients.iter().rev().map(Scalar::neg).collect();
        w.push(V::one());
        w
    }

    pub fn holds_on(&self, seq: &Sequence<V>) -> bool {
        let w = self.relation();
        seq.terms.windows(w.len()).all(|win| {
            win.iter()
                .zip(&w)
                .fold(V::zero(), |acc, (x, c)| acc.add(&x.mul(c)))
                .is_zero()
        })
    }
}

/// Smallest `d <= max_order` admitting a constant-coefficient recurrence
/// on every window of `seq`, by exact kernel computation on the window
/// matrix. Orders with fewer than `d + 2` windows are not tested.
pub fn constant_recurrence_finder<V: Scalar>(
    seq: &Sequence<V>,
    max_order: usize,
) -> Option<ConstantRecurrence<V>> {
    let t = &seq.terms;
    for d in 1..=max_order {
        if t.len() < 2 * d + 2 {
            break;
        }
        let rows: Vec<Vec<V>> = t.windows(d + 1).map(<[V]>::to_vec).collect();
        let Some(v) = linalg::kernel(&rows, d + 1)
            .into_iter()
            .find(|v| !v[d].is_zero())
        else {
            continue;
        };
        let lead = v[d].clone();
        let coefficients = (1..=d)
            .map(|i| v[d - i].checked_div(&lead).expect("nonzero").neg())
            .collect();
        return Some(ConstantRecurrence {
            order: d,
            coefficients,
            windows_checked: rows.len(),
        });
    }
    None
}

/// The lattice `x[n,t] = a[nK+tM]` on `0..=n_max` by `0..=t_max`.
pub fn reduction_lattice<V: Scalar>(
    spec: ReductionSpec,
    seq: &Sequence<V>,
    n_max: i64,
    t_max: i64,
) -> Result<LatticeGrid<V>, ReductionError> {
    let mut values = BTreeMap::new();
    for t in 0..=t_max {
        for n in 0..=n_max {
            values.insert(site(n, t), seq.at(spec.index(n, t))?.clone());
        }
    }
    Ok(LatticeGrid::from_values(
        EquationSpec::Hh2d,
        InitialFrame::l_frame(n_max, t_max),
        values,
    ))
}

/// Seed values for an L-frame, `x[m,0] = a[mK]` and `x[0,s], x[1,s]` from
/// the reduction, so that lattice evolution can be compared with the
/// reduced sequence.
pub fn constrained_seed<V: Scalar>(
    spec: ReductionSpec,
    seq: &Sequence<V>,
    frame: &InitialFrame,
) -> Result<BTreeMap<SitePos, V>, ReductionError> {
    frame
        .seed_sites(&EquationSpec::Hh2d)
        .into_iter()
        .map(|s| Ok((s, seq.at(spec.index(s.n, s.t))?.clone())))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub k: i64,
    pub m: i64,
    pub n_max: i64,
    pub t_max: i64,
    pub sites_checked: usize,
    pub consistent: bool,
    pub first_violation: Option<SitePos>,
}

/// Checks the two-dimensional law at every interior site of the reduced
/// lattice.
pub fn reduction_consistency<V: Scalar>(
    spec: ReductionSpec,
    seq: &Sequence<V>,
    n_max: i64,
    t_max: i64,
) -> Result<ConsistencyReport, ReductionError> {
    let grid = reduction_lattice(spec, seq, n_max, t_max)?;
    let violations = grid.law_violations();
    Ok(ConsistencyReport {
        k: spec.k,
        m: spec.m,
        n_max,
        t_max,
        sites_checked: grid.law_checkable_sites(),
        consistent: violations.is_empty(),
        first_violation: violations.into_iter().min(),
    })
}

/// Outcome of one family of assertions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            instances: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn holds(&self) -> bool {
        self.instances > 0 && self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TCoefficients<V: fmt::Display> {
    pub t: i64,
    #[serde(serialize_with = "as_display")]
    pub gamma: V,
    #[serde(serialize_with = "as_display")]
    pub delta: V,
    #[serde(serialize_with = "as_display")]
    pub epsilon: V,
    #[serde(serialize_with = "as_display")]
    pub gamma_odd: V,
    #[serde(serialize_with = "as_display")]
    pub delta_odd: V,
    #[serde(serialize_with = "as_display")]
    pub epsilon_odd: V,
}

impl<V: Scalar> TCoefficients<V> {
    fn even(&self) -> [&V; 3] {
        [&self.gamma, &self.delta, &self.epsilon]
    }

    fn odd(&self) -> [&V; 3] {
        [&self.gamma_odd, &self.delta_odd, &self.epsilon_odd]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicityReport<V: fmt::Display> {
    pub k: i64,
    pub m: i64,
    #[serde(serialize_with = "as_display_vec")]
    pub alpha: Vec<V>,
    #[serde(serialize_with = "as_display_vec")]
    pub beta: Vec<V>,
    pub t_coefficients: Vec<TCoefficients<V>>,
    /// Reduced coefficients `(alpha~, beta~, gamma~, delta~, epsilon~)` at `j = 0, 1, ...`.
    pub tilde: Vec<TildeCoefficients<V>>,
    pub checks: Vec<Check>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TildeCoefficients<V: fmt::Display> {
    pub j: i64,
    #[serde(serialize_with = "as_display")]
    pub alpha: V,
    #[serde(serialize_with = "as_display")]
    pub beta: V,
    #[serde(serialize_with = "as_display")]
    pub gamma: V,
    #[serde(serialize_with = "as_display")]
    pub delta: V,
    #[serde(serialize_with = "as_display")]
    pub epsilon: V,
}

/// Periodicity of the linearization coefficients on the reduced lattice
/// and the well-definedness, linear equations and closed forms of the
/// reduced coefficients.
///
/// The along-`n` coefficients are extracted for `n = 0..=2M+1`, the
/// along-`t` coefficients for `t = 0..=2K+1` on both column parities, and
/// the reduced coefficients are compared for `j = 0..=2KM+2K+M`.
pub fn periodicity_check<V: Scalar>(
    spec: ReductionSpec,
    init: &[V],
) -> Result<PeriodicityReport<V>, ReductionError> {
    let (k, m) = (spec.k, spec.m);
    let n_alpha = 2 * m + 1;
    let t_gamma = 2 * k + 1;
    let n_max = (n_alpha + 6).max(10);
    let t_max = t_gamma + 3 + 1;
    let j_check = 2 * k * m + 2 * k + m;
    let len = (spec.index(n_max, t_max) + 1).max(j_check + 7 * k + 1).max(j_check + 3 * m + 1);
    let seq = iterate_generalized_hh(spec, init, len as usize)?;
    let grid = reduction_lattice(spec, &seq, n_max, t_max)?;
    let lin = Linearizer::new(&grid);

    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for n in 0..=n_alpha {
        let r = lin.along_n(n)?;
        alpha.push(r.coefficients[2].clone());
        beta.push(r.coefficients[1].clone());
    }
    let mut tc = Vec::new();
    for t in 0..=t_gamma {
        let e = lin.along_t(t, LineParity::Even)?.coefficients;
        let o = lin.along_t(t, LineParity::Odd)?.coefficients;
        tc.push(TCoefficients {
            t,
            gamma: e[2].clone(),
            delta: e[1].clone(),
            epsilon: e[0].clone(),
            gamma_odd: o[2].clone(),
            delta_odd: o[1].clone(),
            epsilon_odd: o[0].clone(),
        });
    }

    let mut checks = Vec::new();

    let mut c = Check::new("alpha(n+M) = alpha(n), beta(n+M) = beta(n)");
    for n in 0..=n_alpha - m {
        let (i, s) = (n as usize, (n + m) as usize);
        c.record(alpha[s] == alpha[i] && beta[s] == beta[i], || format!("n={n}"));
    }
    checks.push(c);

    let odd_m = m % 2 == 1;
    let mut c = Check::new(if odd_m {
        "odd M: gamma(t+K) = gamma'(t), gamma'(t+K) = gamma(t) (and delta, epsilon)"
    } else {
        "even M: gamma(t+K) = gamma(t), gamma'(t+K) = gamma'(t) (and delta, epsilon)"
    });
    for t in 0..=t_gamma - k {
        let (a, b) = (&tc[t as usize], &tc[(t + k) as usize]);
        let ok = if odd_m {
            b.even() == a.odd() && b.odd() == a.even()
        } else {
            b.even() == a.even() && b.odd() == a.odd()
        };
        c.record(ok, || format!("t={t}"));
    }
    checks.push(c);

    // reduced coefficients, with every decomposition j = nK + tM in range
    let mut defined = Check::new("reduced coefficients agree across decompositions j = nK + tM");
    let mut tilde = Vec::new();
    for j in 0..=j_check + k {
        let ab: Vec<(&V, &V)> = (0..=n_alpha)
            .filter(|n| (j - n * k).rem_euclid(m) == 0)
            .map(|n| (&alpha[n as usize], &beta[n as usize]))
            .collect();
        let gde: Vec<[&V; 3]> = (0..=t_gamma)
            .filter(|t| (j - t * m).rem_euclid(k) == 0)
            .map(|t| {
                let n = (j - t * m).div_euclid(k);
                let c = &tc[t as usize];
                if n.rem_euclid(2) == 0 {
                    c.even()
                } else {
                    c.odd()
                }
            })
            .collect();
        let ok = ab.windows(2).all(|w| w[0] == w[1]) && gde.windows(2).all(|w| w[0] == w[1]);
        defined.record(ok && !ab.is_empty() && !gde.is_empty(), || format!("j={j}"));
        let (Some(&(a, b)), Some(g)) = (ab.first(), gde.first()) else {
            continue;
        };
        tilde.push(TildeCoefficients {
            j,
            alpha: a.clone(),
            beta: b.clone(),
            gamma: g[0].clone(),
            delta: g[1].clone(),
            epsilon: g[2].clone(),
        });
    }
    checks.push(defined);

    let a = |j: i64| seq.at(j).cloned();
    let mut lin_n = Check::new("a[j+6K] + alpha~(j) a[j+4K] + beta~(j) a[j+2K] - a[j] = 0");
    let mut lin_t = Check::new("a[j+3M] + gamma~(j) a[j+2M] + delta~(j) a[j+M] + epsilon~(j) a[j] = 0");
    let mut closed = Check::new("alpha~, beta~ match the closed forms in a[j + iK]");
    let mut shift = Check::new("alpha~(j) = -beta~(j+K)");
    let mut period = Check::new("gamma~, delta~, epsilon~ have period 2K");
    for c in tilde.iter().filter(|c| c.j <= j_check) {
        let j = c.j;
        let r = a(j + 6 * k)?
            .add(&c.alpha.mul(&a(j + 4 * k)?))
            .add(&c.beta.mul(&a(j + 2 * k)?))
            .sub(&a(j)?);
        lin_n.record(r.is_zero(), || format!("j={j}"));
        let r = a(j + 3 * m)?
            .add(&c.gamma.mul(&a(j + 2 * m)?))
            .add(&c.delta.mul(&a(j + m)?))
            .add(&c.epsilon.mul(&a(j)?));
        lin_t.record(r.is_zero(), || format!("j={j}"));
        let b: Vec<V> = (0..7).map(|i| a(j + i * k)).collect::<Result<_, _>>()?;
        let (ca, cb) = alpha_beta_closed_form(&b, 0)?;
        closed.record(ca == c.alpha && cb == c.beta, || format!("j={j}"));
        if let Some(next) = tilde.iter().find(|d| d.j == j + k) {
            shift.record(c.alpha == next.beta.neg(), || format!("j={j}"));
        }
        if let Some(next) = tilde.iter().find(|d| d.j == j + 2 * k) {
            let ok = (&c.gamma, &c.delta, &c.epsilon) == (&next.gamma, &next.delta, &next.epsilon);
            period.record(ok, || format!("j={j}"));
        }
    }
    checks.extend([lin_n, lin_t, closed, shift, period]);

    let holds = checks.iter().all(Check::holds);
    Ok(PeriodicityReport {
        k,
        m,
        alpha,
        beta,
        t_coefficients: tc,
        tilde,
        checks,
        holds,
    })
}
