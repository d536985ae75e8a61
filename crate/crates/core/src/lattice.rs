//! Seeding and evolving lattice grids.
//!
//! A grid holds values on sites `(n, t)`. The four laws share one engine:
//! each law declares the stencil of a target site, and the engine computes
//! sites in lexicographic `(t, n)` order (or level by level in a wavefront
//! schedule), checking that every stencil site is known or scheduled.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{RationalFunction, VariableId};
use crate::determinants::det_rows;
use crate::par::{self, Schedule};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("division by zero while computing site {site}")]
    Pole { site: SitePos },
    #[error("vanishing cofactor while solving the corner at site {site}")]
    SingularStep { site: SitePos },
    #[error("site {site} depends on {missing}, which is neither known nor in the region")]
    DependencyUnsatisfiable { site: SitePos, missing: SitePos },
    #[error("seed values do not match the frame: {0}")]
    FrameMismatch(String),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid law: {0}")]
    InvalidSpec(String),
    #[error("site {0} is not in the grid")]
    MissingSite(SitePos),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A lattice site. Ordered by `(t, n)`, the evolution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SitePos {
    pub n: i64,
    pub t: i64,
}

pub const fn site(n: i64, t: i64) -> SitePos {
    SitePos { n, t }
}

impl SitePos {
    pub const fn offset(self, dn: i64, dt: i64) -> SitePos {
        site(self.n + dn, self.t + dt)
    }

    /// The generator placed at this site in symbolic mode.
    pub fn variable(self) -> VariableId {
        VariableId::site(self.n, self.t)
    }
}

impl Ord for SitePos {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.t, self.n).cmp(&(other.t, other.n))
    }
}

impl PartialOrd for SitePos {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SitePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.t)
    }
}

/// The evolution law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EquationSpec {
    /// `x[n+2,t+1] x[n,t] = x[n,t+1] x[n+2,t] + x[n+1,t+1] + x[n+1,t]`.
    Hh2d,
    /// `x[n,t] x[n+2,t+2] = x[n+2,t] x[n,t+2] + x[n+1,t+1]`.
    TwoFrieze,
    /// `F_{k+1}(n,t) = F_k(n+1,t+1)`.
    DetShift1 { k: u32 },
    /// `F_{k+2}(n,t) = F_k(n+2,t+2)`.
    DetShift2 { k: u32 },
}

impl EquationSpec {
    pub fn validate(&self) -> Result<(), LatticeError> {
        match self {
            EquationSpec::DetShift1 { k: 0 } | EquationSpec::DetShift2 { k: 0 } => {
                Err(LatticeError::InvalidSpec("determinant laws need k >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Short name used on the command line and in snapshots.
    pub fn name(&self) -> &'static str {
        match self {
            EquationSpec::Hh2d => "hh2d",
            EquationSpec::TwoFrieze => "frieze",
            EquationSpec::DetShift1 { .. } => "det1",
            EquationSpec::DetShift2 { .. } => "det2",
        }
    }

    pub fn k(&self) -> Option<u32> {
        match *self {
            EquationSpec::DetShift1 { k } | EquationSpec::DetShift2 { k } => Some(k),
            _ => None,
        }
    }

    /// Offset from the lower-left stencil site to the target site.
    pub fn reach(&self) -> (i64, i64) {
        match *self {
            EquationSpec::Hh2d => (2, 1),
            EquationSpec::TwoFrieze => (2, 2),
            EquationSpec::DetShift1 { k } => (2 * k as i64, 2 * k as i64),
            EquationSpec::DetShift2 { k } => (2 * k as i64 + 2, 2 * k as i64 + 2),
        }
    }

    /// Seed rows and seed columns a staircase frame needs.
    pub fn frame_width(&self) -> (i64, i64) {
        let (dn, dt) = self.reach();
        (dt, dn)
    }

    /// Stencil sites of `target`, excluding the target itself.
    pub fn stencil(&self, target: SitePos) -> Vec<SitePos> {
        let SitePos { n, t } = target;
        match *self {
            EquationSpec::Hh2d => vec![
                site(n - 2, t - 1),
                site(n - 1, t - 1),
                site(n, t - 1),
                site(n - 2, t),
                site(n - 1, t),
            ],
            EquationSpec::TwoFrieze => vec![
                site(n - 2, t - 2),
                site(n, t - 2),
                site(n - 1, t - 1),
                site(n - 2, t),
            ],
            EquationSpec::DetShift1 { k } => {
                let k = k as i64;
                let base = target.offset(-2 * k, -2 * k);
                det_stencil(base, k + 1, base.offset(1, 1), k)
            }
            EquationSpec::DetShift2 { k } => {
                let k = k as i64;
                let base = target.offset(-2 * k - 2, -2 * k - 2);
                det_stencil(base, k + 2, base.offset(2, 2), k)
            }
        }
    }
}

fn f_sites(base: SitePos, size: i64) -> impl Iterator<Item = SitePos> {
    (0..size).flat_map(move |i| (0..size).map(move |j| base.offset(2 * i, 2 * j)))
}

fn det_stencil(base: SitePos, size: i64, rhs_base: SitePos, rhs_size: i64) -> Vec<SitePos> {
    let corner = base.offset(2 * (size - 1), 2 * (size - 1));
    let set: BTreeSet<SitePos> = f_sites(base, size)
        .filter(|&s| s != corner)
        .chain(f_sites(rhs_base, rhs_size))
        .collect();
    set.into_iter().collect()
}

impl fmt::Display for EquationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k() {
            Some(k) => write!(f, "{}:{}", self.name(), k),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for EquationSpec {
    type Err = LatticeError;

    /// `hh2d`, `frieze`, `det1:K` or `det2:K`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, k) = match s.split_once(':') {
            Some((a, b)) => {
                let k = b
                    .parse()
                    .map_err(|_| LatticeError::Parse(format!("bad k in {s:?}")))?;
                (a, Some(k))
            }
            None => (s, None),
        };
        let spec = match (name, k) {
            ("hh2d", None) => EquationSpec::Hh2d,
            ("frieze", None) => EquationSpec::TwoFrieze,
            ("det1", Some(k)) => EquationSpec::DetShift1 { k },
            ("det2", Some(k)) => EquationSpec::DetShift2 { k },
            _ => return Err(LatticeError::Parse(format!("unknown law {s:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Which checkerboard class of sites a grid lives on.
///
/// The frieze-type laws only couple sites with equal parity of `n + t`, so
/// each class evolves independently of the other.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Sublattice {
    #[default]
    All,
    /// `n + t` even.
    Even,
    /// `n + t` odd.
    Odd,
}

impl Sublattice {
    pub fn contains(self, s: SitePos) -> bool {
        match self {
            Sublattice::All => true,
            Sublattice::Even => (s.n + s.t).rem_euclid(2) == 0,
            Sublattice::Odd => (s.n + s.t).rem_euclid(2) == 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sublattice::All => "all",
            Sublattice::Even => "even",
            Sublattice::Odd => "odd",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameShape {
    /// Row `t = 0` plus columns `n = 0, 1`.
    LFrame,
    /// As many leading rows and columns as the law's reach requires.
    Staircase,
    /// Rows `t < rows` plus the leading columns the law needs.
    Strip { rows: i64 },
}

/// Description of the seeded region inside the rectangle `[0, N] x [0, T]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InitialFrame {
    pub shape: FrameShape,
    pub n_max: i64,
    pub t_max: i64,
    pub sublattice: Sublattice,
}

impl InitialFrame {
    pub fn l_frame(n_max: i64, t_max: i64) -> Self {
        Self {
            shape: FrameShape::LFrame,
            n_max,
            t_max,
            sublattice: Sublattice::All,
        }
    }

    pub fn staircase(n_max: i64, t_max: i64, sublattice: Sublattice) -> Self {
        Self {
            shape: FrameShape::Staircase,
            n_max,
            t_max,
            sublattice,
        }
    }

    pub fn strip(rows: i64, n_max: i64, t_max: i64, sublattice: Sublattice) -> Self {
        Self {
            shape: FrameShape::Strip { rows },
            n_max,
            t_max,
            sublattice,
        }
    }

    /// Seed rows and columns under `spec`.
    fn widths(&self, spec: &EquationSpec) -> (i64, i64) {
        let (rows, cols) = spec.frame_width();
        match self.shape {
            FrameShape::LFrame => (1, 2),
            FrameShape::Staircase => (rows, cols),
            FrameShape::Strip { rows } => (rows, cols),
        }
    }

    /// The whole rectangle `[0, N] x [0, T]`.
    pub fn region(&self) -> Region {
        Region::new(0, self.n_max, 0, self.t_max)
    }

    /// Seed sites in evolution order.
    pub fn seed_sites(&self, spec: &EquationSpec) -> Vec<SitePos> {
        let (rows, cols) = self.widths(spec);
        self.region()
            .sites(self.sublattice)
            .filter(|s| s.t < rows || s.n < cols)
            .collect()
    }

    /// Checks that every non-seed site of the rectangle has its whole
    /// stencil inside the rectangle, so the evolution can reach it.
    pub fn check(&self, spec: &EquationSpec) -> Result<(), LatticeError> {
        spec.validate()?;
        if self.n_max < 0 || self.t_max < 0 {
            return Err(LatticeError::InvalidFrame("negative extent".into()));
        }
        let (rows, cols) = self.widths(spec);
        let region = self.region();
        for s in region.sites(self.sublattice) {
            if s.t < rows || s.n < cols {
                continue;
            }
            if let Some(d) = spec.stencil(s).into_iter().find(|d| !region.contains(*d)) {
                return Err(LatticeError::InvalidFrame(format!(
                    "{self} cannot evolve {spec}: site {s} needs {d} outside the frame"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for InitialFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape {
            FrameShape::LFrame => write!(f, "L")?,
            FrameShape::Staircase => write!(f, "S")?,
            FrameShape::Strip { rows } => write!(f, "strip{rows}")?,
        }
        write!(f, ":{}x{}", self.n_max, self.t_max)?;
        if self.sublattice != Sublattice::All {
            write!(f, ":{}", self.sublattice.name())?;
        }
        Ok(())
    }
}

impl FromStr for InitialFrame {
    type Err = LatticeError;

    /// `L:NxT`, `S:NxT[:even|odd|all]` or `stripD:NxT[:even|odd|all]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LatticeError::Parse(format!("bad frame {s:?}"));
        let mut parts = s.split(':');
        let shape = parts.next().ok_or_else(bad)?;
        let dims = parts.next().ok_or_else(bad)?;
        let sublattice = match parts.next() {
            None | Some("all") => Sublattice::All,
            Some("even") => Sublattice::Even,
            Some("odd") => Sublattice::Odd,
            Some(_) => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        let (n, t) = dims.split_once('x').ok_or_else(bad)?;
        let n_max: i64 = n.parse().map_err(|_| bad())?;
        let t_max: i64 = t.parse().map_err(|_| bad())?;
        let shape = match shape {
            "L" => FrameShape::LFrame,
            "S" => FrameShape::Staircase,
            other => match other.strip_prefix("strip") {
                Some(d) => FrameShape::Strip {
                    rows: d.parse().map_err(|_| bad())?,
                },
                None => return Err(bad()),
            },
        };
        Ok(Self {
            shape,
            n_max,
            t_max,
            sublattice,
        })
    }
}

/// Closed rectangle of sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub n_min: i64,
    pub n_max: i64,
    pub t_min: i64,
    pub t_max: i64,
}

impl Region {
    pub fn new(n_min: i64, n_max: i64, t_min: i64, t_max: i64) -> Self {
        Self {
            n_min,
            n_max,
            t_min,
            t_max,
        }
    }

    pub fn contains(&self, s: SitePos) -> bool {
        (self.n_min..=self.n_max).contains(&s.n) && (self.t_min..=self.t_max).contains(&s.t)
    }

    /// Sites of the class in `(t, n)` order.
    pub fn sites(&self, sub: Sublattice) -> impl Iterator<Item = SitePos> {
        let r = *self;
        (r.t_min..=r.t_max)
            .flat_map(move |t| (r.n_min..=r.n_max).map(move |n| site(n, t)))
            .filter(move |&s| sub.contains(s))
    }
}

/// Numeric seed choices.
#[derive(Clone, Debug, PartialEq)]
pub enum SeedValues {
    Ones,
    /// Positive rationals `p/q` with `1 <= p, q <= 9` from a seeded generator.
    Random(u64),
    /// Values in seed-site order; the count must match the frame.
    Explicit(Vec<Rational>),
}

/// Random positive rational, reproducible from the generator state.
pub fn random_positive(rng: &mut ChaCha8Rng) -> Rational {
    let p: i64 = rng.gen_range(1..=9);
    let q: i64 = rng.gen_range(1..=9);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Assigns numeric values to the seed sites of `frame`.
pub fn numeric_seed(
    frame: &InitialFrame,
    spec: &EquationSpec,
    values: &SeedValues,
) -> Result<BTreeMap<SitePos, Rational>, LatticeError> {
    let sites = frame.seed_sites(spec);
    Ok(match values {
        SeedValues::Ones => sites.into_iter().map(|s| (s, <Rational as Scalar>::one())).collect(),
        SeedValues::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            sites
                .into_iter()
                .map(|s| (s, random_positive(&mut rng)))
                .collect()
        }
        SeedValues::Explicit(v) => {
            if v.len() != sites.len() {
                return Err(LatticeError::FrameMismatch(format!(
                    "frame {frame} has {} seed sites, got {} values",
                    sites.len(),
                    v.len()
                )));
            }
            sites.into_iter().zip(v.iter().cloned()).collect()
        }
    })
}

/// Values on lattice sites together with the law and frame that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeGrid<V> {
    spec: EquationSpec,
    frame: InitialFrame,
    values: BTreeMap<SitePos, V>,
}

impl LatticeGrid<RationalFunction> {
    /// One generator `x[n,t]` per seed site.
    pub fn seed_symbolic(frame: InitialFrame, spec: EquationSpec) -> Result<Self, LatticeError> {
        frame.check(&spec)?;
        let values = frame
            .seed_sites(&spec)
            .into_iter()
            .map(|s| (s, RationalFunction::var(s.variable())))
            .collect();
        Ok(Self {
            spec,
            frame,
            values,
        })
    }
}

impl LatticeGrid<Rational> {
    /// Numeric seed; `values` must cover every seed site of the frame.
    /// Values off the seed sites are rejected as well.
    pub fn seed_numeric(
        frame: InitialFrame,
        spec: EquationSpec,
        values: &BTreeMap<SitePos, Rational>,
    ) -> Result<Self, LatticeError> {
        frame.check(&spec)?;
        let seeds = frame.seed_sites(&spec);
        if let Some(s) = seeds.iter().find(|s| !values.contains_key(s)) {
            return Err(LatticeError::FrameMismatch(format!("no value for seed site {s}")));
        }
        if values.len() != seeds.len() {
            return Err(LatticeError::FrameMismatch(format!(
                "{} values for {} seed sites",
                values.len(),
                seeds.len()
            )));
        }
        Ok(Self {
            spec,
            frame,
            values: values.clone(),
        })
    }

    pub fn seed_with(
        frame: InitialFrame,
        spec: EquationSpec,
        seed: &SeedValues,
    ) -> Result<Self, LatticeError> {
        frame.check(&spec)?;
        Self::seed_numeric(frame, spec, &numeric_seed(&frame, &spec, seed)?)
    }
}

impl<V: Scalar> LatticeGrid<V> {
    /// A grid from explicit values, without frame checks. Used for
    /// assignments that are not produced by evolution, such as reductions.
    pub fn from_values(spec: EquationSpec, frame: InitialFrame, values: BTreeMap<SitePos, V>) -> Self {
        Self {
            spec,
            frame,
            values,
        }
    }

    pub fn spec(&self) -> &EquationSpec {
        &self.spec
    }

    pub fn frame(&self) -> &InitialFrame {
        &self.frame
    }

    pub fn values(&self) -> &BTreeMap<SitePos, V> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, s: SitePos) -> Option<&V> {
        self.values.get(&s)
    }

    pub fn value(&self, n: i64, t: i64) -> Result<&V, LatticeError> {
        self.values
            .get(&site(n, t))
            .ok_or(LatticeError::MissingSite(site(n, t)))
    }

    /// Evolves every site of the frame rectangle.
    pub fn evolve_all(&mut self, schedule: Schedule) -> Result<(), LatticeError> {
        let region = self.frame.region();
        self.evolve(region, schedule)
    }

    /// Fills every site of `region` on the grid's sublattice.
    ///
    /// On error the sites computed before the failure stay in the grid.
    pub fn evolve(&mut self, region: Region, schedule: Schedule) -> Result<(), LatticeError> {
        self.spec.validate()?;
        let targets: Vec<SitePos> = region
            .sites(self.frame.sublattice)
            .filter(|s| !self.values.contains_key(s))
            .collect();
        let target_set: BTreeSet<SitePos> = targets.iter().copied().collect();
        let mut level: HashMap<SitePos, usize> = HashMap::new();
        for &s in &targets {
            let mut l = 0;
            for d in self.spec.stencil(s) {
                if self.values.contains_key(&d) {
                    continue;
                }
                if !target_set.contains(&d) {
                    return Err(LatticeError::DependencyUnsatisfiable { site: s, missing: d });
                }
                l = l.max(level[&d] + 1);
            }
            level.insert(s, l);
        }

        if !schedule.is_parallel() {
            for s in targets {
                let v = compute(&self.spec, s, &self.values)?;
                self.values.insert(s, v);
            }
            return Ok(());
        }

        let depth = level.values().max().map_or(0, |m| m + 1);
        let mut waves: Vec<Vec<SitePos>> = vec![Vec::new(); depth];
        for &s in &targets {
            waves[level[&s]].push(s);
        }
        for wave in waves {
            let spec = self.spec;
            let values = &self.values;
            let results = par::map(schedule, &wave, |&s| compute(&spec, s, values));
            let mut first_err = None;
            let mut done = Vec::with_capacity(wave.len());
            for (s, r) in wave.into_iter().zip(results) {
                match r {
                    Ok(v) => done.push((s, v)),
                    Err(e) => {
                        first_err.get_or_insert(e);
                    }
                }
            }
            self.values.extend(done);
            if let Some(e) = first_err {
                return Err(e);
            }
        }
        Ok(())
    }

    /// Value the law forces at `target` from the values already present.
    pub fn solve_site(&self, target: SitePos) -> Result<V, LatticeError> {
        if let Some(d) = self
            .spec
            .stencil(target)
            .into_iter()
            .find(|d| !self.values.contains_key(d))
        {
            return Err(LatticeError::DependencyUnsatisfiable {
                site: target,
                missing: d,
            });
        }
        compute(&self.spec, target, &self.values)
    }

    /// Defect of the law with `target` as the computed site, or `None`
    /// when some stencil site (or the target) is absent.
    pub fn law_residual(&self, target: SitePos) -> Option<V> {
        let x = |s: SitePos| self.values.get(&s);
        let xt = x(target)?;
        let SitePos { n, t } = target;
        match self.spec {
            EquationSpec::Hh2d => {
                let lhs = xt.mul(x(site(n - 2, t - 1))?);
                let rhs = x(site(n - 2, t))?
                    .mul(x(site(n, t - 1))?)
                    .add(x(site(n - 1, t))?)
                    .add(x(site(n - 1, t - 1))?);
                Some(lhs.sub(&rhs))
            }
            EquationSpec::TwoFrieze => {
                let lhs = xt.mul(x(site(n - 2, t - 2))?);
                let rhs = x(site(n - 2, t))?
                    .mul(x(site(n, t - 2))?)
                    .add(x(site(n - 1, t - 1))?);
                Some(lhs.sub(&rhs))
            }
            EquationSpec::DetShift1 { k } => {
                let k = k as i64;
                let base = target.offset(-2 * k, -2 * k);
                let lhs = det_rows(&f_rows(&self.values, base, k + 1)?);
                let rhs = det_rows(&f_rows(&self.values, base.offset(1, 1), k)?);
                Some(lhs.sub(&rhs))
            }
            EquationSpec::DetShift2 { k } => {
                let k = k as i64;
                let base = target.offset(-2 * k - 2, -2 * k - 2);
                let lhs = det_rows(&f_rows(&self.values, base, k + 2)?);
                let rhs = det_rows(&f_rows(&self.values, base.offset(2, 2), k)?);
                Some(lhs.sub(&rhs))
            }
        }
    }

    /// Sites whose full stencil is present and where the law fails.
    pub fn law_violations(&self) -> Vec<SitePos> {
        self.values
            .keys()
            .filter(|&&s| self.law_residual(s).is_some_and(|r| !r.is_zero()))
            .copied()
            .collect()
    }

    /// Number of sites at which the law could be checked.
    pub fn law_checkable_sites(&self) -> usize {
        self.values
            .keys()
            .filter(|&&s| self.law_residual(s).is_some())
            .count()
    }

    /// Sites whose value is not a Laurent polynomial.
    pub fn non_laurent_sites(&self) -> Vec<SitePos> {
        self.values
            .iter()
            .filter(|(_, v)| !v.is_laurent())
            .map(|(s, _)| *s)
            .collect()
    }

    pub fn is_laurent(&self) -> bool {
        self.values.values().all(Scalar::is_laurent)
    }

    /// Applies `f` to every value.
    pub fn try_map<W, E>(&self, f: impl Fn(&V) -> Result<W, E>) -> Result<LatticeGrid<W>, E> {
        let values = self
            .values
            .iter()
            .map(|(s, v)| Ok((*s, f(v)?)))
            .collect::<Result<_, E>>()?;
        Ok(LatticeGrid {
            spec: self.spec,
            frame: self.frame,
            values,
        })
    }

    /// Line-oriented snapshot: a `#` header, then `n t value` per site.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# law={} frame={} mode={}\n",
            self.spec,
            self.frame,
            V::MODE
        );
        for (s, v) in &self.values {
            out.push_str(&format!("{} {} {}\n", s.n, s.t, v));
        }
        out
    }

    pub fn from_text(src: &str) -> Result<Self, LatticeError> {
        let mut lines = src.lines();
        let header = lines
            .next()
            .and_then(|h| h.strip_prefix('#'))
            .ok_or_else(|| LatticeError::Parse("missing header".into()))?;
        let mut spec = None;
        let mut frame = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("law", v)) => spec = Some(v.parse()?),
                Some(("frame", v)) => frame = Some(v.parse()?),
                Some(("mode", v)) if v != V::MODE => {
                    return Err(LatticeError::Parse(format!("snapshot mode {v} is not {}", V::MODE)))
                }
                _ => {}
            }
        }
        let (spec, frame) = spec
            .zip(frame)
            .ok_or_else(|| LatticeError::Parse("header lacks law or frame".into()))?;
        let mut values = BTreeMap::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut it = line.splitn(3, ' ');
            let bad = || LatticeError::Parse(format!("bad line {line:?}"));
            let n: i64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let t: i64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let v = V::parse_value(it.next().ok_or_else(bad)?)
                .map_err(|e| LatticeError::Parse(e.to_string()))?;
            values.insert(site(n, t), v);
        }
        Ok(Self {
            spec,
            frame,
            values,
        })
    }

    pub fn snapshot(&self) -> GridSnapshot {
        GridSnapshot {
            schema_version: crate::SCHEMA_VERSION,
            law: self.spec.to_string(),
            frame: self.frame.to_string(),
            mode: V::MODE.to_string(),
            laurent: self.is_laurent(),
            sites: self
                .values
                .iter()
                .map(|(s, v)| SiteValue {
                    n: s.n,
                    t: s.t,
                    value: v.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.snapshot()).expect("snapshot serializes")
    }

    pub fn from_snapshot(snap: &GridSnapshot) -> Result<Self, LatticeError> {
        if snap.mode != V::MODE {
            return Err(LatticeError::Parse(format!(
                "snapshot mode {} is not {}",
                snap.mode,
                V::MODE
            )));
        }
        let values = snap
            .sites
            .iter()
            .map(|sv| {
                V::parse_value(&sv.value)
                    .map(|v| (site(sv.n, sv.t), v))
                    .map_err(|e| LatticeError::Parse(e.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            spec: snap.law.parse()?,
            frame: snap.frame.parse()?,
            values,
        })
    }

    pub fn from_json(src: &str) -> Result<Self, LatticeError> {
        let snap: GridSnapshot =
            serde_json::from_str(src).map_err(|e| LatticeError::Parse(e.to_string()))?;
        Self::from_snapshot(&snap)
    }
}

/// JSON form of a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSnapshot {
    pub schema_version: u32,
    pub law: String,
    pub frame: String,
    pub mode: String,
    pub laurent: bool,
    pub sites: Vec<SiteValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteValue {
    pub n: i64,
    pub t: i64,
    pub value: String,
}

/// Rows of the `F` window at `base`: entry `(i, j)` is `x[n+2i, t+2j]`.
fn f_rows<V: Scalar>(values: &BTreeMap<SitePos, V>, base: SitePos, size: i64) -> Option<Vec<Vec<V>>> {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| values.get(&base.offset(2 * i, 2 * j)).cloned())
                .collect()
        })
        .collect()
}

fn compute<V: Scalar>(
    spec: &EquationSpec,
    target: SitePos,
    values: &BTreeMap<SitePos, V>,
) -> Result<V, LatticeError> {
    let x = |s: SitePos| &values[&s];
    let SitePos { n, t } = target;
    let pole = LatticeError::Pole { site: target };
    match *spec {
        EquationSpec::Hh2d => {
            let num = x(site(n - 2, t))
                .mul(x(site(n, t - 1)))
                .add(x(site(n - 1, t)))
                .add(x(site(n - 1, t - 1)));
            num.checked_div(x(site(n - 2, t - 1))).ok_or(pole)
        }
        EquationSpec::TwoFrieze => {
            let num = x(site(n - 2, t))
                .mul(x(site(n, t - 2)))
                .add(x(site(n - 1, t - 1)));
            num.checked_div(x(site(n - 2, t - 2))).ok_or(pole)
        }
        EquationSpec::DetShift1 { k } => {
            let k = k as i64;
            let base = target.offset(-2 * k, -2 * k);
            corner_solve(values, target, base, k + 1, base.offset(1, 1), k)
        }
        EquationSpec::DetShift2 { k } => {
            let k = k as i64;
            let base = target.offset(-2 * k - 2, -2 * k - 2);
            corner_solve(values, target, base, k + 2, base.offset(2, 2), k)
        }
    }
}

/// Solves `det F_size(base) = det F_rhs(rhs_base)` for the corner entry.
///
/// The determinant is affine in the corner entry with slope equal to the
/// leading principal minor of order `size - 1`.
fn corner_solve<V: Scalar>(
    values: &BTreeMap<SitePos, V>,
    target: SitePos,
    base: SitePos,
    size: i64,
    rhs_base: SitePos,
    rhs_size: i64,
) -> Result<V, LatticeError> {
    let get = |s: SitePos| {
        if s == target {
            V::zero()
        } else {
            values[&s].clone()
        }
    };
    let rows: Vec<Vec<V>> = (0..size)
        .map(|i| (0..size).map(|j| get(base.offset(2 * i, 2 * j))).collect())
        .collect();
    let cof_rows: Vec<Vec<V>> = rows[..size as usize - 1]
        .iter()
        .map(|r| r[..size as usize - 1].to_vec())
        .collect();
    let cofactor = det_rows(&cof_rows);
    if cofactor.is_zero() {
        return Err(LatticeError::SingularStep { site: target });
    }
    let rhs_rows: Vec<Vec<V>> = (0..rhs_size)
        .map(|i| {
            (0..rhs_size)
                .map(|j| values[&rhs_base.offset(2 * i, 2 * j)].clone())
                .collect()
        })
        .collect();
    let rhs = det_rows(&rhs_rows);
    let det0 = det_rows(&rows);
    rhs.sub(&det0)
        .checked_div(&cofactor)
        .ok_or(LatticeError::SingularStep { site: target })
}

/// The corner value a determinant law forces at `target`.
pub fn evolve_det_corner<V: Scalar>(grid: &LatticeGrid<V>, target: SitePos) -> Result<V, LatticeError> {
    match grid.spec {
        EquationSpec::DetShift1 { .. } | EquationSpec::DetShift2 { .. } => grid.solve_site(target),
        other => Err(LatticeError::InvalidSpec(format!(
            "{other} is not a determinant law"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ones_hh(n: i64, t: i64) -> LatticeGrid<Rational> {
        let frame = InitialFrame::l_frame(n, t);
        let mut g = LatticeGrid::seed_with(frame, EquationSpec::Hh2d, &SeedValues::Ones).unwrap();
        g.evolve_all(Schedule::Sequential).unwrap();
        g
    }

    #[test]
    fn l_frame_seed_count() {
        let frame = InitialFrame::l_frame(6, 3);
        assert_eq!(frame.seed_sites(&EquationSpec::Hh2d).len(), 13);
    }

    #[test]
    fn hh_ones_values() {
        let g = ones_hh(6, 3);
        let v = |n, t| g.value(n, t).unwrap().clone();
        assert_eq!(v(2, 1), rat(3, 1));
        assert_eq!(v(3, 1), rat(5, 1));
        assert_eq!(v(4, 1), rat(9, 1));
        assert_eq!(v(2, 2), rat(5, 1));
        assert_eq!(v(3, 2), rat(13, 1));
        assert_eq!(v(4, 2), rat(21, 1));
        assert!(g.law_violations().is_empty());
    }

    #[test]
    fn frieze_one_step() {
        let frame = InitialFrame::staircase(4, 4, Sublattice::Even);
        let mut g = LatticeGrid::seed_with(frame, EquationSpec::TwoFrieze, &SeedValues::Ones).unwrap();
        g.evolve_all(Schedule::Sequential).unwrap();
        assert_eq!(g.value(2, 2).unwrap(), &rat(2, 1));
        assert!(g.get(site(2, 3)).is_none());
    }

    #[test]
    fn zero_seed_is_a_pole_at_first_use() {
        let frame = InitialFrame::l_frame(4, 2);
        let spec = EquationSpec::Hh2d;
        let mut vals = numeric_seed(&frame, &spec, &SeedValues::Ones).unwrap();
        vals.insert(site(0, 0), rat(0, 1));
        let mut g = LatticeGrid::seed_numeric(frame, spec, &vals).unwrap();
        assert_eq!(
            g.evolve_all(Schedule::Sequential),
            Err(LatticeError::Pole { site: site(2, 1) })
        );
    }

    #[test]
    fn frame_too_thin_is_rejected() {
        let frame = InitialFrame::l_frame(6, 6);
        assert!(matches!(
            frame.check(&EquationSpec::TwoFrieze),
            Err(LatticeError::InvalidFrame(_))
        ));
    }

    #[test]
    fn unsatisfiable_region() {
        let mut g = ones_hh(4, 2);
        let err = g.evolve(Region::new(6, 6, 3, 3), Schedule::Sequential).unwrap_err();
        assert!(matches!(err, LatticeError::DependencyUnsatisfiable { .. }));
    }

    #[test]
    fn symbolic_first_step() {
        let frame = InitialFrame::l_frame(2, 1);
        let mut g = LatticeGrid::seed_symbolic(frame, EquationSpec::Hh2d).unwrap();
        g.evolve_all(Schedule::Sequential).unwrap();
        let expected: RationalFunction = "x[0,0]^-1*x[0,1]*x[2,0] + x[0,0]^-1*x[1,0] + x[0,0]^-1*x[1,1]"
            .parse()
            .unwrap();
        assert_eq!(g.value(2, 1).unwrap(), &expected);
    }

    #[test]
    fn frame_and_spec_strings_round_trip() {
        for s in ["L:6x3", "S:8x8:even", "strip3:5x4:odd"] {
            assert_eq!(s.parse::<InitialFrame>().unwrap().to_string(), s);
        }
        for s in ["hh2d", "frieze", "det1:2", "det2:1"] {
            assert_eq!(s.parse::<EquationSpec>().unwrap().to_string(), s);
        }
        assert!("det1:0".parse::<EquationSpec>().is_err());
    }

    #[test]
    fn snapshots_round_trip() {
        let g = ones_hh(5, 3);
        assert_eq!(LatticeGrid::<Rational>::from_text(&g.to_text()).unwrap(), g);
        assert_eq!(LatticeGrid::<Rational>::from_json(&g.to_json()).unwrap(), g);
        assert!(LatticeGrid::<RationalFunction>::from_json(&g.to_json()).is_err());
    }
}
