use std::collections::BTreeMap;

use hhlattice::determinants::{window_det, WindowKind};
use hhlattice::lattice::{
    evolve_det_corner, numeric_seed, site, EquationSpec, InitialFrame, LatticeError, LatticeGrid,
    SeedValues, SitePos, Sublattice,
};
use hhlattice::par::Schedule;
use hhlattice::scalar::{rat, Rational, Scalar};
use hhlattice::RationalFunction;
use num_traits::Signed;
use proptest::prelude::*;

/// Direct iteration of the two-dimensional recurrence on an all-ones
/// L-frame, written without the engine.
fn hh_oracle(n_max: usize, t_max: usize) -> Vec<Vec<i128>> {
    let mut x = vec![vec![0i128; n_max + 1]; t_max + 1];
    for n in 0..=n_max {
        x[0][n] = 1;
    }
    for row in x.iter_mut() {
        row[0] = 1;
        row[1] = 1;
    }
    for t in 1..=t_max {
        for n in 2..=n_max {
            let num = x[t][n - 2] * x[t - 1][n] + x[t][n - 1] + x[t - 1][n - 1];
            assert_eq!(num % x[t - 1][n - 2], 0);
            x[t][n] = num / x[t - 1][n - 2];
        }
    }
    x
}

fn evolved(frame: InitialFrame, spec: EquationSpec, seed: &SeedValues) -> LatticeGrid<Rational> {
    let mut g = LatticeGrid::seed_with(frame, spec, seed).unwrap();
    g.evolve_all(Schedule::Sequential).unwrap();
    g
}

#[test]
fn hh2d_matches_direct_iteration() {
    let oracle = hh_oracle(10, 6);
    let g = evolved(InitialFrame::l_frame(10, 6), EquationSpec::Hh2d, &SeedValues::Ones);
    for t in 0..=6 {
        for n in 0..=10 {
            let v = g.value(n, t).unwrap();
            assert!(v.is_integer() && v.is_positive());
            assert_eq!(v, &Rational::from_integer(oracle[t as usize][n as usize].into()));
        }
    }
}

#[test]
fn wavefront_agrees_with_sequential() {
    for spec in [
        EquationSpec::Hh2d,
        EquationSpec::TwoFrieze,
        EquationSpec::DetShift1 { k: 2 },
        EquationSpec::DetShift2 { k: 1 },
    ] {
        let frame = if spec == EquationSpec::Hh2d {
            InitialFrame::l_frame(12, 8)
        } else {
            InitialFrame::staircase(14, 14, Sublattice::Even)
        };
        let mut a = LatticeGrid::seed_with(frame, spec, &SeedValues::Random(7)).unwrap();
        let mut b = a.clone();
        a.evolve_all(Schedule::Sequential).unwrap();
        b.evolve_all(Schedule::Parallel).unwrap();
        assert_eq!(a, b, "{spec}");
        assert!(a.law_violations().is_empty(), "{spec}");
    }
}

#[test]
fn det_shift1_k1_is_the_two_frieze() {
    for seed in 0..5 {
        let frame = InitialFrame::staircase(10, 10, Sublattice::Even);
        let a = evolved(frame, EquationSpec::TwoFrieze, &SeedValues::Random(seed));
        let b = evolved(frame, EquationSpec::DetShift1 { k: 1 }, &SeedValues::Random(seed));
        assert_eq!(a.values(), b.values());
    }
}

#[test]
fn det_corner_solves_the_law() {
    let frame = InitialFrame::staircase(8, 8, Sublattice::Even);
    let spec = EquationSpec::DetShift1 { k: 2 };
    let g = evolved(frame, spec, &SeedValues::Random(3));
    let target = site(6, 4);
    let mut partial = g.values().clone();
    let expected = partial.remove(&target).unwrap();
    let h = LatticeGrid::from_values(spec, frame, partial);
    assert_eq!(evolve_det_corner(&h, target).unwrap(), expected);
    assert_eq!(g.law_residual(target), Some(Rational::zero()));
}

#[test]
fn vanishing_cofactor_is_a_singular_step() {
    let frame = InitialFrame::staircase(6, 6, Sublattice::Even);
    let spec = EquationSpec::DetShift1 { k: 2 };
    let mut vals = numeric_seed(&frame, &spec, &SeedValues::Ones).unwrap();
    // F_2 at the origin is 1*1 - 1*1 = 0
    vals.insert(site(0, 0), rat(1, 1));
    let mut g = LatticeGrid::seed_numeric(frame, spec, &vals).unwrap();
    assert_eq!(
        g.evolve_all(Schedule::Sequential),
        Err(LatticeError::SingularStep { site: site(4, 4) })
    );
}

#[test]
fn seed_value_count_must_match() {
    let frame = InitialFrame::l_frame(3, 2);
    let err = LatticeGrid::seed_with(frame, EquationSpec::Hh2d, &SeedValues::Explicit(vec![rat(1, 1)]))
        .unwrap_err();
    assert!(matches!(err, LatticeError::FrameMismatch(_)));
    let mut partial = BTreeMap::new();
    partial.insert(site(0, 0), rat(1, 1));
    assert!(matches!(
        LatticeGrid::seed_numeric(frame, EquationSpec::Hh2d, &partial),
        Err(LatticeError::FrameMismatch(_))
    ));
}

#[test]
fn symbolic_grid_specializes_to_numeric_grid() {
    let frame = InitialFrame::l_frame(6, 4);
    let mut sym = LatticeGrid::seed_symbolic(frame, EquationSpec::Hh2d).unwrap();
    sym.evolve_all(Schedule::Parallel).unwrap();
    assert!(sym.is_laurent());
    for seed in 0..3 {
        let vals = numeric_seed(&frame, &EquationSpec::Hh2d, &SeedValues::Random(seed)).unwrap();
        let mut num = LatticeGrid::seed_numeric(frame, EquationSpec::Hh2d, &vals).unwrap();
        num.evolve_all(Schedule::Sequential).unwrap();
        let assign = |v: hhlattice::VariableId| match v {
            hhlattice::VariableId::Site { n, t } => vals.get(&site(n as i64, t as i64)).cloned(),
            _ => None,
        };
        let spec_grid = sym.try_map(|v| v.evaluate_at(&assign)).unwrap();
        assert_eq!(spec_grid.values(), num.values());
    }
}

#[test]
fn symbolic_snapshot_round_trips() {
    let frame = InitialFrame::l_frame(4, 2);
    let mut g = LatticeGrid::seed_symbolic(frame, EquationSpec::Hh2d).unwrap();
    g.evolve_all(Schedule::Sequential).unwrap();
    assert_eq!(LatticeGrid::<RationalFunction>::from_text(&g.to_text()).unwrap(), g);
    assert_eq!(LatticeGrid::<RationalFunction>::from_json(&g.to_json()).unwrap(), g);
}

#[test]
fn det_shift_laws_lose_the_laurent_property() {
    let frame = InitialFrame::staircase(6, 6, Sublattice::Even);
    let mut g = LatticeGrid::seed_symbolic(frame, EquationSpec::DetShift1 { k: 2 }).unwrap();
    g.evolve_all(Schedule::Sequential).unwrap();
    assert!(!g.is_laurent());
    assert!(g.law_violations().is_empty());
}

#[test]
fn d3_on_ones_seed() {
    let g = evolved(InitialFrame::l_frame(8, 4), EquationSpec::Hh2d, &SeedValues::Ones);
    let d = |n, t| window_det(&g, site(n, t), 3, WindowKind::X).unwrap();
    assert_eq!(d(0, 0), rat(8, 1));
    assert_eq!(d(1, 0), rat(8, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_is_deterministic_and_exact(seed in any::<u64>()) {
        let frame = InitialFrame::l_frame(7, 5);
        let a = evolved(frame, EquationSpec::Hh2d, &SeedValues::Random(seed));
        let b = evolved(frame, EquationSpec::Hh2d, &SeedValues::Random(seed));
        prop_assert_eq!(&a, &b);
        prop_assert!(a.law_violations().is_empty());
        prop_assert!(a.values().values().all(|v| v.is_positive()));
        let checked = a.law_checkable_sites();
        prop_assert_eq!(checked, 6 * 5);
    }

    #[test]
    fn frieze_law_is_exact_on_random_seeds(seed in any::<u64>(), odd in any::<bool>()) {
        let sub = if odd { Sublattice::Odd } else { Sublattice::Even };
        let g = evolved(InitialFrame::staircase(9, 9, sub), EquationSpec::TwoFrieze, &SeedValues::Random(seed));
        prop_assert!(g.law_violations().is_empty());
        prop_assert!(g.values().keys().all(|s: &SitePos| sub.contains(*s)));
    }
}
