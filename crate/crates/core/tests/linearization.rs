use hhlattice::lattice::{site, EquationSpec, InitialFrame, LatticeGrid, SeedValues, Sublattice};
use hhlattice::linearization::{
    alpha_beta_closed_form, along_n_coefficients, null_vector_recurrence, t_direction_coeffs, Direction,
    LineParity, Linearizer, NullFamily,
};
use hhlattice::par::Schedule;
use hhlattice::scalar::{rat, Rational, Scalar};
use hhlattice::RationalFunction;
use proptest::prelude::*;

fn numeric(frame: InitialFrame, spec: EquationSpec, seed: &SeedValues) -> LatticeGrid<Rational> {
    let mut g = LatticeGrid::seed_with(frame, spec, seed).unwrap();
    g.evolve_all(Schedule::Parallel).unwrap();
    g
}

fn row<V: Scalar>(g: &LatticeGrid<V>, t: i64, len: i64) -> Vec<V> {
    (0..len).map(|n| g.value(n, t).unwrap().clone()).collect()
}

#[test]
fn ones_seed_along_n() {
    let g = numeric(InitialFrame::l_frame(12, 5), EquationSpec::Hh2d, &SeedValues::Ones);
    let lin = Linearizer::new(&g);
    for n in 0..6 {
        let r = lin.along_n(n).unwrap();
        assert_eq!(r.coefficients, vec![rat(-1, 1), rat(4, 1), rat(-4, 1), rat(1, 1)]);
        assert!(r.verify_windows.len() >= 2);
    }
    // row t = 1, odd columns
    let x: Vec<i64> = [1, 3, 5, 7]
        .iter()
        .map(|&n| g.value(n, 1).unwrap().to_integer().try_into().unwrap())
        .collect();
    assert_eq!(x, vec![1, 5, 15, 41]);
    assert_eq!(41 - 4 * 15 + 4 * 5 - 1, 0);
    lin.along_n(0).unwrap();
    assert_eq!(lin.cached_entries(), 6);
}

#[test]
fn symbolic_alpha_beta_match_closed_form() {
    let mut g = LatticeGrid::seed_symbolic(InitialFrame::l_frame(7, 3), EquationSpec::Hh2d).unwrap();
    g.evolve_all(Schedule::Parallel).unwrap();
    let b = row(&g, 0, 8);
    let r0 = along_n_coefficients(&g, 0, &[0, 1, 2, 3]).unwrap();
    let r1 = along_n_coefficients(&g, 1, &[0, 1, 2, 3]).unwrap();
    assert_eq!(r0.verify_windows, vec!["t=2".to_string(), "t=3".to_string()]);
    let (a0, b0) = alpha_beta_closed_form(&b, 0).unwrap();
    let (a1, b1) = alpha_beta_closed_form(&b, 1).unwrap();
    assert_eq!(r0.coefficients[2], a0);
    assert_eq!(r0.coefficients[1], b0);
    assert_eq!(r1.coefficients[2], a1);
    assert_eq!(r1.coefficients[1], b1);
    assert_eq!(a0, b1.neg());
    assert!(a0.is_laurent());
}

#[test]
fn closed_form_reads_any_row() {
    let g = numeric(InitialFrame::l_frame(12, 4), EquationSpec::Hh2d, &SeedValues::Random(11));
    for t in 0..3 {
        let b = row(&g, t, 13);
        for n in 0..4 {
            let r = along_n_coefficients(&g, n as i64, &[0, 1, 2, 3]).unwrap();
            let (a, bb) = alpha_beta_closed_form(&b, n).unwrap();
            assert_eq!((r.coefficients[2].clone(), r.coefficients[1].clone()), (a, bb));
        }
    }
}

#[test]
fn t_direction_on_ones_and_random_seeds() {
    for seed in [SeedValues::Ones, SeedValues::Random(1), SeedValues::Random(2)] {
        let g = numeric(InitialFrame::l_frame(11, 8), EquationSpec::Hh2d, &seed);
        for t in 0..3 {
            let even = t_direction_coeffs(&g, t, LineParity::Even).unwrap();
            let odd = t_direction_coeffs(&g, t, LineParity::Odd).unwrap();
            assert!(even.recurrence.verify_windows.len() >= 2);
            assert!(even.shifted_agrees && odd.shifted_agrees, "{seed:?} t={t}");
            assert_eq!(even.epsilon, odd.epsilon);
            if let SeedValues::Random(_) = seed {
                assert!(!even.printed_agrees && !odd.printed_agrees);
            }
        }
    }
}

#[test]
fn d4_null_vectors_reproduce_the_solved_relations() {
    let g = numeric(InitialFrame::l_frame(12, 8), EquationSpec::Hh2d, &SeedValues::Random(5));
    for (n, t) in [(0, 0), (1, 0), (2, 1)] {
        let r = null_vector_recurrence(&g, NullFamily::D4, site(n, t), Direction::AlongN).unwrap();
        assert!(r.determinant_vanishes && r.ends_match && r.shift_agrees);
        let solved = along_n_coefficients(&g, n, &[0, 1, 2, 3]).unwrap();
        assert_eq!(r.recurrence.coefficients, solved.coefficients);

        let r = null_vector_recurrence(&g, NullFamily::D4, site(n, t), Direction::AlongT).unwrap();
        assert!(r.determinant_vanishes && r.shift_agrees);
        let p = if n % 2 == 0 { LineParity::Even } else { LineParity::Odd };
        let solved = t_direction_coeffs(&g, t, p).unwrap();
        assert_eq!(r.recurrence.coefficients, solved.recurrence.coefficients);
    }
}

#[test]
fn d4_null_vector_symbolic() {
    let mut g = LatticeGrid::seed_symbolic(InitialFrame::l_frame(8, 4), EquationSpec::Hh2d).unwrap();
    g.evolve_all(Schedule::Parallel).unwrap();
    let r = null_vector_recurrence(&g, NullFamily::D4, site(0, 0), Direction::AlongN).unwrap();
    assert!(r.determinant_vanishes && r.ends_match && r.shift_agrees);
    let (a, b) = alpha_beta_closed_form(&row(&g, 0, 7), 0).unwrap();
    assert_eq!(r.recurrence.coefficients[2], a);
    assert_eq!(r.recurrence.coefficients[1], b);
    assert_eq!(r.recurrence.coefficients[0], RationalFunction::from_i64(-1));
}

fn frieze_like(spec: EquationSpec, reach: i64, seed: u64) -> LatticeGrid<Rational> {
    numeric(
        InitialFrame::staircase(reach, reach, Sublattice::Even),
        spec,
        &SeedValues::Random(seed),
    )
}

#[test]
fn frieze_and_det_shift_null_vectors() {
    let cases = [
        (EquationSpec::TwoFrieze, NullFamily::F4, 12),
        (EquationSpec::DetShift1 { k: 1 }, NullFamily::DetShift1 { k: 1 }, 12),
        (EquationSpec::DetShift1 { k: 2 }, NullFamily::DetShift1 { k: 2 }, 16),
        (EquationSpec::DetShift2 { k: 1 }, NullFamily::DetShift2 { k: 1 }, 16),
        (EquationSpec::DetShift2 { k: 2 }, NullFamily::DetShift2 { k: 2 }, 20),
    ];
    for (spec, family, reach) in cases {
        let g = frieze_like(spec, reach, 9);
        for dir in [Direction::AlongN, Direction::AlongT] {
            for origin in [site(0, 0), site(1, 1)] {
                let r = null_vector_recurrence(&g, family, origin, dir).unwrap();
                assert!(r.determinant_vanishes, "{family} {dir:?}");
                assert!(r.ends_match, "{family} {dir:?}: {}", r.recurrence);
                assert!(r.shift_agrees, "{family} {dir:?}");
                assert_eq!(r.recurrence.order(), family.size() - 1);
            }
        }
    }
}

#[test]
fn det_shift1_k2_has_a_ten_step_relation() {
    let g = frieze_like(EquationSpec::DetShift1 { k: 2 }, 16, 4);
    let r = null_vector_recurrence(&g, NullFamily::DetShift1 { k: 2 }, site(0, 0), Direction::AlongN).unwrap();
    let c = &r.recurrence.coefficients;
    // x[n+10,t] ... x[n,t] along a line of the even class
    for t in [0i64, 2] {
        let vals: Vec<Rational> = (0..6).map(|j| g.value(2 * j, t).unwrap().clone()).collect();
        assert!(r.recurrence.holds_on(&vals), "t={t}");
    }
    assert_eq!(c.len(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn along_n_relation_is_row_independent(seed in any::<u64>(), n in 0i64..4) {
        let g = numeric(InitialFrame::l_frame(10, 6), EquationSpec::Hh2d, &SeedValues::Random(seed));
        let r = along_n_coefficients(&g, n, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        prop_assert_eq!(r.verify_windows.len(), 5);
    }
}
