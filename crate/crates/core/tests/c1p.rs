mod common;

use common::{brute_force, weak, weak_profile};
use fixedbitset::FixedBitSet;
use itertools::Itertools;
use peakcheck_core::axis_check::{check_on_axis, Notion};
use peakcheck_core::c1p::{
    build_black_matrix, build_plateaued_matrix, build_psp_matrix, recognize_black,
    recognize_plateaued, recognize_psp_c1p, solve_c1p, solve_c1p_exhaustive, C1Matrix,
};
use peakcheck_core::{Profile, Verdict};
use proptest::prelude::*;

fn bits_matrix() -> impl Strategy<Value = C1Matrix> {
    (1usize..=7).prop_flat_map(|m| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), m), 0..8)
            .prop_map(move |rows| C1Matrix::from_rows(m, &rows).unwrap())
    })
}

// a..f = 0..5
fn example_one() -> Profile {
    Profile::new(
        6,
        vec![
            weak(6, &[&[0, 2], &[1], &[3, 4], &[5]]),
            weak(6, &[&[0], &[1], &[2], &[3, 4], &[5]]),
        ],
    )
    .unwrap()
}

#[test]
fn example_one_matrices() {
    let x = build_psp_matrix(&example_one()).unwrap();
    let rows: Vec<String> = (0..12).map(|i| x.row_string(i)).collect();
    assert_eq!(
        rows,
        [
            "101000", "111000", "101000", "111110", "111110", "111111", //
            "100000", "110000", "111000", "111110", "111110", "111111",
        ]
    );
    let order = solve_c1p(&x).unwrap();
    assert!(x.is_consecutive_under(&order));
    // The column order from the worked example is also a witness.
    assert!(x.is_consecutive_under(&[1, 0, 2, 3, 4, 5]));
    assert!(recognize_psp_c1p(&example_one()).unwrap().is_consistent());
}

#[test]
fn guided_example_is_rejected() {
    // a..e = 0..4
    let p = Profile::new(
        5,
        vec![
            weak(5, &[&[0], &[1], &[2, 3], &[4]]),
            weak(5, &[&[0, 1, 2], &[3], &[4]]),
            weak(5, &[&[4, 3], &[1], &[2], &[0]]),
        ],
    )
    .unwrap();
    assert!(!recognize_psp_c1p(&p).unwrap().is_consistent());
    assert!(!brute_force(&p, Notion::Possibly));
}

#[test]
fn fishburn_profile_separates_notions() {
    // a, b, c = 0, 1, 2
    let p = Profile::with_multiplicities(
        3,
        vec![
            weak(3, &[&[1], &[0], &[2]]),
            weak(3, &[&[2], &[1], &[0]]),
            weak(3, &[&[0], &[1, 2]]),
        ],
        vec![1, 2, 2],
    )
    .unwrap();
    assert!(recognize_psp_c1p(&p).unwrap().is_consistent());
    assert!(brute_force(&p, Notion::Possibly));
    assert!(!recognize_plateaued(&p).unwrap().is_consistent());
    assert!(!brute_force(&p, Notion::Plateaued));
}

#[test]
fn strict_profile_black_matrix_is_solved() {
    let p = Profile::new(
        4,
        vec![
            weak(4, &[&[1], &[2], &[0], &[3]]),
            weak(4, &[&[2], &[3], &[1], &[0]]),
        ],
    )
    .unwrap();
    let v = recognize_black(&p).unwrap();
    let axis = v.axis().expect("consistent");
    assert!(check_on_axis(&p, axis, Notion::Black).unwrap().is_consistent());
}

#[test]
fn gadget_rows_reject_same_side_pairs() {
    for m in 3..=5 {
        for p_mask in 1u32..(1 << m) {
            let upper: Vec<usize> = (0..m).filter(|&i| p_mask & (1 << i) != 0).collect();
            let rest: Vec<usize> = (0..m).filter(|&i| p_mask & (1 << i) == 0).collect();
            for (&a, &b) in rest.iter().tuple_combinations() {
                let row = |xs: &[usize]| {
                    let mut r = FixedBitSet::with_capacity(m);
                    for &x in upper.iter().chain(xs) {
                        r.insert(x);
                    }
                    r
                };
                let gadget = [row(&[b]), row(&[a, b]), row(&[a])];
                for perm in (0..m).permutations(m) {
                    let pos = |x: usize| perm.iter().position(|&y| y == x).unwrap();
                    let lo = upper.iter().map(|&x| pos(x)).min().unwrap();
                    let hi = upper.iter().map(|&x| pos(x)).max().unwrap();
                    let same_side =
                        (pos(a) < lo && pos(b) < lo) || (pos(a) > hi && pos(b) > hi);
                    if same_side {
                        let all = gadget.iter().all(|r| {
                            let ps: Vec<usize> = (0..m).filter(|&x| r.contains(x)).map(pos).sorted().collect();
                            ps[ps.len() - 1] - ps[0] + 1 == ps.len()
                        });
                        assert!(!all, "m={m} P={upper:?} a={a} b={b} axis={perm:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn weak_profiles_match_brute_force() {
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
        cases: 1500,
        ..ProptestConfig::default()
    });
    runner
        .run(&weak_profile(2, 6, 4), |p| {
            prop_assert_eq!(
                recognize_psp_c1p(&p).unwrap().is_consistent(),
                brute_force(&p, Notion::Possibly)
            );
            Ok(())
        })
        .unwrap();
}

proptest! {
    #[test]
    fn pq_tree_agrees_with_exhaustive_search(x in bits_matrix()) {
        let fast = solve_c1p(&x);
        let slow = solve_c1p_exhaustive(&x).unwrap();
        prop_assert_eq!(fast.is_some(), slow.is_some());
        if let Some(order) = fast {
            prop_assert_eq!(order.iter().copied().sorted().collect::<Vec<_>>(), (0..x.num_columns()).collect::<Vec<_>>());
            prop_assert!(x.is_consecutive_under(&order));
        }
    }

    #[test]
    fn row_order_does_not_change_verdict(x in bits_matrix(), seed in any::<u64>()) {
        let mut rows: Vec<Vec<bool>> = x.rows().iter().map(|r| (0..x.num_columns()).map(|j| r.contains(j)).collect()).collect();
        let k = rows.len();
        if k > 1 {
            rows.rotate_left((seed as usize) % k);
        }
        let y = C1Matrix::from_rows(x.num_columns(), &rows).unwrap();
        prop_assert_eq!(solve_c1p(&x).is_some(), solve_c1p(&y).is_some());
    }

    #[test]
    fn notions_nest_and_match_brute_force(p in weak_profile(2, 5, 3)) {
        let psp = recognize_psp_c1p(&p).unwrap().is_consistent();
        let plat = recognize_plateaued(&p).unwrap().is_consistent();
        let black = recognize_black(&p).unwrap().is_consistent();
        prop_assert!(!black || plat);
        prop_assert!(!plat || psp);
        prop_assert_eq!(plat, brute_force(&p, Notion::Plateaued));
        prop_assert_eq!(black, brute_force(&p, Notion::Black));
        for x in [build_psp_matrix(&p).unwrap(), build_plateaued_matrix(&p).unwrap(), build_black_matrix(&p).unwrap()] {
            if let Some(order) = solve_c1p(&x) {
                prop_assert!(x.is_consecutive_under(&order));
            }
        }
        if let Verdict::Consistent(axis) = recognize_plateaued(&p).unwrap() {
            prop_assert!(check_on_axis(&p, &axis, Notion::Plateaued).unwrap().is_consistent());
        }
    }
}

fn planted_matrix() -> impl Strategy<Value = C1Matrix> {
    (2usize..=40).prop_flat_map(|m| {
        (
            Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec((0..m, 0..m), 0..60),
        )
            .prop_map(move |(order, spans)| {
                let rows: Vec<Vec<bool>> = spans
                    .into_iter()
                    .map(|(x, y)| {
                        let (lo, hi) = (x.min(y), x.max(y));
                        let mut r = vec![false; m];
                        for &col in &order[lo..=hi] {
                            r[col] = true;
                        }
                        r
                    })
                    .collect();
                C1Matrix::from_rows(m, &rows).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn planted_interval_matrices_are_solved(x in planted_matrix()) {
        let order = solve_c1p(&x);
        prop_assert!(order.is_some());
        prop_assert!(x.is_consecutive_under(&order.unwrap()));
    }
}
