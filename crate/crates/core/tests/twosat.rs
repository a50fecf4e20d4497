mod common;

use common::{brute_force, c, local_weak_profile_with_total, total, weak, weak_profile_with_total};
use peakcheck_core::axis_check::{is_possibly_sp_on_axis, Notion};
use peakcheck_core::guided::{guided_recognize, Pins};
use peakcheck_core::twosat::{encode, recognize_lwo_with_total, solve_2sat, Lit, TwoSatInstance};
use peakcheck_core::{Error, PreferenceOrder, Profile, Refusal, Verdict};
use proptest::prelude::*;

fn exhaustive_2sat(f: &TwoSatInstance) -> bool {
    (0u64..1 << f.num_vars).any(|bits| {
        let a: Vec<bool> = (0..f.num_vars).map(|i| bits & (1 << i) != 0).collect();
        f.is_satisfied_by(&a)
    })
}

fn instance(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = TwoSatInstance> {
    (1..=max_vars).prop_flat_map(move |n| {
        let lit = (0..n, any::<bool>()).prop_map(|(var, negated)| Lit { var, negated });
        prop::collection::vec((lit.clone(), lit), 0..=max_clauses).prop_map(move |cl| TwoSatInstance {
            num_vars: n,
            clauses: cl,
        })
    })
}

#[test]
fn valley_clauses_for_one_vote() {
    // a ≻ b and c ≻ b over a, b, c = 0, 1, 2; the total vote adds none.
    let gadget = PreferenceOrder::from_pairs(3, [(c(0), c(1)), (c(2), c(1))]).unwrap();
    let p = Profile::new(3, vec![gadget, total(&[1, 0, 2])]).unwrap();
    let enc = encode(&p).unwrap();
    let v = |a: usize, b: usize| enc.var(c(a), c(b));
    let valley: Vec<_> = enc.instance.clauses.iter().take(2).copied().collect();
    assert_eq!(
        valley,
        vec![(Lit::pos(v(1, 0)), Lit::pos(v(2, 1))), (Lit::pos(v(0, 1)), Lit::pos(v(1, 2)))]
    );
    // ⟨b ≻ a ≻ c⟩ contributes (c below a and b) one more valley pair.
    assert_eq!(enc.instance.clauses.len(), 2 + 2 + 6);
}

#[test]
fn single_total_order() {
    let p = Profile::new(3, vec![total(&[0, 1, 2])]).unwrap();
    let v = recognize_lwo_with_total(&p).unwrap();
    assert!(is_possibly_sp_on_axis(&p, v.axis().unwrap()).unwrap().is_consistent());
}

#[test]
fn betweenness_gadget_forces_middle() {
    // a, b, c = 0, 1, 2: votes {a ≻ c, b ≻ c} and {b ≻ a, c ≻ a}.
    let p = Profile::new(
        3,
        vec![
            PreferenceOrder::from_pairs(3, [(c(0), c(2)), (c(1), c(2))]).unwrap(),
            PreferenceOrder::from_pairs(3, [(c(1), c(0)), (c(2), c(0))]).unwrap(),
            total(&[1, 0, 2]),
        ],
    )
    .unwrap();
    let enc = encode(&p).unwrap();
    let pair_vars = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)].map(|(a, b)| enc.var(c(a), c(b)));
    let mut models = 0;
    for bits in 0u32..64 {
        let mut assignment = vec![false; 9];
        for (i, &x) in pair_vars.iter().enumerate() {
            assignment[x] = bits & (1 << i) != 0;
        }
        if enc.instance.is_satisfied_by(&assignment) {
            models += 1;
            let left = |a: usize, b: usize| assignment[enc.var(c(a), c(b))];
            assert!((left(0, 1) && left(1, 2)) || (left(2, 1) && left(1, 0)));
        }
    }
    assert_eq!(models, 2);
}

#[test]
fn guided_example_with_explicit_total_order() {
    let mut p = Profile::new(
        5,
        vec![
            weak(5, &[&[0], &[1], &[2, 3], &[4]]),
            weak(5, &[&[0, 1, 2], &[3], &[4]]),
            weak(5, &[&[4, 3], &[1], &[2], &[0]]),
        ],
    )
    .unwrap();
    p.push(total(&[0, 1, 2, 3, 4]), 1).unwrap();
    assert_eq!(recognize_lwo_with_total(&p).unwrap(), Verdict::refused(Refusal::Unsatisfiable));
}

#[test]
fn needs_a_total_order() {
    let p = Profile::new(3, vec![weak(3, &[&[0, 1], &[2]])]).unwrap();
    assert_eq!(encode(&p).unwrap_err(), Error::NoTotalOrder);
}

#[test]
fn twenty_variable_instances() {
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
        cases: 12,
        ..ProptestConfig::default()
    });
    runner
        .run(&instance(20, 40).prop_filter("wide", |f| f.num_vars >= 16), |f| {
            prop_assert_eq!(solve_2sat(&f).is_some(), exhaustive_2sat(&f));
            Ok(())
        })
        .unwrap();
}

proptest! {
    #[test]
    fn solver_agrees_with_enumeration(f in instance(10, 30)) {
        let got = solve_2sat(&f);
        prop_assert_eq!(got.is_some(), exhaustive_2sat(&f));
        if let Some(a) = got {
            prop_assert!(f.is_satisfied_by(&a));
        }
    }

    #[test]
    fn fifty_variable_models_satisfy(f in instance(50, 120)) {
        if let Some(a) = solve_2sat(&f) {
            prop_assert!(f.is_satisfied_by(&a));
        }
    }

    #[test]
    fn agrees_with_brute_force(p in local_weak_profile_with_total(2, 6, 4)) {
        let v = recognize_lwo_with_total(&p).unwrap();
        prop_assert_eq!(v.is_consistent(), brute_force(&p, Notion::Possibly));
    }

    #[test]
    fn agrees_with_guided(p in weak_profile_with_total(2, 8, 4)) {
        let g = p.votes()[0].clone();
        prop_assert_eq!(
            recognize_lwo_with_total(&p).unwrap().is_consistent(),
            guided_recognize(&p, &g, Pins::default()).unwrap().is_consistent()
        );
    }
}
