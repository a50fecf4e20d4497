mod common;

use common::{all_implicit_guiding_orders, brute_force, c, ids, top, total, weak, weak_profile, weak_profile_with_total};
use peakcheck_core::axis_check::{is_possibly_sp_on_axis, Notion};
use peakcheck_core::guided::{find_implicit_guiding_vote, guided_recognize, recognize_guided, Pins};
use peakcheck_core::{PreferenceOrder, Profile, Refusal, Verdict};
use proptest::prelude::*;

// a..e = 0..4
fn example_two() -> Profile {
    Profile::new(
        5,
        vec![
            weak(5, &[&[0], &[1], &[2, 3], &[4]]),
            weak(5, &[&[0, 1, 2], &[3], &[4]]),
            weak(5, &[&[4, 3], &[1], &[2], &[0]]),
        ],
    )
    .unwrap()
}

#[test]
fn example_two_guiding_votes() {
    let p = example_two();
    let g = find_implicit_guiding_vote(&p).unwrap().unwrap();
    assert_eq!(g, total(&[0, 1, 2, 3, 4]));
    let orders = all_implicit_guiding_orders(&p);
    assert!(orders.contains(&ids(&[3, 1, 2, 4, 0])));
    for o in orders {
        let g = PreferenceOrder::total(&o).unwrap();
        let v = guided_recognize(&p, &g, Pins::default()).unwrap();
        assert!(!v.is_consistent(), "guiding order {o:?}");
    }
}

#[test]
fn example_two_blocks_on_c() {
    let v = guided_recognize(&example_two(), &total(&[0, 1, 2, 3, 4]), Pins::default()).unwrap();
    match v {
        Verdict::NotConsistent(cert) => assert_eq!(
            cert,
            Refusal::Blocked {
                candidate: c(2),
                right_blocked_by: 2,
                left_blocked_by: 2
            }
            .into()
        ),
        Verdict::Consistent(a) => panic!("unexpected axis {a}"),
    }
}

#[test]
fn pinned_subproblem_from_rep_top() {
    // a, b, c, x = 0..3
    let p = Profile::new(4, vec![total(&[1, 2, 0, 3]), top(4, &[2, 3])]).unwrap();
    let pins = Pins {
        left: Some(c(0)),
        right: Some(c(3)),
    };
    let v = guided_recognize(&p, &total(&[1, 2, 0, 3]), pins).unwrap();
    assert_eq!(v.axis().unwrap().order(), ids(&[0, 1, 2, 3]).as_slice());
}

#[test]
fn external_guiding_vote_is_checked() {
    let p = Profile::new(3, vec![weak(3, &[&[0, 1, 2]])]).unwrap();
    let v = guided_recognize(&p, &total(&[2, 0, 1]), Pins::default()).unwrap();
    let a = v.axis().unwrap();
    let mut with_guiding = p.clone();
    with_guiding.push(total(&[2, 0, 1]), 1).unwrap();
    assert!(is_possibly_sp_on_axis(&with_guiding, a).unwrap().is_consistent());
}

proptest! {
    #[test]
    fn agrees_with_brute_force(p in weak_profile_with_total(2, 6, 4)) {
        let g = p.votes()[0].clone();
        let v = guided_recognize(&p, &g, Pins::default()).unwrap();
        prop_assert_eq!(v.is_consistent(), brute_force(&p, Notion::Possibly));
        if let Verdict::Consistent(a) = &v {
            prop_assert!(is_possibly_sp_on_axis(&p, a).unwrap().is_consistent());
        }
    }

    #[test]
    fn guiding_vote_choice_does_not_change_outcome(p in weak_profile(2, 6, 4)) {
        let orders = all_implicit_guiding_orders(&p);
        let outcomes: Vec<bool> = orders
            .iter()
            .take(24)
            .map(|o| guided_recognize(&p, &PreferenceOrder::total(o).unwrap(), Pins::default()).unwrap().is_consistent())
            .collect();
        prop_assert!(outcomes.windows(2).all(|w| w[0] == w[1]));
        if let Some(&first) = outcomes.first() {
            prop_assert_eq!(first, brute_force(&p, Notion::Possibly));
            prop_assert_eq!(recognize_guided(&p).unwrap().map(|v| v.is_consistent()), Some(first));
        } else {
            prop_assert!(recognize_guided(&p).unwrap().is_none());
        }
    }
}

#[test]
fn larger_profiles_agree_with_brute_force() {
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    });
    runner
        .run(&weak_profile_with_total(9, 10, 2), |p| {
            let g = p.votes()[0].clone();
            let v = guided_recognize(&p, &g, Pins::default()).unwrap();
            prop_assert_eq!(v.is_consistent(), brute_force(&p, Notion::Possibly));
            Ok(())
        })
        .unwrap();
}
