mod common;

use common::{axis, brute_force, c, ids, total, weak, weak_profile};
use peakcheck_core::axis_check::Notion;
use peakcheck_core::c1p::recognize_necessary;
use peakcheck_core::oracle::{
    extension_enumerate, majority_relation, oracle_recognize, weak_condorcet_winners,
};
use peakcheck_core::{PreferenceOrder, Profile, Verdict};
use proptest::prelude::*;

// a, b, c = 0, 1, 2
fn fishburn() -> Profile {
    Profile::with_multiplicities(
        3,
        vec![
            weak(3, &[&[1], &[0], &[2]]),
            weak(3, &[&[2], &[1], &[0]]),
            weak(3, &[&[0], &[1, 2]]),
        ],
        vec![1, 2, 2],
    )
    .unwrap()
}

#[test]
fn fishburn_profile() {
    let p = fishburn();
    assert_eq!(
        oracle_recognize(&p, Notion::Possibly).unwrap(),
        Verdict::Consistent(axis(&[0, 1, 2]))
    );
    let maj = majority_relation(&p).unwrap();
    let mut pairs = maj.pairs();
    pairs.sort();
    // a > c, c > b, b > a
    assert_eq!(pairs, vec![(c(0), c(2)), (c(1), c(0)), (c(2), c(1))]);
    assert!(weak_condorcet_winners(&p).unwrap().is_empty());
}

#[test]
fn majority_trivial_cases() {
    let p = Profile::new(3, vec![total(&[1, 2, 0])]).unwrap();
    assert_eq!(weak_condorcet_winners(&p).unwrap(), vec![c(1)]);
    assert_eq!(majority_relation(&p).unwrap().pairs().len(), 3);
    let p = Profile::new(3, vec![total(&[0, 1, 2]), total(&[2, 1, 0])]).unwrap();
    assert!(majority_relation(&p).unwrap().pairs().is_empty());
    assert_eq!(weak_condorcet_winners(&p).unwrap(), ids(&[0, 1, 2]));
}

#[test]
fn one_candidate() {
    let p = Profile::new(1, vec![total(&[0])]).unwrap();
    for n in Notion::ALL {
        assert!(oracle_recognize(&p, n).unwrap().is_consistent());
    }
}

#[test]
fn betweenness_gadget_alone() {
    let p = Profile::new(
        3,
        vec![
            PreferenceOrder::from_pairs(3, [(c(0), c(2)), (c(1), c(2))]).unwrap(),
            PreferenceOrder::from_pairs(3, [(c(1), c(0)), (c(2), c(0))]).unwrap(),
        ],
    )
    .unwrap();
    assert_eq!(oracle_recognize(&p, Notion::Possibly).unwrap(), Verdict::Consistent(axis(&[0, 1, 2])));
}

#[test]
fn extension_counts_match_factorials() {
    // Buckets of sizes 2 and 3 give 2! * 3! extensions.
    let v = weak(5, &[&[0, 1], &[2, 3, 4]]);
    let all: Vec<_> = extension_enumerate(&v, 8).unwrap().collect();
    assert_eq!(all.len(), 12);
    let mut sorted = all.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted, all);
}

proptest! {
    #[test]
    fn reversal_and_relabeling(p in weak_profile(2, 5, 3), seed in any::<u64>()) {
        let m = p.num_candidates();
        let v = oracle_recognize(&p, Notion::Possibly).unwrap();
        if let Verdict::Consistent(a) = &v {
            prop_assert!(peakcheck_core::axis_check::is_possibly_sp_on_axis(&p, &a.reversed()).unwrap().is_consistent());
        }
        let shift = (seed as usize) % m;
        let map: Vec<_> = (0..m).map(|i| c((i + shift) % m)).collect();
        let q = p.relabel(&map);
        let w = oracle_recognize(&q, Notion::Possibly).unwrap();
        prop_assert_eq!(v.is_consistent(), w.is_consistent());
        if let Verdict::Consistent(a) = &v {
            let moved = peakcheck_core::Axis::new(a.order().iter().map(|x| map[x.index()]).collect()).unwrap();
            prop_assert!(peakcheck_core::axis_check::is_possibly_sp_on_axis(&q, &moved).unwrap().is_consistent());
        }
    }

    #[test]
    fn notions_nest(p in weak_profile(2, 5, 3)) {
        let get = |n| oracle_recognize(&p, n).unwrap().is_consistent();
        let (psp, plat, black, nec) = (get(Notion::Possibly), get(Notion::Plateaued), get(Notion::Black), get(Notion::Necessarily));
        prop_assert!(!nec || plat);
        prop_assert!(!plat || psp);
        prop_assert!(!black || nec);
    }

    #[test]
    fn necessary_characterization(p in weak_profile(2, 5, 3)) {
        let by_extensions = oracle_recognize(&p, Notion::Necessarily).unwrap().is_consistent();
        prop_assert_eq!(by_extensions, brute_force(&p, Notion::Necessarily));
        prop_assert_eq!(by_extensions, recognize_necessary(&p).unwrap().is_consistent());
    }
}
