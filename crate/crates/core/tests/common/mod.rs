#![allow(dead_code)]

use itertools::Itertools;
use peakcheck_core::axis_check::{check_on_axis, Notion};
use peakcheck_core::{Axis, CandidateId, PreferenceOrder, Profile};
use proptest::prelude::*;

pub fn c(i: usize) -> CandidateId {
    CandidateId(i)
}

pub fn ids(xs: &[usize]) -> Vec<CandidateId> {
    xs.iter().map(|&i| c(i)).collect()
}

pub fn weak(m: usize, b: &[&[usize]]) -> PreferenceOrder {
    PreferenceOrder::weak(m, b.iter().map(|x| ids(x)).collect()).unwrap()
}

pub fn top(m: usize, ranked: &[usize]) -> PreferenceOrder {
    PreferenceOrder::truncated(m, ranked.iter().map(|&i| vec![c(i)]).collect()).unwrap()
}

pub fn total(order: &[usize]) -> PreferenceOrder {
    PreferenceOrder::total(&ids(order)).unwrap()
}

pub fn axis(order: &[usize]) -> Axis {
    Axis::new(ids(order)).unwrap()
}

/// Weak order whose candidate `i` sits at level `levels[i]` (gaps collapse).
pub fn from_levels(levels: &[usize]) -> PreferenceOrder {
    let m = levels.len();
    let buckets: Vec<Vec<CandidateId>> = levels
        .iter()
        .copied()
        .sorted()
        .dedup()
        .map(|l| (0..m).filter(|&i| levels[i] == l).map(c).collect())
        .collect();
    PreferenceOrder::weak(m, buckets).unwrap()
}

pub fn weak_profile(min_m: usize, max_m: usize, max_n: usize) -> impl Strategy<Value = Profile> {
    (min_m..=max_m).prop_flat_map(move |m| {
        prop::collection::vec(prop::collection::vec(0..m, m), 1..=max_n).prop_map(move |vs| {
            Profile::new(m, vs.iter().map(|l| from_levels(l)).collect()).unwrap()
        })
    })
}

/// Weak profile whose first vote is a total order.
pub fn weak_profile_with_total(min_m: usize, max_m: usize, max_n: usize) -> impl Strategy<Value = Profile> {
    (min_m..=max_m).prop_flat_map(move |m| {
        (
            Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(prop::collection::vec(0..m, m), 0..max_n),
        )
            .prop_map(move |(t, vs)| {
                let mut votes = vec![total(&t)];
                votes.extend(vs.iter().map(|l| from_levels(l)));
                Profile::new(m, votes).unwrap()
            })
    })
}

/// Exhaustive search over all axes with the per-axis checker.
pub fn brute_force(profile: &Profile, notion: Notion) -> bool {
    let m = profile.num_candidates();
    (0..m).permutations(m).any(|p| {
        let a = Axis::new(p.into_iter().map(c).collect()).unwrap();
        check_on_axis(profile, &a, notion).unwrap().is_consistent()
    })
}

/// Top order ranking a prefix of `perm` of length `k`.
pub fn top_of(perm: &[usize], k: usize) -> PreferenceOrder {
    top(perm.len(), &perm[..k.min(perm.len())])
}

pub fn top_profile(min_m: usize, max_m: usize, max_n: usize) -> impl Strategy<Value = Profile> {
    (min_m..=max_m).prop_flat_map(move |m| {
        prop::collection::vec((Just((0..m).collect::<Vec<_>>()).prop_shuffle(), 0..=m), 1..=max_n).prop_map(
            move |vs| Profile::new(m, vs.iter().map(|(p, k)| top_of(p, *k)).collect()).unwrap(),
        )
    })
}

/// A total order single-peaked on `axis`: peak at `peak`, then `sides[i]`
/// chooses whether the next candidate comes from the left (true) or right.
pub fn sp_total(axis: &[usize], peak: usize, sides: &[bool]) -> Vec<usize> {
    let m = axis.len();
    let (mut l, mut r) = (peak as isize - 1, peak + 1);
    let mut out = vec![axis[peak]];
    for &side in &sides[..m - 1] {
        let take_left = l >= 0 && (r >= m || side);
        if take_left {
            out.push(axis[l as usize]);
            l -= 1;
        } else {
            out.push(axis[r]);
            r += 1;
        }
    }
    out
}

/// Top orders that are single-peaked on a hidden axis.
pub fn planted_top_profile(min_m: usize, max_m: usize, max_n: usize) -> impl Strategy<Value = (Vec<usize>, Profile)> {
    (min_m..=max_m).prop_flat_map(move |m| {
        (
            Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec((0..m, prop::collection::vec(any::<bool>(), m), 0..=m), 1..=max_n),
        )
            .prop_map(move |(axis, vs)| {
                let votes = vs.iter().map(|(peak, sides, k)| top_of(&sp_total(&axis, *peak, sides), *k)).collect();
                (axis, Profile::new(m, votes).unwrap())
            })
    })
}

/// Local weak order: `None` entries are isolated.
pub fn from_opt_levels(levels: &[Option<usize>]) -> PreferenceOrder {
    let m = levels.len();
    let buckets: Vec<Vec<CandidateId>> = levels
        .iter()
        .flatten()
        .copied()
        .sorted()
        .dedup()
        .map(|l| (0..m).filter(|&i| levels[i] == Some(l)).map(c).collect())
        .collect();
    PreferenceOrder::local_weak(m, buckets).unwrap()
}

/// Local weak profile whose first vote is a total order.
pub fn local_weak_profile_with_total(min_m: usize, max_m: usize, max_n: usize) -> impl Strategy<Value = Profile> {
    (min_m..=max_m).prop_flat_map(move |m| {
        (
            Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(prop::collection::vec(prop::option::of(0..m), m), 0..max_n),
        )
            .prop_map(move |(t, vs)| {
                let mut votes = vec![total(&t)];
                votes.extend(vs.iter().map(|l| from_opt_levels(l)));
                Profile::new(m, votes).unwrap()
            })
    })
}

/// Some order of `0..n` puts every triple's middle element between its ends.
pub fn betweenness_solvable(n: usize, triples: &[(usize, usize, usize)]) -> bool {
    (0..n).permutations(n).any(|perm| {
        let mut pos = vec![0; n];
        for (i, &e) in perm.iter().enumerate() {
            pos[e] = i;
        }
        triples
            .iter()
            .all(|&(a, b, c)| (pos[a] < pos[b] && pos[b] < pos[c]) || (pos[c] < pos[b] && pos[b] < pos[a]))
    })
}

/// Some two-colouring of `0..n` leaves no set monochromatic.
pub fn set_splitting_solvable(n: usize, sets: &[Vec<usize>]) -> bool {
    (0u32..1 << n).any(|mask| {
        sets.iter().all(|s| {
            let sides = s.iter().map(|&e| mask >> e & 1).collect::<Vec<_>>();
            sides.contains(&0) && sides.contains(&1)
        })
    })
}

/// Triples `(a, b, c)` with `a < c`: one per betweenness constraint, since
/// `(a, b, c)` and `(c, b, a)` say the same thing.
pub fn betweenness_constraints(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for c in a + 1..n {
            for b in (0..n).filter(|&b| b != a && b != c) {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Every total order reachable by removing a uniquely-last candidate of some
/// vote at each step, listed best first.
pub fn all_implicit_guiding_orders(profile: &Profile) -> Vec<Vec<CandidateId>> {
    fn rec(profile: &Profile, left: &mut Vec<CandidateId>, bottom_up: &mut Vec<CandidateId>, out: &mut Vec<Vec<CandidateId>>) {
        if left.len() <= 1 {
            let mut o = bottom_up.clone();
            o.extend(left.iter().copied());
            o.reverse();
            out.push(o);
            return;
        }
        let mut cands: Vec<CandidateId> = Vec::new();
        for v in profile.votes() {
            let worst = left.iter().filter_map(|&x| v.level(x)).max().unwrap();
            let at: Vec<CandidateId> = left.iter().copied().filter(|&x| v.level(x) == Some(worst)).collect();
            if at.len() == 1 && !cands.contains(&at[0]) {
                cands.push(at[0]);
            }
        }
        for x in cands {
            left.retain(|&y| y != x);
            bottom_up.push(x);
            rec(profile, left, bottom_up, out);
            bottom_up.pop();
            left.push(x);
            left.sort();
        }
    }
    let mut out = Vec::new();
    let mut left: Vec<CandidateId> = (0..profile.num_candidates()).map(c).collect();
    rec(profile, &mut left, &mut Vec::new(), &mut out);
    out
}
