//! Axis construction guided by a total order on the candidates.
//!
//! Candidates are placed from the bottom of the guiding order upwards, each at
//! the innermost free position on the right or on the left. A placement is
//! ruled out when some vote would get a v-valley through the new candidate.
//! Every vote keeps the best level seen on each side and the best and worst
//! levels among the unplaced candidates, so one step costs O(n) and the
//! pointers into the level counts only ever move inwards.

use crate::error::{Error, Result};
use crate::model::{Axis, CandidateId, OrderClass, PreferenceOrder, Profile, Refusal, Verdict};

/// Candidates that must end up at the ends of the axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pins {
    pub left: Option<CandidateId>,
    pub right: Option<CandidateId>,
}

/// Per-vote level counts of the candidates not yet placed, with the best and
/// worst occupied levels.
struct Remaining {
    offset: usize,
    levels: usize,
    best: usize,
    worst: usize,
}

impl Remaining {
    fn is_empty(&self) -> bool {
        self.best > self.worst || self.levels == 0
    }
}

fn levels_of(v: &PreferenceOrder) -> &[Option<u32>] {
    v.levels().expect("weak orders are stored by level")
}

struct LevelCounts<'a> {
    votes: Vec<&'a PreferenceOrder>,
    /// Level of candidate `c` in vote `k` at `c * n + k`, so one step reads
    /// a single contiguous row.
    table: Vec<u32>,
    counts: Vec<u32>,
    rem: Vec<Remaining>,
}

impl<'a> LevelCounts<'a> {
    fn new(m: usize, votes: Vec<&'a PreferenceOrder>) -> Self {
        let mut counts = Vec::new();
        let mut rem = Vec::with_capacity(votes.len());
        for v in &votes {
            let buckets = v.buckets().expect("weak orders are stored by level");
            let offset = counts.len();
            counts.extend(buckets.iter().map(|b| b.len() as u32));
            rem.push(Remaining {
                offset,
                levels: buckets.len(),
                best: 0,
                worst: buckets.len().saturating_sub(1),
            });
        }
        let all_levels: Vec<&[Option<u32>]> = votes.iter().map(|v| levels_of(v)).collect();
        let mut table = Vec::with_capacity(m * votes.len());
        for c in 0..m {
            table.extend(all_levels.iter().map(|l| l[c].expect("weak orders rank every candidate")));
        }
        LevelCounts {
            votes,
            table,
            counts,
            rem,
        }
    }

    /// Levels of `c` in every vote.
    fn row(&self, c: CandidateId) -> &[u32] {
        let n = self.votes.len();
        &self.table[c.index() * n..(c.index() + 1) * n]
    }

    fn remove(&mut self, c: CandidateId) {
        let n = self.votes.len();
        for k in 0..n {
            let r = &mut self.rem[k];
            let l = self.table[c.index() * n + k] as usize;
            self.counts[r.offset + l] -= 1;
            while r.best <= r.worst && self.counts[r.offset + r.best] == 0 {
                r.best += 1;
            }
            while r.worst > r.best && self.counts[r.offset + r.worst] == 0 {
                r.worst -= 1;
            }
        }
    }

    /// The only unplaced candidate on the worst remaining level of vote `k`,
    /// if that level holds exactly one.
    fn unique_last(&self, k: usize, placed: &[bool]) -> Option<CandidateId> {
        let r = &self.rem[k];
        if r.is_empty() || self.counts[r.offset + r.worst] != 1 {
            return None;
        }
        let buckets = self.votes[k].buckets().expect("weak orders are stored by level");
        buckets[r.worst].iter().copied().find(|c| !placed[c.index()])
    }
}

fn require_weak(profile: &Profile) -> Result<()> {
    profile.require_class(OrderClass::Weak)
}

/// Builds a total order by repeatedly removing a candidate that some vote
/// ranks uniquely last among the candidates still present. Votes are scanned
/// in profile order and the first such candidate is taken. Returns `None`
/// when at some point no vote has a unique last candidate.
pub fn find_implicit_guiding_vote(profile: &Profile) -> Result<Option<PreferenceOrder>> {
    require_weak(profile)?;
    let m = profile.num_candidates();
    let mut counts = LevelCounts::new(m, profile.votes().iter().collect());
    let mut placed = vec![false; m];
    let mut bottom_up = Vec::with_capacity(m);
    while bottom_up.len() < m {
        let remaining = m - bottom_up.len();
        let next = if remaining == 1 {
            (0..m).map(CandidateId).find(|c| !placed[c.index()])
        } else {
            (0..profile.num_votes()).find_map(|k| counts.unique_last(k, &placed))
        };
        let Some(c) = next else {
            return Ok(None);
        };
        placed[c.index()] = true;
        counts.remove(c);
        bottom_up.push(c);
    }
    bottom_up.reverse();
    PreferenceOrder::total(&bottom_up).map(Some)
}

/// Runs the guided placement. `guiding` must be a total order; when it is
/// not one of the profile's votes it is checked as an extra vote (reported
/// with index `profile.num_votes()`).
///
/// `pins.right` must be the guiding order's last candidate, which seeds the
/// right end. `pins.left` is forced to the left side when its turn comes and
/// must be the first candidate placed there.
pub fn guided_recognize(profile: &Profile, guiding: &PreferenceOrder, pins: Pins) -> Result<Verdict> {
    require_weak(profile)?;
    let m = profile.num_candidates();
    if guiding.num_candidates() != m {
        return Err(Error::SizeMismatch {
            expected: m,
            found: guiding.num_candidates(),
        });
    }
    if !guiding.is_total() {
        return Err(Error::Class {
            vote: profile.num_votes(),
            found: guiding.class(),
            required: OrderClass::Total,
        });
    }
    if m == 0 {
        return Ok(Verdict::Consistent(Axis::identity(0)));
    }
    let order: Vec<CandidateId> = guiding
        .buckets()
        .expect("total orders are stored by level")
        .iter()
        .rev()
        .map(|b| b[0])
        .collect();

    let mut votes: Vec<&PreferenceOrder> = profile.votes().iter().collect();
    if !profile.votes().contains(guiding) {
        votes.push(guiding);
    }
    let n = votes.len();
    let mut counts = LevelCounts::new(m, votes);
    let mut best_left: Vec<Option<usize>> = vec![None; n];
    let mut best_right: Vec<Option<usize>> = vec![None; n];

    let first = order[0];
    if let Some(r) = pins.right {
        if r != first {
            return Err(Error::Pin(r));
        }
    }
    if pins.left == Some(first) && m > 1 {
        return Err(Error::Pin(first));
    }
    counts.remove(first);
    for (k, &l) in counts.row(first).iter().enumerate() {
        best_right[k] = Some(l as usize);
    }
    let mut left: Vec<CandidateId> = Vec::new();
    let mut right: Vec<CandidateId> = vec![first];

    for &ci in &order[1..] {
        counts.remove(ci);
        let mut right_blocked_by = None;
        let mut left_blocked_by = None;
        for (k, &l) in counts.row(ci).iter().enumerate() {
            let l = l as usize;
            let r = &counts.rem[k];
            let (bl, br) = (best_left[k], best_right[k]);
            if !r.is_empty() {
                let (best_rem, worst_rem) = (r.best, r.worst);
                debug_assert!(
                    !(bl.is_some_and(|b| b < l.max(worst_rem)) && br.is_some_and(|b| b < l.max(worst_rem))),
                    "an unplaced candidate lies below both sides in vote {k}"
                );
                let above_some_rem = l < worst_rem;
                let below_some_rem = best_rem < l;
                let r1 = above_some_rem && bl.is_some_and(|b| b < worst_rem);
                let r2 = below_some_rem && br.is_some_and(|b| b < l);
                let l1 = above_some_rem && br.is_some_and(|b| b < worst_rem);
                let l2 = below_some_rem && bl.is_some_and(|b| b < l);
                if right_blocked_by.is_none() && (r1 || r2) {
                    right_blocked_by = Some(k);
                }
                if left_blocked_by.is_none() && (l1 || l2) {
                    left_blocked_by = Some(k);
                }
            }
        }
        let pinned_left = pins.left == Some(ci);
        if pinned_left && !left.is_empty() {
            return Err(Error::Pin(ci));
        }
        let go_right = right_blocked_by.is_none() && !pinned_left;
        if go_right {
            right.push(ci);
        } else if left_blocked_by.is_none() {
            if let Some(p) = pins.left {
                if left.is_empty() && p != ci {
                    return Err(Error::Pin(p));
                }
            }
            left.push(ci);
        } else if pinned_left {
            return Err(Error::Pin(ci));
        } else {
            return Ok(Verdict::refused(Refusal::Blocked {
                candidate: ci,
                right_blocked_by: right_blocked_by.expect("blocked on the right"),
                left_blocked_by: left_blocked_by.expect("blocked on the left"),
            }));
        }
        let side = if go_right { &mut best_right } else { &mut best_left };
        for (k, &l) in counts.row(ci).iter().enumerate() {
            let l = l as usize;
            side[k] = Some(side[k].map_or(l, |b| b.min(l)));
        }
    }
    if let Some(p) = pins.left {
        if left.first() != Some(&p) {
            return Err(Error::Pin(p));
        }
    }
    right.reverse();
    left.extend(right);
    Axis::new(left).map(Verdict::Consistent)
}

/// Guided recognition with an implicit guiding vote, or `None` when the
/// profile has none.
pub fn recognize_guided(profile: &Profile) -> Result<Option<Verdict>> {
    match find_implicit_guiding_vote(profile)? {
        Some(g) => guided_recognize(profile, &g, Pins::default()).map(Some),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: usize) -> CandidateId {
        CandidateId(i)
    }

    fn weak(m: usize, b: &[&[usize]]) -> PreferenceOrder {
        PreferenceOrder::weak(m, b.iter().map(|x| x.iter().map(|&i| c(i)).collect()).collect()).unwrap()
    }

    fn total(order: &[usize]) -> PreferenceOrder {
        PreferenceOrder::total(&order.iter().map(|&i| c(i)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn lone_guiding_vote_is_consistent() {
        let g = total(&[2, 0, 3, 1]);
        let p = Profile::new(4, vec![g.clone()]).unwrap();
        let v = guided_recognize(&p, &g, Pins::default()).unwrap();
        // Every candidate goes right, so the axis is the guiding order.
        assert_eq!(v.axis().unwrap().order(), &[c(2), c(0), c(3), c(1)]);
    }

    #[test]
    fn no_unique_last() {
        let p = Profile::new(2, vec![weak(2, &[&[0, 1]])]).unwrap();
        assert_eq!(find_implicit_guiding_vote(&p).unwrap(), None);
    }

    #[test]
    fn right_pin_must_seed() {
        let g = total(&[0, 1, 2]);
        let p = Profile::new(3, vec![g.clone()]).unwrap();
        let pins = Pins {
            left: None,
            right: Some(c(1)),
        };
        assert_eq!(guided_recognize(&p, &g, pins), Err(Error::Pin(c(1))));
    }

    #[test]
    fn local_weak_votes_are_rejected() {
        let v = PreferenceOrder::local_weak(3, vec![vec![c(0)], vec![c(1)]]).unwrap();
        let p = Profile::new(3, vec![v]).unwrap();
        assert!(matches!(find_implicit_guiding_vote(&p), Err(Error::Class { .. })));
    }
}
