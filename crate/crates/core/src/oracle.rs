//! Exhaustive reference recognizers for small profiles, plus the pairwise
//! majority relation.
//!
//! Axes are enumerated in lexicographic order, skipping those whose first
//! candidate has a larger id than the last one. An axis and its reverse
//! accept the same profiles, and the lexicographically least witness always
//! starts with the smaller end, so the first hit is the least witness
//! overall.

use itertools::Itertools;

use crate::axis_check::{check_on_axis, Notion};
use crate::error::{Error, Result};
use crate::model::{Axis, CandidateId, OrderClass, PreferenceOrder, Profile, Refusal, Verdict};

/// Largest candidate count accepted by default.
pub const DEFAULT_BOUND: usize = 8;

fn check_bound(m: usize, bound: usize) -> Result<()> {
    if m > bound {
        Err(Error::Size { m, bound })
    } else {
        Ok(())
    }
}

/// All axes on `m` candidates up to reversal, in lexicographic order.
pub fn axes(m: usize) -> impl Iterator<Item = Axis> {
    (0..m)
        .permutations(m)
        .filter(|p| p.first() <= p.last())
        .map(|p| Axis::new(p.into_iter().map(CandidateId).collect()).expect("a permutation"))
}

pub fn oracle_recognize(profile: &Profile, notion: Notion) -> Result<Verdict> {
    oracle_recognize_with_bound(profile, notion, DEFAULT_BOUND)
}

/// Consistent with the lexicographically least witnessing axis, or
/// `NoAxis`. Necessary single-peakedness is decided by enumerating every
/// linear extension of every vote.
pub fn oracle_recognize_with_bound(profile: &Profile, notion: Notion, bound: usize) -> Result<Verdict> {
    let m = profile.num_candidates();
    check_bound(m, bound)?;
    if notion != Notion::Possibly {
        profile.require_class(OrderClass::Weak)?;
    }
    for axis in axes(m) {
        let ok = match notion {
            Notion::Necessarily => profile.votes().iter().all(|v| {
                LinearExtensions::new(v).all(|t| total_is_single_peaked(&t, &axis))
            }),
            _ => check_on_axis(profile, &axis, notion)?.is_consistent(),
        };
        if ok {
            return Ok(Verdict::Consistent(axis));
        }
    }
    Ok(Verdict::refused(Refusal::NoAxis))
}

/// True when the ranking `order` (best first) rises to a single peak and
/// falls along `axis`.
pub fn total_is_single_peaked(order: &[CandidateId], axis: &Axis) -> bool {
    let mut rank = vec![0usize; order.len()];
    for (r, c) in order.iter().enumerate() {
        rank[c.index()] = r;
    }
    let seq: Vec<usize> = axis.order().iter().map(|c| rank[c.index()]).collect();
    let Some(peak) = (0..seq.len()).min_by_key(|&i| seq[i]) else {
        return true;
    };
    seq[..=peak].windows(2).all(|w| w[0] > w[1])
        && seq[peak..].windows(2).all(|w| w[0] < w[1])
}

/// Streams the linear extensions of a vote, each as a ranking best first.
pub fn extension_enumerate(vote: &PreferenceOrder, bound: usize) -> Result<LinearExtensions> {
    check_bound(vote.num_candidates(), bound)?;
    Ok(LinearExtensions::new(vote))
}

/// Iterator over linear extensions in lexicographic order of rankings.
pub struct LinearExtensions {
    m: usize,
    beats: Vec<Vec<bool>>,
    /// Number of unchosen candidates beating each candidate.
    blockers: Vec<usize>,
    chosen: Vec<bool>,
    prefix: Vec<CandidateId>,
    /// For each depth, the next candidate id to try.
    next: Vec<usize>,
    done: bool,
}

impl LinearExtensions {
    fn new(vote: &PreferenceOrder) -> Self {
        let m = vote.num_candidates();
        let beats: Vec<Vec<bool>> = (0..m)
            .map(|a| (0..m).map(|b| vote.prefers(CandidateId(a), CandidateId(b))).collect())
            .collect();
        let blockers = (0..m).map(|b| (0..m).filter(|&a| beats[a][b]).count()).collect();
        LinearExtensions {
            m,
            beats,
            blockers,
            chosen: vec![false; m],
            prefix: Vec::with_capacity(m),
            next: vec![0],
            done: false,
        }
    }

    fn push(&mut self, c: usize) {
        self.chosen[c] = true;
        for b in 0..self.m {
            if self.beats[c][b] {
                self.blockers[b] -= 1;
            }
        }
        self.prefix.push(CandidateId(c));
        self.next.push(0);
    }

    fn pop(&mut self) {
        self.next.pop();
        let c = self.prefix.pop().expect("non-empty prefix").index();
        self.chosen[c] = false;
        for b in 0..self.m {
            if self.beats[c][b] {
                self.blockers[b] += 1;
            }
        }
    }
}

impl Iterator for LinearExtensions {
    type Item = Vec<CandidateId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if self.m == 0 {
            self.done = true;
            return Some(Vec::new());
        }
        loop {
            if self.prefix.len() == self.m {
                let out = self.prefix.clone();
                self.pop();
                return Some(out);
            }
            let depth = self.prefix.len();
            let start = self.next[depth];
            let pick = (start..self.m).find(|&c| !self.chosen[c] && self.blockers[c] == 0);
            match pick {
                Some(c) => {
                    self.next[depth] = c + 1;
                    self.push(c);
                }
                None => {
                    if depth == 0 {
                        self.done = true;
                        return None;
                    }
                    self.pop();
                }
            }
        }
    }
}

/// Strict pairwise majority over weighted votes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajorityRelation {
    m: usize,
    wins: Vec<bool>,
}

impl MajorityRelation {
    /// More voters rank `a` above `b` than `b` above `a`.
    pub fn beats(&self, a: CandidateId, b: CandidateId) -> bool {
        self.wins[a.index() * self.m + b.index()]
    }

    pub fn pairs(&self) -> Vec<(CandidateId, CandidateId)> {
        (0..self.m)
            .flat_map(|a| (0..self.m).map(move |b| (CandidateId(a), CandidateId(b))))
            .filter(|&(a, b)| self.beats(a, b))
            .collect()
    }
}

pub fn majority_relation(profile: &Profile) -> Result<MajorityRelation> {
    profile.require_class(OrderClass::Weak)?;
    let m = profile.num_candidates();
    let mut support = vec![0u64; m * m];
    for (v, w) in profile.iter() {
        let buckets = v.buckets().expect("weak orders are stored by level");
        let mut above: Vec<CandidateId> = Vec::with_capacity(m);
        for bucket in buckets {
            for &b in bucket {
                for &a in &above {
                    support[a.index() * m + b.index()] += w;
                }
            }
            above.extend_from_slice(bucket);
        }
    }
    let wins = (0..m * m)
        .map(|i| {
            let (a, b) = (i / m, i % m);
            support[a * m + b] > support[b * m + a]
        })
        .collect();
    Ok(MajorityRelation { m, wins })
}

/// Candidates no other candidate beats by strict majority.
pub fn weak_condorcet_winners(profile: &Profile) -> Result<Vec<CandidateId>> {
    let maj = majority_relation(profile)?;
    let m = profile.num_candidates();
    Ok((0..m)
        .map(CandidateId)
        .filter(|&a| !(0..m).any(|b| maj.beats(CandidateId(b), a)))
        .collect())
}
