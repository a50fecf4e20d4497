//! Axis construction for top orders without a guiding vote.
//!
//! The profile is split into components of candidates linked by being ranked
//! together in some vote. For each component every candidate is tried as the
//! left end. The axis then grows to the right: a vote whose peak is already
//! placed fixes the order of its remaining ranked candidates (`oplus`); when
//! no such vote is left, a vote ranking the rightmost candidate below some
//! unplaced ones is handed to the guided placement on a small subprofile
//! whose right end is a stand-in for everything not yet considered.

use fixedbitset::FixedBitSet;

use crate::axis_check::is_possibly_sp_on_axis;
use crate::error::{Error, Result};
use crate::guided::{guided_recognize, Pins};
use crate::model::{Axis, CandidateId, OrderClass, PreferenceOrder, Profile, Refusal, Verdict};

/// Candidates a top order ranks strictly, best first. A bottom class of two
/// or more candidates is unranked; a single bottom candidate counts as
/// ranked.
pub fn ranked(vote: &PreferenceOrder) -> Vec<CandidateId> {
    let buckets = vote.buckets().expect("top orders are stored by level");
    let k = match buckets.last() {
        Some(b) if b.len() >= 2 => buckets.len() - 1,
        _ => buckets.len(),
    };
    buckets[..k].iter().map(|b| b[0]).collect()
}

/// Candidate sets of the graph joining candidates ranked in a common vote,
/// each sorted, ordered by smallest member.
pub fn connected_components(profile: &Profile) -> Vec<Vec<CandidateId>> {
    let m = profile.num_candidates();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for v in profile.votes() {
        let r = ranked(v);
        for w in r.windows(2) {
            let (a, b) = (find(&mut parent, w[0].index()), find(&mut parent, w[1].index()));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<CandidateId>> = vec![Vec::new(); m];
    for c in 0..m {
        let r = find(&mut parent, c);
        groups[r].push(CandidateId(c));
    }
    groups.retain(|g| !g.is_empty());
    groups
}

/// True when `levels` (lower is better) has no entry strictly worse than
/// some entry on each side.
fn no_v_valley(seq: impl Iterator<Item = u32>) -> bool {
    // Levels may improve until the peak and only worsen after it.
    let mut descending = true;
    let mut prev = u32::MAX;
    for l in seq {
        if descending {
            if l > prev {
                descending = false;
            }
        } else if l < prev {
            return false;
        }
        prev = l;
    }
    true
}

fn level(v: &PreferenceOrder, c: CandidateId) -> u32 {
    v.level(c).expect("top orders rank every candidate")
}

/// `A ⊕ V`: `axis` followed by the candidates `vote` ranks that are not yet
/// on it, in the vote's order. `None` when `vote`, restricted to the
/// extended axis, has a v-valley on it.
pub fn oplus(axis: &[CandidateId], vote: &PreferenceOrder) -> Option<Vec<CandidateId>> {
    let mut on_axis = FixedBitSet::with_capacity(vote.num_candidates());
    for &c in axis {
        on_axis.insert(c.index());
    }
    let mut out = axis.to_vec();
    out.extend(ranked(vote).into_iter().filter(|c| !on_axis.contains(c.index())));
    no_v_valley(out.iter().map(|&c| level(vote, c))).then_some(out)
}

/// Replaces the best-ranked member of `d` by a new candidate `x` with id
/// `vote.num_candidates()`; the replaced candidate moves to the bottom. When
/// the best members of `d` are tied at the bottom, or `vote` has none, `x`
/// is unranked instead.
pub fn rep_top(vote: &PreferenceOrder, d: &[CandidateId]) -> PreferenceOrder {
    let m = vote.num_candidates();
    let x = CandidateId(m);
    let mut buckets: Vec<Vec<CandidateId>> = vote.buckets().expect("top orders are stored by level").to_vec();
    let best = d.iter().copied().min_by_key(|&c| level(vote, c));
    match best {
        Some(c) if buckets[level(vote, c) as usize].len() == 1 => {
            buckets[level(vote, c) as usize] = vec![x];
            buckets.push(vec![c]);
        }
        _ if buckets.last().is_some_and(|b| b.len() >= 2) => buckets.last_mut().unwrap().push(x),
        _ => buckets.push(vec![x]),
    }
    PreferenceOrder::weak(m + 1, buckets).expect("rep_top keeps a partition")
}

/// Per candidate, the (at most two) votes whose sets of candidates ranked
/// strictly above it are maximal under inclusion.
#[derive(Clone, Debug)]
pub struct IntersectionIndex {
    maximal: Vec<Vec<usize>>,
}

impl IntersectionIndex {
    /// Fails with the first candidate that has three maximal sets or two
    /// overlapping ones; such a profile has no axis.
    pub fn build(profile: &Profile) -> std::result::Result<Self, CandidateId> {
        let m = profile.num_candidates();
        let rankings: Vec<Vec<CandidateId>> = profile.votes().iter().map(ranked).collect();
        let mut pos: Vec<Vec<u32>> = vec![vec![u32::MAX; m]; rankings.len()];
        let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
        for (k, r) in rankings.iter().enumerate() {
            for (p, &c) in r.iter().enumerate() {
                pos[k][c.index()] = p as u32;
                if p > 0 {
                    occurrences[c.index()].push((k, p));
                }
            }
        }
        // Prefix of vote `a` of length `pa` is inside prefix of vote `b` of
        // length `pb`.
        let within = |a: usize, pa: usize, b: usize, pb: usize| {
            pa <= pb && rankings[a][..pa].iter().all(|c| (pos[b][c.index()] as usize) < pb)
        };
        let mut maximal = vec![Vec::new(); m];
        for c in 0..m {
            let occ = &mut occurrences[c];
            occ.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
            let mut keep: Vec<(usize, usize)> = Vec::new();
            for &(k, p) in occ.iter() {
                if keep.iter().any(|&(j, q)| within(k, p, j, q)) {
                    continue;
                }
                if keep.len() == 2 {
                    return Err(CandidateId(c));
                }
                keep.push((k, p));
            }
            if let [(a, pa), (b, pb)] = keep[..] {
                if rankings[a][..pa].iter().any(|x| (pos[b][x.index()] as usize) < pb) {
                    return Err(CandidateId(c));
                }
            }
            maximal[c] = keep.into_iter().map(|(k, _)| k).collect();
        }
        Ok(IntersectionIndex { maximal })
    }

    /// A maximal vote for `rightmost` that does not rank `previous` above
    /// it (the first maximal vote when there is no such vote or no
    /// `previous`).
    pub fn intersecting_vote(
        &self,
        profile: &Profile,
        rightmost: CandidateId,
        previous: Option<CandidateId>,
    ) -> Option<usize> {
        let votes = &self.maximal[rightmost.index()];
        let above = |k: usize, p: CandidateId| profile.votes()[k].prefers(p, rightmost);
        votes
            .iter()
            .copied()
            .find(|&k| previous.is_none_or(|p| !above(k, p)))
            .or_else(|| votes.first().copied())
    }
}

enum Attempt {
    Axis(Vec<CandidateId>),
    Failed,
}

struct Component<'a> {
    profile: &'a Profile,
    rankings: Vec<Vec<CandidateId>>,
    peaked_at: Vec<Vec<usize>>,
    index: IntersectionIndex,
}

impl<'a> Component<'a> {
    fn new(profile: &'a Profile, rankings: Vec<Vec<CandidateId>>, index: IntersectionIndex) -> Self {
        let mut peaked_at = vec![Vec::new(); profile.num_candidates()];
        for (k, r) in rankings.iter().enumerate() {
            if let Some(&t) = r.first() {
                peaked_at[t.index()].push(k);
            }
        }
        Component {
            profile,
            rankings,
            peaked_at,
            index,
        }
    }

    fn attempt(&self, start: CandidateId) -> Result<Attempt> {
        let p = self.profile;
        let m = p.num_candidates();
        let n = p.num_votes();
        let mut axis = vec![start];
        let mut on_axis = FixedBitSet::with_capacity(m);
        on_axis.insert(start.index());
        let mut used = vec![false; n];
        // Per vote, a cursor past ranked candidates already on the axis.
        let mut cursor = vec![0usize; n];
        let mut i = 0;
        while i < axis.len() {
            let a_i = axis[i];
            for &k in &self.peaked_at[a_i.index()] {
                if used[k] {
                    continue;
                }
                used[k] = true;
                match oplus(&axis, &p.votes()[k]) {
                    Some(next) => {
                        for &c in &next[axis.len()..] {
                            on_axis.insert(c.index());
                        }
                        axis = next;
                    }
                    None => return Ok(Attempt::Failed),
                }
            }
            if axis.len() == i + 1 && axis.len() < m {
                let previous = i.checked_sub(1).map(|j| axis[j]);
                let Some(k) = self.index.intersecting_vote(p, a_i, previous) else {
                    return Ok(Attempt::Failed);
                };
                let r = &self.rankings[k];
                let Some(at) = r.iter().position(|&c| c == a_i) else {
                    return Ok(Attempt::Failed);
                };
                let upper = &r[..at];
                if upper.is_empty() || upper.iter().any(|c| on_axis.contains(c.index())) {
                    return Ok(Attempt::Failed);
                }
                let mut local: Vec<CandidateId> = upper.to_vec();
                local.push(a_i);
                let mut in_sub = on_axis.clone();
                for &c in &local {
                    in_sub.insert(c.index());
                }
                let sub = self.subprofile(&local, &in_sub, &mut cursor, &on_axis);
                let x = CandidateId(local.len());
                let guiding = sub.votes()[k].clone();
                let pins = Pins {
                    left: Some(CandidateId(local.len() - 1)),
                    right: Some(x),
                };
                match guided_recognize(&sub, &guiding, pins) {
                    Ok(Verdict::Consistent(a)) => {
                        let order = a.order();
                        debug_assert_eq!(order.first(), pins.left.as_ref());
                        debug_assert_eq!(order.last(), Some(&x));
                        for &c in &order[1..order.len() - 1] {
                            let c = local[c.index()];
                            on_axis.insert(c.index());
                            axis.push(c);
                        }
                    }
                    Ok(Verdict::NotConsistent(_)) | Err(Error::Pin(_)) => return Ok(Attempt::Failed),
                    Err(e) => return Err(e),
                }
            }
            i += 1;
        }
        Ok(if axis.len() == m {
            Attempt::Axis(axis)
        } else {
            Attempt::Failed
        })
    }

    /// Every vote with its best candidate outside the axis and `local`
    /// replaced by the stand-in, restricted to `local` plus the stand-in
    /// (last id).
    fn subprofile(
        &self,
        local: &[CandidateId],
        in_sub: &FixedBitSet,
        cursor: &mut [usize],
        on_axis: &FixedBitSet,
    ) -> Profile {
        let s = local.len() + 1;
        let votes = self
            .profile
            .votes()
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let r = &self.rankings[k];
                while cursor[k] < r.len() && on_axis.contains(r[cursor[k]].index()) {
                    cursor[k] += 1;
                }
                let mut j = cursor[k];
                while j < r.len() && in_sub.contains(r[j].index()) {
                    j += 1;
                }
                let buckets = v.buckets().expect("top orders are stored by level");
                let bottom = buckets.len() as u32 - 1;
                let unranked_bottom = buckets.last().is_some_and(|b| b.len() >= 2);
                let x_level = if j < r.len() {
                    level(v, r[j])
                } else if unranked_bottom {
                    bottom
                } else {
                    bottom + 1
                };
                let mut keyed: Vec<(u32, CandidateId)> = local
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (level(v, c), CandidateId(i)))
                    .collect();
                keyed.push((x_level, CandidateId(s - 1)));
                keyed.sort_unstable();
                let mut out: Vec<Vec<CandidateId>> = Vec::new();
                let mut last = None;
                for (l, c) in keyed {
                    if last != Some(l) {
                        out.push(Vec::new());
                        last = Some(l);
                    }
                    out.last_mut().unwrap().push(c);
                }
                PreferenceOrder::weak(s, out).expect("restriction keeps a partition")
            })
            .collect();
        Profile::new(s, votes).expect("sizes agree")
    }
}

enum Outcome {
    Axis(Vec<CandidateId>),
    Conflict(CandidateId),
    NoStart,
}

fn recognize_component(profile: &Profile) -> Result<Outcome> {
    let m = profile.num_candidates();
    if m <= 1 {
        return Ok(Outcome::Axis((0..m).map(CandidateId).collect()));
    }
    let index = match IntersectionIndex::build(profile) {
        Ok(ix) => ix,
        Err(c) => return Ok(Outcome::Conflict(c)),
    };
    let rankings: Vec<Vec<CandidateId>> = profile.votes().iter().map(ranked).collect();
    let comp = Component::new(profile, rankings, index);
    for start in 0..m {
        if let Attempt::Axis(a) = comp.attempt(CandidateId(start))? {
            return Ok(Outcome::Axis(a));
        }
    }
    Ok(Outcome::NoStart)
}

/// Possibly single-peaked consistency for top orders.
pub fn unguided_recognize(profile: &Profile) -> Result<Verdict> {
    profile.require_class(OrderClass::Top)?;
    let mut axis = Vec::with_capacity(profile.num_candidates());
    for comp in connected_components(profile) {
        match recognize_component(&profile.restrict(&comp))? {
            Outcome::Axis(a) => axis.extend(a.into_iter().map(|c| comp[c.index()])),
            Outcome::Conflict(c) => {
                return Ok(Verdict::refused(Refusal::UpperSetConflict {
                    candidate: comp[c.index()],
                }))
            }
            Outcome::NoStart => return Ok(Verdict::refused(Refusal::NoStartCandidate { component: comp })),
        }
    }
    let axis = Axis::new(axis)?;
    match is_possibly_sp_on_axis(profile, &axis)? {
        Verdict::Consistent(a) => Ok(Verdict::Consistent(a)),
        Verdict::NotConsistent(cert) => Err(Error::Verification(format!(
            "assembled axis {axis} fails the check: {cert:?}"
        ))),
    }
}

/// Runs the axis growth from a fixed left end on a connected profile of top
/// orders. `None` when this start does not lead to a complete axis.
pub fn extend_from(profile: &Profile, start: CandidateId) -> Result<Option<Axis>> {
    profile.require_class(OrderClass::Top)?;
    let m = profile.num_candidates();
    if start.index() >= m {
        return Err(Error::CandidateOutOfRange {
            candidate: start.index(),
            m,
        });
    }
    let Ok(index) = IntersectionIndex::build(profile) else {
        return Ok(None);
    };
    let rankings: Vec<Vec<CandidateId>> = profile.votes().iter().map(ranked).collect();
    let comp = Component::new(profile, rankings, index);
    match comp.attempt(start)? {
        Attempt::Axis(a) => Axis::new(a).map(Some),
        Attempt::Failed => Ok(None),
    }
}
