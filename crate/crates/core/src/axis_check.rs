//! Forbidden-pattern detection against a fixed axis.
//!
//! A vote is possibly single-peaked on an axis iff it has neither a v-valley
//! nor a u-valley. For local weak orders (and anything tighter) every
//! u-valley already implies a v-valley, so only genuinely partial votes pay
//! for the cubic u-valley scan. Witnesses are the first pattern in
//! lexicographic order of axis positions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Axis, CandidateId, OrderClass, PreferenceOrder, Profile, Verdict};

/// A forbidden substructure. Candidates are listed in axis order except for
/// `UValley`, which follows the defining roles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "candidates", rename_all = "snake_case")]
pub enum Pattern {
    /// `c₁ ⊳ c₂ ⊳ c₃` with `c₁ ≻ c₂` and `c₃ ≻ c₂`.
    VValley(CandidateId, CandidateId, CandidateId),
    /// `(a, b, c, d)`: `a ⊳ b ⊳ d`, `a ⊳ c ⊳ d`, `a ≻ b` and `d ≻ c`.
    UValley(CandidateId, CandidateId, CandidateId, CandidateId),
    /// Axis neighbours the vote ranks as tied.
    Plateau(CandidateId, CandidateId),
    /// `a ⊳ b ⊳ c` with `a ≻ b ∼ c` or `c ≻ b ∼ a`.
    NonpeakPlateau(CandidateId, CandidateId, CandidateId),
    /// Three candidates tied at the top: some extension has a v-valley.
    WidePeak(CandidateId, CandidateId, CandidateId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValleyWitness {
    pub vote: usize,
    pub pattern: Pattern,
}

impl fmt::Display for ValleyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vote {}: {:?}", self.vote, self.pattern)
    }
}

/// Single-peakedness notions for incomplete or weak preferences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Notion {
    /// Possibly single-peaked: some extension of every vote is single-peaked.
    Possibly,
    /// Single-plateaued (weak orders).
    Plateaued,
    /// Black single-peaked (weak orders).
    Black,
    /// Necessarily single-peaked: every extension is single-peaked.
    Necessarily,
}

impl Notion {
    pub const ALL: [Notion; 4] = [
        Notion::Possibly,
        Notion::Plateaued,
        Notion::Black,
        Notion::Necessarily,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Notion::Possibly => "psp",
            Notion::Plateaued => "plateaued",
            Notion::Black => "black",
            Notion::Necessarily => "necessary",
        }
    }
}

fn check_sizes(m: usize, axis: &Axis) -> Result<()> {
    if axis.len() != m {
        return Err(Error::SizeMismatch {
            expected: m,
            found: axis.len(),
        });
    }
    Ok(())
}

/// `(level, candidate)` along the axis, skipping candidates without a level.
fn leveled_sequence(vote: &PreferenceOrder, axis: &Axis) -> Option<Vec<(u32, CandidateId)>> {
    let levels = vote.levels()?;
    Some(
        axis.order()
            .iter()
            .filter_map(|&c| levels[c.index()].map(|l| (l, c)))
            .collect(),
    )
}

/// Strict suffix minima: `out[j] = min(seq[j+1..])`, `u32::MAX` past the end.
fn suffix_min_after(seq: &[(u32, CandidateId)]) -> Vec<u32> {
    let mut out = vec![u32::MAX; seq.len()];
    let mut acc = u32::MAX;
    for j in (0..seq.len()).rev() {
        out[j] = acc;
        acc = acc.min(seq[j].0);
    }
    out
}

fn v_valley_leveled(seq: &[(u32, CandidateId)]) -> Option<Pattern> {
    let k = seq.len();
    if k < 3 {
        return None;
    }
    let after = suffix_min_after(seq);
    let good: Vec<bool> = (0..k).map(|j| after[j] < seq[j].0).collect();
    // best[p] = max level of a valid valley bottom strictly right of p.
    let mut best = vec![None; k];
    let mut acc: Option<u32> = None;
    for p in (0..k).rev() {
        best[p] = acc;
        if good[p] {
            acc = Some(acc.map_or(seq[p].0, |a| a.max(seq[p].0)));
        }
    }
    let p1 = (0..k).find(|&p| best[p].is_some_and(|b| b > seq[p].0))?;
    let p2 = (p1 + 1..k).find(|&j| good[j] && seq[j].0 > seq[p1].0)?;
    let p3 = (p2 + 1..k).find(|&q| seq[q].0 < seq[p2].0)?;
    Some(Pattern::VValley(seq[p1].1, seq[p2].1, seq[p3].1))
}

fn v_valley_relation(vote: &PreferenceOrder, axis: &Axis) -> Option<Pattern> {
    let order = axis.order();
    let k = order.len();
    // right[j] = first q > j with order[q] ≻ order[j].
    let right: Vec<Option<usize>> = (0..k)
        .map(|j| (j + 1..k).find(|&q| vote.prefers(order[q], order[j])))
        .collect();
    for p1 in 0..k {
        for p2 in p1 + 1..k {
            if vote.prefers(order[p1], order[p2]) {
                if let Some(p3) = right[p2] {
                    return Some(Pattern::VValley(order[p1], order[p2], order[p3]));
                }
            }
        }
    }
    None
}

/// The first v-valley of `vote` on `axis`, if any.
pub fn has_v_valley(vote: &PreferenceOrder, axis: &Axis) -> Option<Pattern> {
    match leveled_sequence(vote, axis) {
        Some(seq) => v_valley_leveled(&seq),
        None => v_valley_relation(vote, axis),
    }
}

/// The first u-valley of `vote` on `axis`, ordered by the positions of the
/// outer pair `(a, d)` and then of `b` and `c`.
pub fn has_u_valley(vote: &PreferenceOrder, axis: &Axis) -> Option<Pattern> {
    let order = axis.order();
    let k = order.len();
    for pa in 0..k {
        let a = order[pa];
        for pd in pa + 3..k {
            let d = order[pd];
            let bs: Vec<usize> = (pa + 1..pd).filter(|&p| vote.prefers(a, order[p])).collect();
            if bs.is_empty() {
                continue;
            }
            let cs: Vec<usize> = (pa + 1..pd).filter(|&p| vote.prefers(d, order[p])).collect();
            let pick = bs
                .iter()
                .find_map(|&b| cs.iter().find(|&&c| c != b).map(|&c| (b, c)));
            if let Some((pb, pc)) = pick {
                return Some(Pattern::UValley(a, order[pb], order[pc], d));
            }
        }
    }
    None
}

/// Lemma-1 style test for one vote: a v-valley, or a u-valley for
/// partial votes.
pub fn vote_psp_violation(vote: &PreferenceOrder, axis: &Axis) -> Option<Pattern> {
    has_v_valley(vote, axis).or_else(|| {
        if vote.class() == OrderClass::Partial {
            has_u_valley(vote, axis)
        } else {
            None
        }
    })
}

fn first_violation<F>(profile: &Profile, axis: &Axis, mut check: F) -> Result<Verdict>
where
    F: FnMut(&PreferenceOrder) -> Result<Option<Pattern>>,
{
    check_sizes(profile.num_candidates(), axis)?;
    for (i, v) in profile.votes().iter().enumerate() {
        if let Some(pattern) = check(v)? {
            return Ok(Verdict::NotConsistent(
                ValleyWitness { vote: i, pattern }.into(),
            ));
        }
    }
    Ok(Verdict::Consistent(axis.clone()))
}

pub fn is_possibly_sp_on_axis(profile: &Profile, axis: &Axis) -> Result<Verdict> {
    first_violation(profile, axis, |v| Ok(vote_psp_violation(v, axis)))
}

fn weak_sequence(vote: &PreferenceOrder, axis: &Axis) -> Result<Vec<(u32, CandidateId)>> {
    if !vote.class().within(OrderClass::Weak) {
        return Err(Error::Class {
            vote: 0,
            found: vote.class(),
            required: OrderClass::Weak,
        });
    }
    Ok(leveled_sequence(vote, axis).expect("weak orders are stored by level"))
}

/// First pair of axis neighbours tied in `vote` (weak orders only).
pub fn has_plateau(vote: &PreferenceOrder, axis: &Axis) -> Result<Option<Pattern>> {
    let seq = weak_sequence(vote, axis)?;
    Ok(seq
        .windows(2)
        .find(|w| w[0].0 == w[1].0)
        .map(|w| Pattern::Plateau(w[0].1, w[1].1)))
}

/// First nonpeak plateau of `vote` on `axis` (weak orders only).
pub fn has_nonpeak_plateau(vote: &PreferenceOrder, axis: &Axis) -> Result<Option<Pattern>> {
    let seq = weak_sequence(vote, axis)?;
    let k = seq.len();
    let lv = |i: usize| seq[i].0;
    let after = suffix_min_after(&seq);
    let mut next_same = vec![None; k];
    let mut later_eq = vec![false; k];
    let mut last_seen: Vec<Option<usize>> = vec![None; k.max(1) + 1];
    for j in (0..k).rev() {
        let l = lv(j) as usize;
        if l >= last_seen.len() {
            last_seen.resize(l + 1, None);
        }
        next_same[j] = last_seen[l];
        later_eq[j] = last_seen[l].is_some();
        last_seen[l] = Some(j);
    }
    // worse[p] = max level of a tied-with-later candidate strictly right of p.
    let mut worse = vec![None; k];
    let mut acc: Option<u32> = None;
    for p in (0..k).rev() {
        worse[p] = acc;
        if later_eq[p] {
            acc = Some(acc.map_or(lv(p), |a| a.max(lv(p))));
        }
    }
    let starts_left = |p: usize| worse[p].is_some_and(|w| w > lv(p));
    let starts_right = |p: usize| next_same[p].is_some_and(|q: usize| after[q] < lv(p));
    let Some(p1) = (0..k).find(|&p| starts_left(p) || starts_right(p)) else {
        return Ok(None);
    };
    let p2 = (p1 + 1..k)
        .find(|&j| {
            (lv(j) > lv(p1) && later_eq[j]) || (lv(j) == lv(p1) && after[j] < lv(j))
        })
        .expect("p1 admits a middle element");
    let p3 = if lv(p2) > lv(p1) {
        (p2 + 1..k).find(|&q| lv(q) == lv(p2))
    } else {
        (p2 + 1..k).find(|&q| lv(q) < lv(p2))
    }
    .expect("p2 admits a closing element");
    Ok(Some(Pattern::NonpeakPlateau(seq[p1].1, seq[p2].1, seq[p3].1)))
}

fn wide_peak(vote: &PreferenceOrder, axis: &Axis) -> Option<Pattern> {
    let top = vote.buckets()?.first()?;
    if top.len() < 3 {
        return None;
    }
    let mut three: Vec<CandidateId> = top.clone();
    three.sort_by_key(|&c| axis.position(c));
    Some(Pattern::WidePeak(three[0], three[1], three[2]))
}

fn with_vote_index<T>(i: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Class {
            found, required, ..
        } => Error::Class {
            vote: i,
            found,
            required,
        },
        other => other,
    })
}

fn weak_profile_check<F>(profile: &Profile, axis: &Axis, check: F) -> Result<Verdict>
where
    F: Fn(&PreferenceOrder) -> Result<Option<Pattern>>,
{
    profile.require_class(OrderClass::Weak)?;
    let mut i = 0;
    first_violation(profile, axis, |v| {
        let r = with_vote_index(i, check(v));
        i += 1;
        r
    })
}

pub fn check_plateaued_on_axis(profile: &Profile, axis: &Axis) -> Result<Verdict> {
    weak_profile_check(profile, axis, |v| {
        Ok(match has_v_valley(v, axis) {
            Some(p) => Some(p),
            None => has_nonpeak_plateau(v, axis)?,
        })
    })
}

pub fn check_black_on_axis(profile: &Profile, axis: &Axis) -> Result<Verdict> {
    weak_profile_check(profile, axis, |v| {
        Ok(match has_v_valley(v, axis) {
            Some(p) => Some(p),
            None => has_plateau(v, axis)?,
        })
    })
}

pub fn check_necessary_on_axis(profile: &Profile, axis: &Axis) -> Result<Verdict> {
    weak_profile_check(profile, axis, |v| {
        if let Some(p) = has_v_valley(v, axis) {
            return Ok(Some(p));
        }
        if let Some(p) = has_nonpeak_plateau(v, axis)? {
            return Ok(Some(p));
        }
        Ok(wide_peak(v, axis))
    })
}

/// Dispatches to the axis check for `notion`.
pub fn check_on_axis(profile: &Profile, axis: &Axis, notion: Notion) -> Result<Verdict> {
    match notion {
        Notion::Possibly => is_possibly_sp_on_axis(profile, axis),
        Notion::Plateaued => check_plateaued_on_axis(profile, axis),
        Notion::Black => check_black_on_axis(profile, axis),
        Notion::Necessarily => check_necessary_on_axis(profile, axis),
    }
}

/// Builds a total order extending `vote` that is single-peaked on `axis`,
/// ranking from the bottom: the rightmost remaining candidate when it is
/// minimal among the remaining ones, the leftmost otherwise.
pub fn extend_to_sp_total_order(vote: &PreferenceOrder, axis: &Axis) -> Result<PreferenceOrder> {
    check_sizes(vote.num_candidates(), axis)?;
    if let Some(pattern) = vote_psp_violation(vote, axis) {
        return Err(Error::Witness(ValleyWitness { vote: 0, pattern }));
    }
    let order = axis.order();
    let (mut lo, mut hi) = (0usize, order.len());
    let mut bottom_up = Vec::with_capacity(order.len());
    while lo < hi {
        let right = order[hi - 1];
        let right_is_minimal = !order[lo..hi - 1].iter().any(|&o| vote.prefers(right, o));
        if right_is_minimal {
            bottom_up.push(right);
            hi -= 1;
        } else {
            bottom_up.push(order[lo]);
            lo += 1;
        }
    }
    bottom_up.reverse();
    PreferenceOrder::total(&bottom_up)
}
