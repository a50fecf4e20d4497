//! Candidates, (possibly incomplete) preference orders, profiles and axes.
//!
//! Orders that are local weak or tighter are stored as indifference buckets
//! (best first) with a per-candidate level; isolated candidates of a local
//! weak order carry no level. Only genuinely partial orders keep a
//! transitively closed relation matrix.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::axis_check::ValleyWitness;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CandidateId(pub usize);

impl CandidateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for CandidateId {
    fn from(i: usize) -> Self {
        CandidateId(i)
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Order classes, from most to least informative. The derived ordering
/// follows containment: `Total < Top < Weak < LocalWeak < Partial`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderClass {
    Total,
    Top,
    Weak,
    LocalWeak,
    Partial,
}

impl OrderClass {
    pub const ALL: [OrderClass; 5] = [
        OrderClass::Total,
        OrderClass::Top,
        OrderClass::Weak,
        OrderClass::LocalWeak,
        OrderClass::Partial,
    ];

    /// True when every order of class `self` is also of class `other`.
    pub fn within(self, other: OrderClass) -> bool {
        self <= other
    }
}

impl fmt::Display for OrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrderClass::Total => "total",
            OrderClass::Top => "top",
            OrderClass::Weak => "weak",
            OrderClass::LocalWeak => "local weak",
            OrderClass::Partial => "partial",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Levels {
        level: Vec<Option<u32>>,
        buckets: Vec<Vec<CandidateId>>,
    },
    Relation {
        beats: Vec<FixedBitSet>,
    },
}

/// One voter's strict preference relation over `m` candidates.
///
/// `a ≻ b` is written `prefers(a, b)`. Two distinct candidates that are not
/// comparable are reported by `incomparable` (this covers both indifference
/// and missing information).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceOrder {
    m: usize,
    class: OrderClass,
    repr: Repr,
}

fn check_range(m: usize, c: CandidateId) -> Result<()> {
    if c.index() >= m {
        Err(Error::CandidateOutOfRange {
            candidate: c.index(),
            m,
        })
    } else {
        Ok(())
    }
}

impl PreferenceOrder {
    /// Builds the transitive closure of `pairs` (`(a, b)` meaning `a ≻ b`)
    /// and tags it with the tightest class it belongs to.
    pub fn from_pairs<I>(m: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (CandidateId, CandidateId)>,
    {
        let mut beats = vec![FixedBitSet::with_capacity(m); m];
        for (a, b) in pairs {
            check_range(m, a)?;
            check_range(m, b)?;
            if a == b {
                return Err(Error::Cycle(a));
            }
            beats[a.index()].insert(b.index());
        }
        // Warshall on bit rows.
        for k in 0..m {
            let row_k = beats[k].clone();
            for row in beats.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        if let Some(a) = (0..m).find(|&a| beats[a].contains(a)) {
            return Err(Error::Cycle(CandidateId(a)));
        }
        Ok(Self::from_closed(m, beats))
    }

    fn from_closed(m: usize, beats: Vec<FixedBitSet>) -> Self {
        let mut above = vec![0usize; m];
        let mut below = vec![0usize; m];
        for (a, row) in beats.iter().enumerate() {
            below[a] = row.count_ones(..);
            for b in row.ones() {
                above[b] += 1;
            }
        }
        let isolated: Vec<bool> = (0..m).map(|c| above[c] == 0 && below[c] == 0).collect();

        if let Some(buckets) = Self::weak_buckets(m, &beats, &above, |_| true) {
            return Self::from_bucket_parts(m, buckets, Vec::new());
        }
        if isolated.iter().any(|&i| i) {
            if let Some(buckets) = Self::weak_buckets(m, &beats, &above, |c| !isolated[c]) {
                let iso = (0..m).filter(|&c| isolated[c]).map(CandidateId).collect();
                return Self::from_bucket_parts(m, buckets, iso);
            }
        }
        PreferenceOrder {
            m,
            class: OrderClass::Partial,
            repr: Repr::Relation { beats },
        }
    }

    /// Groups the selected candidates by their number of dominators and checks
    /// that the grouping reproduces the relation exactly.
    fn weak_buckets(
        m: usize,
        beats: &[FixedBitSet],
        above: &[usize],
        keep: impl Fn(usize) -> bool,
    ) -> Option<Vec<Vec<CandidateId>>> {
        let mut members: Vec<usize> = (0..m).filter(|&c| keep(c)).collect();
        members.sort_by_key(|&c| (above[c], c));
        let mut buckets: Vec<Vec<CandidateId>> = Vec::new();
        let mut level = vec![usize::MAX; m];
        let mut last = None;
        for &c in &members {
            if last != Some(above[c]) {
                buckets.push(Vec::new());
                last = Some(above[c]);
            }
            level[c] = buckets.len() - 1;
            buckets.last_mut().unwrap().push(CandidateId(c));
        }
        for &a in &members {
            for &b in &members {
                if a != b && beats[a].contains(b) != (level[a] < level[b]) {
                    return None;
                }
            }
        }
        Some(buckets)
    }

    fn from_bucket_parts(
        m: usize,
        mut buckets: Vec<Vec<CandidateId>>,
        mut isolated: Vec<CandidateId>,
    ) -> Self {
        buckets.retain(|b| !b.is_empty());
        // A single ranked bucket next to isolated candidates is the empty
        // relation, which is canonically one bucket holding everyone.
        if !isolated.is_empty() && buckets.len() <= 1 {
            let mut all: Vec<CandidateId> = buckets.into_iter().flatten().collect();
            all.append(&mut isolated);
            buckets = vec![all];
        }
        for b in buckets.iter_mut() {
            b.sort_unstable();
        }
        let mut level = vec![None; m];
        for (l, b) in buckets.iter().enumerate() {
            for c in b {
                level[c.index()] = Some(l as u32);
            }
        }
        let class = if !isolated.is_empty() {
            OrderClass::LocalWeak
        } else if buckets.iter().all(|b| b.len() == 1) {
            OrderClass::Total
        } else if buckets[..buckets.len().saturating_sub(1)]
            .iter()
            .all(|b| b.len() == 1)
        {
            OrderClass::Top
        } else {
            OrderClass::Weak
        };
        PreferenceOrder {
            m,
            class,
            repr: Repr::Levels { level, buckets },
        }
    }

    fn collect_buckets(
        m: usize,
        buckets: Vec<Vec<CandidateId>>,
    ) -> Result<(Vec<Vec<CandidateId>>, Vec<bool>)> {
        let mut seen = vec![false; m];
        for b in &buckets {
            for &c in b {
                check_range(m, c)?;
                if std::mem::replace(&mut seen[c.index()], true) {
                    return Err(Error::DuplicateCandidate(c));
                }
            }
        }
        Ok((buckets, seen))
    }

    /// A weak order given as indifference classes, best first. Every
    /// candidate must appear exactly once.
    pub fn weak(m: usize, buckets: Vec<Vec<CandidateId>>) -> Result<Self> {
        let (buckets, seen) = Self::collect_buckets(m, buckets)?;
        let found = seen.iter().filter(|&&s| s).count();
        if found != m {
            return Err(Error::SizeMismatch { expected: m, found });
        }
        Ok(Self::from_bucket_parts(m, buckets, Vec::new()))
    }

    /// Ranked classes, best first; every unlisted candidate is placed in a
    /// shared bottom class (truncated-ballot semantics).
    pub fn truncated(m: usize, mut buckets: Vec<Vec<CandidateId>>) -> Result<Self> {
        let seen;
        (buckets, seen) = Self::collect_buckets(m, buckets)?;
        let rest: Vec<CandidateId> = (0..m).filter(|&c| !seen[c]).map(CandidateId).collect();
        buckets.push(rest);
        Ok(Self::from_bucket_parts(m, buckets, Vec::new()))
    }

    /// A weak order over the listed candidates; unlisted candidates are
    /// isolated (incomparable to everyone).
    pub fn local_weak(m: usize, buckets: Vec<Vec<CandidateId>>) -> Result<Self> {
        let (buckets, seen) = Self::collect_buckets(m, buckets)?;
        let isolated = (0..m).filter(|&c| !seen[c]).map(CandidateId).collect();
        Ok(Self::from_bucket_parts(m, buckets, isolated))
    }

    /// A strict ranking of all candidates, best first.
    pub fn total(order: &[CandidateId]) -> Result<Self> {
        Self::weak(order.len(), order.iter().map(|&c| vec![c]).collect())
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn class(&self) -> OrderClass {
        self.class
    }

    pub fn is_total(&self) -> bool {
        self.class == OrderClass::Total
    }

    /// `a ≻ b`.
    #[inline]
    pub fn prefers(&self, a: CandidateId, b: CandidateId) -> bool {
        match &self.repr {
            Repr::Levels { level, .. } => match (level[a.index()], level[b.index()]) {
                (Some(x), Some(y)) => x < y,
                _ => false,
            },
            Repr::Relation { beats } => beats[a.index()].contains(b.index()),
        }
    }

    /// Distinct and neither preferred to the other.
    pub fn incomparable(&self, a: CandidateId, b: CandidateId) -> bool {
        a != b && !self.prefers(a, b) && !self.prefers(b, a)
    }

    /// Indifference level (0 = best) for orders stored as buckets; `None` for
    /// isolated candidates and for partial orders.
    #[inline]
    pub fn level(&self, c: CandidateId) -> Option<u32> {
        match &self.repr {
            Repr::Levels { level, .. } => level[c.index()],
            Repr::Relation { .. } => None,
        }
    }

    /// Per-candidate levels when the order is local weak or tighter.
    pub fn levels(&self) -> Option<&[Option<u32>]> {
        match &self.repr {
            Repr::Levels { level, .. } => Some(level),
            Repr::Relation { .. } => None,
        }
    }

    /// Indifference classes, best first, when the order is local weak or
    /// tighter. Isolated candidates of a local weak order are not included.
    pub fn buckets(&self) -> Option<&[Vec<CandidateId>]> {
        match &self.repr {
            Repr::Levels { buckets, .. } => Some(buckets),
            Repr::Relation { .. } => None,
        }
    }

    /// Candidates of a local weak order that are incomparable to everyone.
    pub fn isolated(&self) -> Vec<CandidateId> {
        match &self.repr {
            Repr::Levels { level, .. } => (0..self.m)
                .filter(|&c| level[c].is_none())
                .map(CandidateId)
                .collect(),
            Repr::Relation { .. } => Vec::new(),
        }
    }

    /// All `(a, b)` with `a ≻ b`.
    pub fn pairs(&self) -> Vec<(CandidateId, CandidateId)> {
        let mut out = Vec::new();
        match &self.repr {
            Repr::Levels { buckets, .. } => {
                for (i, upper) in buckets.iter().enumerate() {
                    for lower in &buckets[i + 1..] {
                        for &a in upper {
                            out.extend(lower.iter().map(|&b| (a, b)));
                        }
                    }
                }
                out.sort_unstable();
            }
            Repr::Relation { beats } => {
                for (a, row) in beats.iter().enumerate() {
                    out.extend(row.ones().map(|b| (CandidateId(a), CandidateId(b))));
                }
            }
        }
        out
    }

    /// Candidates not beaten by anyone.
    pub fn maximal_elements(&self) -> Vec<CandidateId> {
        (0..self.m)
            .map(CandidateId)
            .filter(|&c| !(0..self.m).any(|o| self.prefers(CandidateId(o), c)))
            .collect()
    }

    /// Candidates that beat no one.
    pub fn minimal_elements(&self) -> Vec<CandidateId> {
        (0..self.m)
            .map(CandidateId)
            .filter(|&c| !(0..self.m).any(|o| self.prefers(c, CandidateId(o))))
            .collect()
    }

    /// The induced order on `subset`; candidate `subset[i]` becomes id `i`.
    pub fn restrict(&self, subset: &[CandidateId]) -> PreferenceOrder {
        let k = subset.len();
        match &self.repr {
            Repr::Levels { level, .. } => {
                let mut by_level: Vec<(u32, CandidateId)> = Vec::new();
                let mut isolated = Vec::new();
                for (i, &c) in subset.iter().enumerate() {
                    match level[c.index()] {
                        Some(l) => by_level.push((l, CandidateId(i))),
                        None => isolated.push(CandidateId(i)),
                    }
                }
                by_level.sort_unstable();
                let mut buckets: Vec<Vec<CandidateId>> = Vec::new();
                let mut last = None;
                for (l, c) in by_level {
                    if last != Some(l) {
                        buckets.push(Vec::new());
                        last = Some(l);
                    }
                    buckets.last_mut().unwrap().push(c);
                }
                if buckets.is_empty() && isolated.is_empty() {
                    buckets.push(Vec::new());
                }
                Self::from_bucket_parts(k, buckets, isolated)
            }
            Repr::Relation { beats } => {
                let mut sub = vec![FixedBitSet::with_capacity(k); k];
                for (i, &a) in subset.iter().enumerate() {
                    for (j, &b) in subset.iter().enumerate() {
                        if beats[a.index()].contains(b.index()) {
                            sub[i].insert(j);
                        }
                    }
                }
                Self::from_closed(k, sub)
            }
        }
    }

    /// The same relation over the candidate ids `map[c]` (a permutation).
    pub fn relabel(&self, map: &[CandidateId]) -> PreferenceOrder {
        let pairs = self.pairs().into_iter().map(|(a, b)| (map[a.index()], map[b.index()]));
        match &self.repr {
            Repr::Levels { buckets, level } => {
                let nb = buckets
                    .iter()
                    .map(|b| b.iter().map(|c| map[c.index()]).collect())
                    .collect();
                let iso = (0..self.m)
                    .filter(|&c| level[c].is_none())
                    .map(|c| map[c])
                    .collect();
                Self::from_bucket_parts(self.m, nb, iso)
            }
            Repr::Relation { .. } => Self::from_pairs(self.m, pairs)
                .expect("relabelling an acyclic relation stays acyclic"),
        }
    }
}

impl fmt::Display for PreferenceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Levels { buckets, .. } => {
                f.write_str("⟨")?;
                for (i, b) in buckets.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ≻ ")?;
                    }
                    for (j, c) in b.iter().enumerate() {
                        if j > 0 {
                            f.write_str(" ∼ ")?;
                        }
                        write!(f, "{c}")?;
                    }
                }
                let iso = self.isolated();
                if !iso.is_empty() {
                    f.write_str(" | isolated:")?;
                    for c in iso {
                        write!(f, " {c}")?;
                    }
                }
                f.write_str("⟩")
            }
            Repr::Relation { .. } => {
                f.write_str("{")?;
                for (i, (a, b)) in self.pairs().into_iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}≻{b}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// An ordered multiset of votes over a common candidate set. Identical votes
/// can be folded into one entry with a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    m: usize,
    votes: Vec<PreferenceOrder>,
    multiplicities: Vec<u64>,
}

impl Profile {
    pub fn new(m: usize, votes: Vec<PreferenceOrder>) -> Result<Self> {
        let multiplicities = vec![1; votes.len()];
        Self::with_multiplicities(m, votes, multiplicities)
    }

    pub fn with_multiplicities(
        m: usize,
        votes: Vec<PreferenceOrder>,
        multiplicities: Vec<u64>,
    ) -> Result<Self> {
        if votes.len() != multiplicities.len() {
            return Err(Error::SizeMismatch {
                expected: votes.len(),
                found: multiplicities.len(),
            });
        }
        for v in &votes {
            if v.num_candidates() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    found: v.num_candidates(),
                });
            }
        }
        if multiplicities.contains(&0) {
            return Err(Error::MalformedInstance("vote multiplicity must be positive".into()));
        }
        Ok(Profile {
            m,
            votes,
            multiplicities,
        })
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    /// Number of (distinct) vote entries.
    pub fn num_votes(&self) -> usize {
        self.votes.len()
    }

    /// Number of voters, counting multiplicities.
    pub fn num_voters(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    pub fn votes(&self) -> &[PreferenceOrder] {
        &self.votes
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PreferenceOrder, u64)> {
        self.votes.iter().zip(self.multiplicities.iter().copied())
    }

    pub fn push(&mut self, vote: PreferenceOrder, multiplicity: u64) -> Result<()> {
        if vote.num_candidates() != self.m {
            return Err(Error::SizeMismatch {
                expected: self.m,
                found: vote.num_candidates(),
            });
        }
        self.votes.push(vote);
        self.multiplicities.push(multiplicity.max(1));
        Ok(())
    }

    /// The loosest class among the votes (`Total` for an empty profile).
    pub fn class(&self) -> OrderClass {
        self.votes
            .iter()
            .map(PreferenceOrder::class)
            .max()
            .unwrap_or(OrderClass::Total)
    }

    /// Fails with a class error naming the first vote looser than `required`.
    pub fn require_class(&self, required: OrderClass) -> Result<()> {
        match self.votes.iter().position(|v| !v.class().within(required)) {
            Some(i) => Err(Error::Class {
                vote: i,
                found: self.votes[i].class(),
                required,
            }),
            None => Ok(()),
        }
    }

    /// Index of the first total order, if any.
    pub fn total_vote(&self) -> Option<usize> {
        self.votes.iter().position(PreferenceOrder::is_total)
    }

    /// `𝒫[C']`, reindexed so that `subset[i]` becomes id `i`.
    pub fn restrict(&self, subset: &[CandidateId]) -> Profile {
        Profile {
            m: subset.len(),
            votes: self.votes.iter().map(|v| v.restrict(subset)).collect(),
            multiplicities: self.multiplicities.clone(),
        }
    }

    pub fn relabel(&self, map: &[CandidateId]) -> Profile {
        Profile {
            m: self.m,
            votes: self.votes.iter().map(|v| v.relabel(map)).collect(),
            multiplicities: self.multiplicities.clone(),
        }
    }
}

/// A total order of the candidates, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Axis {
    order: Vec<CandidateId>,
    position: Vec<usize>,
}

impl Axis {
    pub fn new(order: Vec<CandidateId>) -> Result<Self> {
        let m = order.len();
        let mut position = vec![usize::MAX; m];
        for (p, &c) in order.iter().enumerate() {
            check_range(m, c)?;
            if position[c.index()] != usize::MAX {
                return Err(Error::DuplicateCandidate(c));
            }
            position[c.index()] = p;
        }
        Ok(Axis { order, position })
    }

    pub fn identity(m: usize) -> Self {
        Axis {
            order: (0..m).map(CandidateId).collect(),
            position: (0..m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[CandidateId] {
        &self.order
    }

    #[inline]
    pub fn position(&self, c: CandidateId) -> usize {
        self.position[c.index()]
    }

    pub fn reversed(&self) -> Axis {
        let mut order = self.order.clone();
        order.reverse();
        Axis::new(order).expect("reversal of a permutation")
    }

    /// The axis on `subset`, reindexed so that `subset[i]` becomes id `i`.
    pub fn restrict(&self, subset: &[CandidateId]) -> Axis {
        let mut new_id = vec![None; self.len()];
        for (i, c) in subset.iter().enumerate() {
            new_id[c.index()] = Some(CandidateId(i));
        }
        let order = self.order.iter().filter_map(|c| new_id[c.index()]).collect();
        Axis::new(order).expect("restriction of a permutation")
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊳ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Why a recognizer refused a profile when no single valley pattern is
/// available as evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refusal {
    /// Exhaustive search found no axis.
    NoAxis,
    /// The consecutive-ones matrix has no valid column order.
    NotConsecutiveOnes,
    /// A vote rules out every axis on its own (matrix short-circuit).
    VoteRejected { vote: usize, reason: String },
    /// The guided placement could put `candidate` on neither side.
    Blocked {
        candidate: CandidateId,
        right_blocked_by: usize,
        left_blocked_by: usize,
    },
    /// No start candidate of the component led to a complete axis.
    NoStartCandidate { component: Vec<CandidateId> },
    /// A candidate has three maximal upper sets, or two that overlap.
    UpperSetConflict { candidate: CandidateId },
    /// The pairwise-order 2-SAT instance is unsatisfiable.
    Unsatisfiable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Witness(ValleyWitness),
    Refusal(Refusal),
}

impl From<ValleyWitness> for Certificate {
    fn from(w: ValleyWitness) -> Self {
        Certificate::Witness(w)
    }
}

impl From<Refusal> for Certificate {
    fn from(r: Refusal) -> Self {
        Certificate::Refusal(r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent(Axis),
    NotConsistent(Certificate),
}

impl Verdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent(_))
    }

    pub fn axis(&self) -> Option<&Axis> {
        match self {
            Verdict::Consistent(a) => Some(a),
            Verdict::NotConsistent(_) => None,
        }
    }

    pub fn refused(r: Refusal) -> Self {
        Verdict::NotConsistent(Certificate::Refusal(r))
    }
}
