//! Consecutive-ones matrices built from weak-order profiles, and the solver
//! that turns a column order into an axis.
//!
//! Row `a` of a vote's block holds a one in column `b` exactly when `b ≿ a`,
//! so on a consistent axis every row covers an interval around the peak.

mod pq;

use std::collections::HashSet;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::axis_check::{check_on_axis, Notion};
use crate::error::{Error, Result};
use crate::model::{Axis, CandidateId, OrderClass, PreferenceOrder, Profile, Refusal, Verdict};

pub use pq::PqTree;

/// Largest column count accepted by [`solve_c1p_exhaustive`].
pub const EXHAUSTIVE_BOUND: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Base,
    /// One of the three rows added for a non-top tied pair (1, 2 or 3).
    PlateauGadget(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RowTag {
    pub vote: usize,
    pub kind: RowKind,
}

/// A vote that rules out every axis on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortCircuit {
    pub vote: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C1Matrix {
    m: usize,
    rows: Vec<FixedBitSet>,
    provenance: Vec<RowTag>,
    short_circuit: Option<ShortCircuit>,
}

impl C1Matrix {
    pub fn new(m: usize) -> Self {
        C1Matrix {
            m,
            rows: Vec::new(),
            provenance: Vec::new(),
            short_circuit: None,
        }
    }

    /// Builds a matrix from explicit 0/1 rows.
    pub fn from_rows(m: usize, rows: &[Vec<bool>]) -> Result<Self> {
        let mut out = C1Matrix::new(m);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    found: r.len(),
                });
            }
            let mut bits = FixedBitSet::with_capacity(m);
            for (j, &one) in r.iter().enumerate() {
                bits.set(j, one);
            }
            out.push(
                bits,
                RowTag {
                    vote: i,
                    kind: RowKind::Base,
                },
            );
        }
        Ok(out)
    }

    pub fn push(&mut self, row: FixedBitSet, tag: RowTag) {
        debug_assert_eq!(row.len(), self.m);
        self.rows.push(row);
        self.provenance.push(tag);
    }

    pub fn num_columns(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    pub fn provenance(&self) -> &[RowTag] {
        &self.provenance
    }

    pub fn short_circuit(&self) -> Option<&ShortCircuit> {
        self.short_circuit.as_ref()
    }

    pub fn row_string(&self, i: usize) -> String {
        (0..self.m)
            .map(|j| if self.rows[i].contains(j) { '1' } else { '0' })
            .collect()
    }

    /// Text dump: a header line of column labels, then one 0/1 line per row.
    pub fn to_grid(&self, labels: &[String]) -> String {
        let mut out = labels.join(" ");
        out.push('\n');
        for i in 0..self.rows.len() {
            let cells: Vec<&str> = (0..self.m)
                .map(|j| if self.rows[i].contains(j) { "1" } else { "0" })
                .collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }

    /// True when every row's ones are consecutive under `order`.
    pub fn is_consecutive_under(&self, order: &[usize]) -> bool {
        self.rows.iter().all(|r| ones_consecutive(r, order))
    }
}

fn ones_consecutive(row: &FixedBitSet, order: &[usize]) -> bool {
    let mut state = 0u8;
    for &c in order {
        match (state, row.contains(c)) {
            (0, true) => state = 1,
            (1, false) => state = 2,
            (2, true) => return false,
            _ => {}
        }
    }
    true
}

fn weak_buckets(profile: &Profile, i: usize) -> Result<&[Vec<CandidateId>]> {
    let v = &profile.votes()[i];
    if !v.class().within(OrderClass::Weak) {
        return Err(Error::Class {
            vote: i,
            found: v.class(),
            required: OrderClass::Weak,
        });
    }
    Ok(v.buckets().expect("weak orders are stored by level"))
}

fn base_block(m: usize, i: usize, buckets: &[Vec<CandidateId>], out: &mut C1Matrix) {
    let mut rows = vec![FixedBitSet::new(); m];
    let mut upper = FixedBitSet::with_capacity(m);
    for bucket in buckets {
        for &c in bucket {
            upper.insert(c.index());
        }
        for &c in bucket {
            rows[c.index()] = upper.clone();
        }
    }
    for row in rows {
        out.push(
            row,
            RowTag {
                vote: i,
                kind: RowKind::Base,
            },
        );
    }
}

/// One block of rows per vote, row `a` holding a one in column `b` unless
/// `a ≻ b`.
pub fn build_psp_matrix(profile: &Profile) -> Result<C1Matrix> {
    let m = profile.num_candidates();
    let mut out = C1Matrix::new(m);
    for i in 0..profile.num_votes() {
        base_block(m, i, weak_buckets(profile, i)?, &mut out);
    }
    Ok(out)
}

fn build_gadget_matrix(profile: &Profile, reject_top_ties: bool) -> Result<C1Matrix> {
    let m = profile.num_candidates();
    let mut out = C1Matrix::new(m);
    for i in 0..profile.num_votes() {
        let buckets = weak_buckets(profile, i)?;
        base_block(m, i, buckets, &mut out);
        if out.short_circuit.is_some() {
            continue;
        }
        if reject_top_ties && buckets.first().is_some_and(|b| b.len() >= 2) {
            out.short_circuit = Some(ShortCircuit {
                vote: i,
                reason: "most-preferred candidates are tied".into(),
            });
            continue;
        }
        let mut upper = FixedBitSet::with_capacity(m);
        for (level, bucket) in buckets.iter().enumerate() {
            if level > 0 {
                match bucket.as_slice() {
                    [a, b] => {
                        let rows = [vec![*b], vec![*a, *b], vec![*a]];
                        for (k, extra) in rows.into_iter().enumerate() {
                            let mut row = upper.clone();
                            for c in extra {
                                row.insert(c.index());
                            }
                            out.push(
                                row,
                                RowTag {
                                    vote: i,
                                    kind: RowKind::PlateauGadget(k as u8 + 1),
                                },
                            );
                        }
                    }
                    b if b.len() >= 3 => {
                        out.short_circuit = Some(ShortCircuit {
                            vote: i,
                            reason: "three or more tied candidates below the top".into(),
                        });
                        break;
                    }
                    _ => {}
                }
            }
            for &c in bucket {
                upper.insert(c.index());
            }
        }
    }
    Ok(out)
}

/// The base matrix plus three gadget rows per tied pair below the top.
/// Short-circuits on a tie of three or more below the top.
pub fn build_plateaued_matrix(profile: &Profile) -> Result<C1Matrix> {
    build_gadget_matrix(profile, false)
}

/// As [`build_plateaued_matrix`], and also short-circuits on any tie at the
/// top.
pub fn build_black_matrix(profile: &Profile) -> Result<C1Matrix> {
    build_gadget_matrix(profile, true)
}

/// Distinct rows that actually constrain the order, in first-seen order.
fn informative_rows(matrix: &C1Matrix) -> Vec<&FixedBitSet> {
    let m = matrix.m;
    let mut seen = HashSet::new();
    matrix
        .rows
        .iter()
        .filter(|r| {
            let k = r.count_ones(..);
            k > 1 && k < m && seen.insert(r.as_slice())
        })
        .collect()
}

/// A column order making the ones of every row consecutive, if one exists.
pub fn solve_c1p(matrix: &C1Matrix) -> Option<Vec<usize>> {
    if matrix.short_circuit.is_some() {
        return None;
    }
    let mut tree = PqTree::new(matrix.m);
    for row in informative_rows(matrix) {
        if !tree.reduce(row) {
            return None;
        }
    }
    let order = tree.frontier();
    debug_assert!(matrix.is_consecutive_under(&order));
    Some(order)
}

/// Backtracking search over column orders, for at most
/// [`EXHAUSTIVE_BOUND`] columns. Returns the lexicographically least
/// witness.
pub fn solve_c1p_exhaustive(matrix: &C1Matrix) -> Result<Option<Vec<usize>>> {
    let m = matrix.m;
    if m > EXHAUSTIVE_BOUND {
        return Err(Error::Size {
            m,
            bound: EXHAUSTIVE_BOUND,
        });
    }
    if matrix.short_circuit.is_some() {
        return Ok(None);
    }
    let rows = informative_rows(matrix);
    let mut state = vec![0u8; rows.len()];
    let mut order = Vec::with_capacity(m);
    let mut used = vec![false; m];
    Ok(extend(&rows, &mut state, &mut order, &mut used).then_some(order))
}

fn extend(rows: &[&FixedBitSet], state: &mut [u8], order: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let m = used.len();
    if order.len() == m {
        return true;
    }
    for c in 0..m {
        if used[c] {
            continue;
        }
        let saved = state.to_vec();
        let ok = rows.iter().zip(state.iter_mut()).all(|(r, s)| {
            match (*s, r.contains(c)) {
                (0, true) => *s = 1,
                (1, false) => *s = 2,
                (2, true) => return false,
                _ => {}
            }
            true
        });
        if ok {
            used[c] = true;
            order.push(c);
            if extend(rows, state, order, used) {
                return true;
            }
            order.pop();
            used[c] = false;
        }
        state.copy_from_slice(&saved);
    }
    false
}

fn verdict_from(profile: &Profile, matrix: &C1Matrix, notion: Notion) -> Result<Verdict> {
    if let Some(sc) = matrix.short_circuit() {
        return Ok(Verdict::refused(Refusal::VoteRejected {
            vote: sc.vote,
            reason: sc.reason.clone(),
        }));
    }
    let Some(order) = solve_c1p(matrix) else {
        return Ok(Verdict::refused(Refusal::NotConsecutiveOnes));
    };
    let axis = Axis::new(order.into_iter().map(CandidateId).collect())?;
    match check_on_axis(profile, &axis, notion)? {
        Verdict::Consistent(axis) => Ok(Verdict::Consistent(axis)),
        Verdict::NotConsistent(cert) => Err(Error::Verification(format!(
            "column order {axis} fails the {} check: {cert:?}",
            notion.name()
        ))),
    }
}

/// Possibly single-peaked consistency for weak orders.
pub fn recognize_psp_c1p(profile: &Profile) -> Result<Verdict> {
    verdict_from(profile, &build_psp_matrix(profile)?, Notion::Possibly)
}

pub fn recognize_plateaued(profile: &Profile) -> Result<Verdict> {
    verdict_from(profile, &build_plateaued_matrix(profile)?, Notion::Plateaued)
}

pub fn recognize_black(profile: &Profile) -> Result<Verdict> {
    verdict_from(profile, &build_black_matrix(profile)?, Notion::Black)
}

/// Necessary single-peakedness: single-plateaued with at most two candidates
/// tied at the top of each vote.
pub fn recognize_necessary(profile: &Profile) -> Result<Verdict> {
    let mut matrix = build_plateaued_matrix(profile)?;
    if matrix.short_circuit.is_none() {
        let wide = profile.votes().iter().position(|v: &PreferenceOrder| {
            v.buckets()
                .and_then(|b| b.first())
                .is_some_and(|top| top.len() >= 3)
        });
        if let Some(vote) = wide {
            matrix.short_circuit = Some(ShortCircuit {
                vote,
                reason: "three or more candidates tied at the top".into(),
            });
        }
    }
    verdict_from(profile, &matrix, Notion::Necessarily)
}
