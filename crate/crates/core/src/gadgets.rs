//! Instance generators: the two hardness reductions as profile
//! constructors, and seeded random profiles.
//!
//! Randomness comes from ChaCha8 seeded with a `u64`, so a seed names the
//! same profile on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axis_check::Notion;
use crate::error::{Error, Result};
use crate::model::{Axis, CandidateId, OrderClass, PreferenceOrder, Profile};

/// Identifier of the generator's PRNG, recorded next to generated corpora.
pub const RNG_ALGORITHM: &str = "chacha8";

fn c(i: usize) -> CandidateId {
    CandidateId(i)
}

/// Two votes per triple `(a, b, c)`: `{a ≻ c, b ≻ c}` and `{b ≻ a, c ≻ a}`.
/// Elements are candidates `0..num_elements`. The profile is possibly
/// single-peaked consistent exactly when some order puts every `b` between
/// its `a` and `c`.
pub fn from_betweenness(num_elements: usize, triples: &[(usize, usize, usize)]) -> Result<Profile> {
    let mut votes = Vec::with_capacity(2 * triples.len());
    for &(a, b, cc) in triples {
        if a == b || b == cc || a == cc {
            return Err(Error::MalformedInstance(format!(
                "triple ({a}, {b}, {cc}) repeats an element"
            )));
        }
        if let Some(&bad) = [a, b, cc].iter().find(|&&e| e >= num_elements) {
            return Err(Error::CandidateOutOfRange {
                candidate: bad,
                m: num_elements,
            });
        }
        votes.push(PreferenceOrder::from_pairs(num_elements, [(c(a), c(cc)), (c(b), c(cc))])?);
        votes.push(PreferenceOrder::from_pairs(num_elements, [(c(b), c(a)), (c(cc), c(a))])?);
    }
    Profile::new(num_elements, votes)
}

/// Elements `0..num_elements` become candidates of the same ids and `x` is
/// candidate `num_elements`. Each set `{i < j < k}` gives the vote
/// `{i ≻ j, x ≻ k}`, and the total order `x ≻ (num_elements - 1) ≻ … ≻ 0`
/// is appended. The profile is possibly single-peaked consistent exactly
/// when the sets can be split.
pub fn from_set_splitting(num_elements: usize, sets: &[Vec<usize>]) -> Result<Profile> {
    let m = num_elements + 1;
    let x = c(num_elements);
    let mut votes = Vec::with_capacity(sets.len() + 1);
    for set in sets {
        let mut s = set.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != 3 || set.len() != 3 {
            return Err(Error::MalformedInstance(format!(
                "set {set:?} does not have exactly three distinct elements"
            )));
        }
        if s[2] >= num_elements {
            return Err(Error::CandidateOutOfRange {
                candidate: s[2],
                m: num_elements,
            });
        }
        votes.push(PreferenceOrder::from_pairs(m, [(c(s[0]), c(s[1])), (x, c(s[2]))])?);
    }
    let mut total: Vec<CandidateId> = vec![x];
    total.extend((0..num_elements).rev().map(c));
    votes.push(PreferenceOrder::total(&total)?);
    Profile::new(m, votes)
}

/// Parameters for [`random_sp_profile`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub m: usize,
    pub n: usize,
    pub notion: Notion,
    /// Loosest order class the votes may take.
    pub class: OrderClass,
    /// Probability used for each information-deleting step, in `[0, 1]`.
    pub incompleteness: f64,
    pub seed: u64,
}

/// A profile consistent for `config.notion` by construction, together with
/// the hidden axis it was drawn on.
///
/// Each vote starts as a single-peaked total order, built from the bottom
/// by taking either end of the remaining axis interval. Information is then
/// deleted in ways that keep the notion: for psp any coarsening of the
/// order works; the other notions take total or weak orders and only allow
/// a plateau at the top, of at most two candidates for necessary and none
/// for Black.
pub fn random_sp_profile(config: &GeneratorConfig) -> Result<(Axis, Profile)> {
    let GeneratorConfig {
        m,
        n,
        notion,
        class,
        incompleteness: p,
        seed,
    } = *config;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::MalformedInstance(format!("incompleteness {p} is not a probability")));
    }
    if notion != Notion::Possibly && !matches!(class, OrderClass::Total | OrderClass::Weak) {
        return Err(Error::MalformedInstance(format!(
            "{} profiles need weak orders, not {class}",
            notion.name()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<CandidateId> = (0..m).map(c).collect();
    order.shuffle(&mut rng);
    let axis = Axis::new(order)?;
    let mut votes = Vec::with_capacity(n);
    for _ in 0..n {
        let ranking = sp_total(&mut rng, &axis);
        let vote = match notion {
            Notion::Possibly => coarsen(&mut rng, &ranking, class, p)?,
            _ if class == OrderClass::Total => PreferenceOrder::total(&ranking)?,
            _ => {
                let cap = match notion {
                    Notion::Black => 1,
                    Notion::Necessarily => 2,
                    _ => m,
                };
                let mut top = m.min(1);
                while top < cap.min(m) && rng.gen_bool(p) {
                    top += 1;
                }
                let mut buckets = vec![ranking[..top].to_vec()];
                buckets.extend(ranking[top..].iter().map(|&x| vec![x]));
                buckets.retain(|b| !b.is_empty());
                PreferenceOrder::weak(m, buckets)?
            }
        };
        votes.push(vote);
    }
    Ok((axis, Profile::new(m, votes)?))
}

/// A total order single-peaked on `axis`, best first.
fn sp_total(rng: &mut ChaCha8Rng, axis: &Axis) -> Vec<CandidateId> {
    let order = axis.order();
    let mut bottom_up = Vec::with_capacity(order.len());
    if order.is_empty() {
        return bottom_up;
    }
    let (mut l, mut r) = (0, order.len() - 1);
    while l < r {
        if rng.gen_bool(0.5) {
            bottom_up.push(order[l]);
            l += 1;
        } else {
            bottom_up.push(order[r]);
            r -= 1;
        }
    }
    bottom_up.push(order[l]);
    bottom_up.reverse();
    bottom_up
}

/// Deletes information from a ranking while keeping it as an extension.
fn coarsen(rng: &mut ChaCha8Rng, ranking: &[CandidateId], class: OrderClass, p: f64) -> Result<PreferenceOrder> {
    let m = ranking.len();
    match class {
        OrderClass::Total => PreferenceOrder::total(ranking),
        OrderClass::Top => {
            let keep = if m > 0 && rng.gen_bool(p) { rng.gen_range(0..m) } else { m };
            PreferenceOrder::truncated(m, ranking[..keep].iter().map(|&x| vec![x]).collect())
        }
        OrderClass::Weak => PreferenceOrder::weak(m, merge_adjacent(rng, ranking, p)),
        OrderClass::LocalWeak => {
            let kept: Vec<CandidateId> = ranking.iter().copied().filter(|_| !rng.gen_bool(p / 2.0)).collect();
            PreferenceOrder::local_weak(m, merge_adjacent(rng, &kept, p))
        }
        OrderClass::Partial => {
            let mut pairs = Vec::new();
            for (i, &a) in ranking.iter().enumerate() {
                for &b in &ranking[i + 1..] {
                    if !rng.gen_bool(p) {
                        pairs.push((a, b));
                    }
                }
            }
            PreferenceOrder::from_pairs(m, pairs)
        }
    }
}

/// Splits a ranking into buckets, joining each adjacent pair with
/// probability `p`.
fn merge_adjacent(rng: &mut ChaCha8Rng, ranking: &[CandidateId], p: f64) -> Vec<Vec<CandidateId>> {
    let mut buckets: Vec<Vec<CandidateId>> = Vec::new();
    for (i, &x) in ranking.iter().enumerate() {
        match buckets.last_mut() {
            Some(b) if i > 0 && rng.gen_bool(p) => b.push(x),
            _ => buckets.push(vec![x]),
        }
    }
    buckets
}

/// A profile with no structure beyond its order class, for negative cases.
pub fn random_profile(m: usize, n: usize, class: OrderClass, seed: u64) -> Result<Profile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut votes = Vec::with_capacity(n);
    for _ in 0..n {
        let mut ranking: Vec<CandidateId> = (0..m).map(c).collect();
        ranking.shuffle(&mut rng);
        let vote = match class {
            OrderClass::Total => PreferenceOrder::total(&ranking)?,
            OrderClass::Top => {
                let keep = rng.gen_range(0..=m);
                PreferenceOrder::truncated(m, ranking[..keep].iter().map(|&x| vec![x]).collect())?
            }
            OrderClass::Weak => PreferenceOrder::weak(m, merge_adjacent(&mut rng, &ranking, 0.5))?,
            OrderClass::LocalWeak => {
                let kept: Vec<CandidateId> = ranking.iter().copied().filter(|_| rng.gen_bool(2.0 / 3.0)).collect();
                PreferenceOrder::local_weak(m, merge_adjacent(&mut rng, &kept, 0.5))?
            }
            OrderClass::Partial => {
                let mut pairs = Vec::new();
                for (i, &a) in ranking.iter().enumerate() {
                    for &b in &ranking[i + 1..] {
                        if rng.gen_bool(0.3) {
                            pairs.push((a, b));
                        }
                    }
                }
                PreferenceOrder::from_pairs(m, pairs)?
            }
        };
        votes.push(vote);
    }
    Profile::new(m, votes)
}
