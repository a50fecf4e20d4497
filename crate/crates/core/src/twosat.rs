//! Recognition for local weak orders through 2-SAT, for profiles that
//! contain at least one total order.
//!
//! Variable `ab` states that `a` is left of `b`. Every vote with `a ≻ b` and
//! `c ≻ b` forbids `b` between `a` and `c`, and each pair of variables `ab`,
//! `ba` is an exclusive or. The total order in the profile makes every
//! model transitive.

use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::axis_check::is_possibly_sp_on_axis;
use crate::error::{Error, Result};
use crate::model::{Axis, CandidateId, OrderClass, Profile, Refusal, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, negated: true }
    }

    fn node(self) -> usize {
        2 * self.var + usize::from(self.negated)
    }

    fn complement_node(self) -> usize {
        self.node() ^ 1
    }
}

/// A conjunction of two-literal clauses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoSatInstance {
    pub num_vars: usize,
    pub clauses: Vec<(Lit, Lit)>,
}

impl TwoSatInstance {
    pub fn new(num_vars: usize) -> Self {
        TwoSatInstance {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn add(&mut self, a: Lit, b: Lit) {
        debug_assert!(a.var < self.num_vars && b.var < self.num_vars);
        self.clauses.push((a, b));
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        let val = |l: Lit| assignment[l.var] != l.negated;
        self.clauses.iter().all(|&(a, b)| val(a) || val(b))
    }

    /// DIMACS CNF text, variables numbered from 1.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        let lit = |l: Lit| {
            let v = l.var as i64 + 1;
            if l.negated {
                -v
            } else {
                v
            }
        };
        for &(a, b) in &self.clauses {
            let _ = writeln!(out, "{} {} 0", lit(a), lit(b));
        }
        out
    }
}

/// A satisfying assignment, read off the strongly connected components of
/// the implication graph.
pub fn solve_2sat(instance: &TwoSatInstance) -> Option<Vec<bool>> {
    let nodes = 2 * instance.num_vars;
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(nodes, 2 * instance.clauses.len());
    for _ in 0..nodes {
        g.add_node(());
    }
    for &(a, b) in &instance.clauses {
        // ¬a → b and ¬b → a
        g.add_edge(NodeIndex::new(a.complement_node()), NodeIndex::new(b.node()), ());
        g.add_edge(NodeIndex::new(b.complement_node()), NodeIndex::new(a.node()), ());
    }
    // Components come out sinks first.
    let mut comp = vec![0usize; nodes];
    for (i, scc) in tarjan_scc(&g).into_iter().enumerate() {
        for v in scc {
            comp[v.index()] = i;
        }
    }
    (0..instance.num_vars)
        .map(|x| {
            let (t, f) = (comp[2 * x], comp[2 * x + 1]);
            (t != f).then_some(t < f)
        })
        .collect()
}

/// The instance for a profile together with its variable layout.
#[derive(Clone, Debug)]
pub struct PairEncoding {
    m: usize,
    pub instance: TwoSatInstance,
}

impl PairEncoding {
    /// Variable `ab`: `a` is left of `b`.
    pub fn var(&self, left: CandidateId, right: CandidateId) -> usize {
        left.index() * self.m + right.index()
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }
}

fn require_local_weak_with_total(profile: &Profile) -> Result<()> {
    profile.require_class(OrderClass::LocalWeak)?;
    if profile.total_vote().is_none() {
        return Err(Error::NoTotalOrder);
    }
    Ok(())
}

/// Builds the clauses for a local weak profile containing a total order.
pub fn encode(profile: &Profile) -> Result<PairEncoding> {
    require_local_weak_with_total(profile)?;
    let m = profile.num_candidates();
    let mut enc = PairEncoding {
        m,
        instance: TwoSatInstance::new(m * m),
    };
    let mut above: Vec<CandidateId> = Vec::with_capacity(m);
    for v in profile.votes() {
        let buckets = v.buckets().expect("local weak orders are stored by level");
        above.clear();
        for bucket in buckets {
            for &b in bucket {
                for (i, &a) in above.iter().enumerate() {
                    for &c in &above[i + 1..] {
                        let (ab, ba) = (enc.var(a, b), enc.var(b, a));
                        let (bc, cb) = (enc.var(b, c), enc.var(c, b));
                        enc.instance.add(Lit::pos(ba), Lit::pos(cb));
                        enc.instance.add(Lit::pos(ab), Lit::pos(bc));
                    }
                }
            }
            above.extend_from_slice(bucket);
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let (ab, ba) = (enc.var(CandidateId(a), CandidateId(b)), enc.var(CandidateId(b), CandidateId(a)));
            enc.instance.add(Lit::pos(ab), Lit::pos(ba));
            enc.instance.add(Lit::neg(ab), Lit::neg(ba));
        }
    }
    Ok(enc)
}

/// Possibly single-peaked consistency for local weak orders, given that at
/// least one vote is a total order.
pub fn recognize_lwo_with_total(profile: &Profile) -> Result<Verdict> {
    let enc = encode(profile)?;
    let Some(model) = solve_2sat(&enc.instance) else {
        return Ok(Verdict::refused(Refusal::Unsatisfiable));
    };
    let m = enc.m;
    let left_of = |a: usize, b: usize| model[enc.var(CandidateId(a), CandidateId(b))];
    #[cfg(debug_assertions)]
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if a != b && b != c && a != c {
                    debug_assert!(!(left_of(a, b) && left_of(b, c) && left_of(c, a)), "model is cyclic");
                }
            }
        }
    }
    let mut order: Vec<(usize, CandidateId)> = (0..m)
        .map(|a| ((0..m).filter(|&b| b != a && left_of(b, a)).count(), CandidateId(a)))
        .collect();
    order.sort_unstable();
    if order.iter().enumerate().any(|(i, &(p, _))| p != i) {
        return Err(Error::Verification("pair variables do not form a total order".into()));
    }
    let axis = Axis::new(order.into_iter().map(|(_, c)| c).collect())?;
    match is_possibly_sp_on_axis(profile, &axis)? {
        Verdict::Consistent(a) => Ok(Verdict::Consistent(a)),
        Verdict::NotConsistent(cert) => Err(Error::Verification(format!(
            "axis {axis} from the 2-SAT model fails the check: {cert:?}"
        ))),
    }
}
