//! Machine-readable verdicts.
//!
//! One JSON object per decided profile. Candidates appear by name and
//! `vote` indices count distinct ballots from 0 in file order.

use std::time::Duration;

use serde_json::{json, Map, Value};

use crate::axis_check::{Notion, Pattern, ValleyWitness};
use crate::dispatch::Engine;
use crate::model::{CandidateId, Certificate, Refusal, Verdict};
use crate::preflib::Election;

pub const SCHEMA_VERSION: u32 = 1;

/// The JSON object for one verdict. `wall_time` is left out when `None` so
/// that output can be compared byte for byte.
pub fn verdict_json(
    election: &Election,
    notion: Notion,
    engine: Engine,
    verdict: &Verdict,
    wall_time: Option<Duration>,
) -> Value {
    let names = |cs: &[CandidateId]| -> Value { cs.iter().map(|&c| Value::from(election.name(c))).collect() };
    let mut obj = Map::new();
    obj.insert("schema_version".into(), SCHEMA_VERSION.into());
    obj.insert("notion".into(), notion.name().into());
    obj.insert("algorithm".into(), engine.name().into());
    obj.insert("consistent".into(), verdict.is_consistent().into());
    match verdict {
        Verdict::Consistent(axis) => {
            obj.insert("axis".into(), names(axis.order()));
        }
        Verdict::NotConsistent(cert) => {
            obj.insert("certificate".into(), certificate_json(cert, &names));
        }
    }
    obj.insert("m".into(), election.profile.num_candidates().into());
    obj.insert("n".into(), election.profile.num_voters().into());
    obj.insert("unique_orders".into(), election.profile.num_votes().into());
    if let Some(t) = wall_time {
        obj.insert("wall_time_ms".into(), (t.as_secs_f64() * 1e3).into());
    }
    Value::Object(obj)
}

/// [`verdict_json`] as a single line of text.
pub fn write_verdict_json(
    election: &Election,
    notion: Notion,
    engine: Engine,
    verdict: &Verdict,
    wall_time: Option<Duration>,
) -> String {
    verdict_json(election, notion, engine, verdict, wall_time).to_string()
}

fn pattern_parts(p: &Pattern) -> (&'static str, Vec<CandidateId>) {
    match *p {
        Pattern::VValley(a, b, c) => ("v_valley", vec![a, b, c]),
        Pattern::UValley(a, b, c, d) => ("u_valley", vec![a, b, c, d]),
        Pattern::Plateau(a, b) => ("plateau", vec![a, b]),
        Pattern::NonpeakPlateau(a, b, c) => ("nonpeak_plateau", vec![a, b, c]),
        Pattern::WidePeak(a, b, c) => ("wide_peak", vec![a, b, c]),
    }
}

fn certificate_json(cert: &Certificate, names: &dyn Fn(&[CandidateId]) -> Value) -> Value {
    match cert {
        Certificate::Witness(ValleyWitness { vote, pattern }) => {
            let (kind, cs) = pattern_parts(pattern);
            json!({ "kind": "witness", "vote": vote, "pattern": kind, "candidates": names(&cs) })
        }
        Certificate::Refusal(r) => match r {
            Refusal::NoAxis => json!({ "kind": "no_axis" }),
            Refusal::NotConsecutiveOnes => json!({ "kind": "not_consecutive_ones" }),
            Refusal::VoteRejected { vote, reason } => {
                json!({ "kind": "vote_rejected", "vote": vote, "reason": reason })
            }
            Refusal::Blocked {
                candidate,
                right_blocked_by,
                left_blocked_by,
            } => json!({
                "kind": "blocked",
                "candidate": names(&[*candidate])[0],
                "right_blocked_by": right_blocked_by,
                "left_blocked_by": left_blocked_by,
            }),
            Refusal::NoStartCandidate { component } => {
                json!({ "kind": "no_start_candidate", "component": names(component) })
            }
            Refusal::UpperSetConflict { candidate } => {
                json!({ "kind": "upper_set_conflict", "candidate": names(&[*candidate])[0] })
            }
            Refusal::Unsatisfiable => json!({ "kind": "unsatisfiable" }),
        },
    }
}

/// A one-line human-readable account of why a profile was rejected.
pub fn certificate_text(election: &Election, cert: &Certificate) -> String {
    let list = |cs: &[CandidateId]| cs.iter().map(|&c| election.name(c)).collect::<Vec<_>>().join(" ");
    match cert {
        Certificate::Witness(ValleyWitness { vote, pattern }) => {
            let (kind, cs) = pattern_parts(pattern);
            format!("vote {vote} has a {} on {}", kind.replace('_', " "), list(&cs))
        }
        Certificate::Refusal(r) => match r {
            Refusal::NoAxis => "no axis works".to_string(),
            Refusal::NotConsecutiveOnes => "the matrix lacks the consecutive-ones property".to_string(),
            Refusal::VoteRejected { vote, reason } => format!("vote {vote} rules out every axis: {reason}"),
            Refusal::Blocked {
                candidate,
                right_blocked_by,
                left_blocked_by,
            } => format!(
                "{} fits on neither side (blocked by votes {right_blocked_by} and {left_blocked_by})",
                election.name(*candidate)
            ),
            Refusal::NoStartCandidate { component } => {
                format!("no start candidate works for component {}", list(component))
            }
            Refusal::UpperSetConflict { candidate } => {
                format!("the upper sets of {} conflict", election.name(*candidate))
            }
            Refusal::Unsatisfiable => "the pair-order clauses are unsatisfiable".to_string(),
        },
    }
}
