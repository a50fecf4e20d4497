//! Picks a recognizer for a profile, or runs all that apply.
//!
//! Automatic routing: a given axis is only checked; psp goes to the guided
//! algorithm when the profile has an implicit guiding vote, otherwise to
//! the unguided algorithm for top orders, the C1P algorithm for weak
//! orders, 2-SAT for local weak orders with a total vote, and the oracle for
//! everything else within its size bound. The other notions go to their
//! C1P recognizers.

use std::fmt;
use std::str::FromStr;

use crate::axis_check::{check_on_axis, Notion};
use crate::c1p::{recognize_black, recognize_necessary, recognize_plateaued, recognize_psp_c1p};
use crate::error::{Error, Result};
use crate::guided::recognize_guided;
use crate::model::{Axis, OrderClass, Profile, Verdict};
use crate::oracle::{oracle_recognize_with_bound, DEFAULT_BOUND};
use crate::twosat::recognize_lwo_with_total;
use crate::unguided::unguided_recognize;

/// A concrete recognizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    AxisCheck,
    C1p,
    Guided,
    Unguided,
    TwoSat,
    Oracle,
}

impl Engine {
    pub const RECOGNIZERS: [Engine; 5] = [Engine::C1p, Engine::Guided, Engine::Unguided, Engine::TwoSat, Engine::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Engine::AxisCheck => "axis_check",
            Engine::C1p => "c1p",
            Engine::Guided => "guided",
            Engine::Unguided => "unguided",
            Engine::TwoSat => "twosat",
            Engine::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A requested algorithm: automatic routing or one engine.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    #[default]
    Auto,
    Engine(Engine),
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Algorithm::Auto);
        }
        Engine::RECOGNIZERS
            .into_iter()
            .find(|e| e.name() == s)
            .map(Algorithm::Engine)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

impl FromStr for Notion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Notion::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| format!("unknown notion `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub engine: Engine,
    pub verdict: Verdict,
}

/// Dispatch settings beyond the algorithm choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest candidate count handed to the oracle.
    pub oracle_bound: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            oracle_bound: DEFAULT_BOUND,
        }
    }
}

pub fn dispatch(profile: &Profile, notion: Notion, algorithm: Algorithm, given_axis: Option<&Axis>) -> Result<Outcome> {
    dispatch_with(profile, notion, algorithm, given_axis, Limits::default())
}

pub fn dispatch_with(
    profile: &Profile,
    notion: Notion,
    algorithm: Algorithm,
    given_axis: Option<&Axis>,
    limits: Limits,
) -> Result<Outcome> {
    if let Some(axis) = given_axis {
        if axis.len() != profile.num_candidates() {
            return Err(Error::SizeMismatch {
                expected: profile.num_candidates(),
                found: axis.len(),
            });
        }
        return Ok(Outcome {
            engine: Engine::AxisCheck,
            verdict: check_on_axis(profile, axis, notion)?,
        });
    }
    let engine = match algorithm {
        Algorithm::Engine(e) => e,
        Algorithm::Auto => return auto(profile, notion, limits),
    };
    Ok(Outcome {
        engine,
        verdict: run_engine(profile, notion, engine, limits)?,
    })
}

fn auto(profile: &Profile, notion: Notion, limits: Limits) -> Result<Outcome> {
    let class = profile.class();
    let m = profile.num_candidates();
    let run = |engine| {
        run_engine(profile, notion, engine, limits).map(|verdict| Outcome { engine, verdict })
    };
    if notion != Notion::Possibly {
        return run(Engine::C1p);
    }
    if class.within(OrderClass::Weak) {
        if let Some(verdict) = recognize_guided(profile)? {
            return Ok(Outcome {
                engine: Engine::Guided,
                verdict,
            });
        }
        return run(if class.within(OrderClass::Top) {
            Engine::Unguided
        } else {
            Engine::C1p
        });
    }
    if class == OrderClass::LocalWeak && profile.total_vote().is_some() {
        return run(Engine::TwoSat);
    }
    if m <= limits.oracle_bound {
        return run(Engine::Oracle);
    }
    Err(Error::Hardness { class, m })
}

/// Runs one engine, failing with the engine's own precondition errors.
pub fn run_engine(profile: &Profile, notion: Notion, engine: Engine, limits: Limits) -> Result<Verdict> {
    let psp_only = |engine: Engine| {
        if notion == Notion::Possibly {
            Ok(())
        } else {
            Err(Error::Unsupported {
                engine: engine.name(),
                notion: notion.name(),
            })
        }
    };
    match engine {
        Engine::AxisCheck => Err(Error::MalformedInstance("the axis check needs an axis".into())),
        Engine::C1p => match notion {
            Notion::Possibly => recognize_psp_c1p(profile),
            Notion::Plateaued => recognize_plateaued(profile),
            Notion::Black => recognize_black(profile),
            Notion::Necessarily => recognize_necessary(profile),
        },
        Engine::Guided => {
            psp_only(engine)?;
            recognize_guided(profile)?.ok_or(Error::NoGuidingVote)
        }
        Engine::Unguided => {
            psp_only(engine)?;
            unguided_recognize(profile)
        }
        Engine::TwoSat => {
            psp_only(engine)?;
            recognize_lwo_with_total(profile)
        }
        Engine::Oracle => oracle_recognize_with_bound(profile, notion, limits.oracle_bound),
    }
}

/// Runs every engine whose preconditions hold and checks that their
/// verdicts agree. Returns each engine's verdict, or `Disagreement`.
pub fn cross_validate(profile: &Profile, notion: Notion, limits: Limits) -> Result<Vec<Outcome>> {
    let mut outcomes = Vec::new();
    for engine in Engine::RECOGNIZERS {
        match run_engine(profile, notion, engine, limits) {
            Ok(verdict) => outcomes.push(Outcome { engine, verdict }),
            Err(
                Error::Class { .. }
                | Error::NoTotalOrder
                | Error::NoGuidingVote
                | Error::Unsupported { .. }
                | Error::Size { .. },
            ) => {}
            Err(e) => return Err(e),
        }
    }
    if let Some(first) = outcomes.first() {
        let bit = first.verdict.is_consistent();
        if outcomes.iter().any(|o| o.verdict.is_consistent() != bit) {
            let summary = outcomes
                .iter()
                .map(|o| format!("{}={}", o.engine, o.verdict.is_consistent()))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::Disagreement(summary));
        }
    }
    Ok(outcomes)
}
