use thiserror::Error;

use crate::axis_check::ValleyWitness;
use crate::model::{CandidateId, OrderClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("candidate {candidate} is out of range for {m} candidates")]
    CandidateOutOfRange { candidate: usize, m: usize },

    #[error("candidate {0} appears more than once")]
    DuplicateCandidate(CandidateId),

    #[error("preference relation is cyclic through candidate {0}")]
    Cycle(CandidateId),

    #[error("expected {expected} candidates, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("vote {vote} is a {found} order but {required} or tighter is required")]
    Class {
        vote: usize,
        found: OrderClass,
        required: OrderClass,
    },

    #[error("the profile contains no total order")]
    NoTotalOrder,

    #[error("{m} candidates exceed the brute-force bound of {bound}")]
    Size { m: usize, bound: usize },

    #[error("pinned candidate {0} cannot be kept at its end of the axis")]
    Pin(CandidateId),

    #[error(
        "{class} order consistency is NP-complete in general; refusing {m} candidates without an axis"
    )]
    Hardness { class: OrderClass, m: usize },

    #[error("vote contains a forbidden pattern: {0}")]
    Witness(ValleyWitness),

    #[error("the profile has no implicit guiding vote")]
    NoGuidingVote,

    #[error("{engine} does not decide {notion} consistency")]
    Unsupported {
        engine: &'static str,
        notion: &'static str,
    },

    #[error("engines disagree: {0}")]
    Disagreement(String),

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: unknown candidate `{name}`")]
    UnknownCandidate { line: usize, name: String },

    #[error("internal verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
