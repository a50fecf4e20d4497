//! Recognition of single-peaked structure in incomplete preference profiles.
//!
//! Votes may be total, top (truncated), weak, local weak or partial orders.
//! The crate decides whether a profile is possibly single-peaked, and for
//! weak orders also single-plateaued, Black single-peaked or necessarily
//! single-peaked, returning a witnessing axis or a certificate of refusal.

pub mod axis_check;
pub mod c1p;
pub mod dispatch;
pub mod error;
pub mod gadgets;
pub mod guided;
pub mod model;
pub mod oracle;
pub mod preflib;
pub mod report;
pub mod twosat;
pub mod unguided;

pub use axis_check::{Notion, Pattern, ValleyWitness};
pub use error::{Error, Result};
pub use model::{
    Axis, CandidateId, Certificate, OrderClass, PreferenceOrder, Profile, Refusal, Verdict,
};
