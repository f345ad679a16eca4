//! Interval bounds on topological complexity and related invariants.
//!
//! Every tracked quantity holds an interval `[lo, hi]`. Rules from
//! [`rules`] are compiled into propagators that narrow these intervals until a
//! fixpoint, recording each derivation so the result can be replayed.

use thiserror::Error;

mod descriptor;
mod engine;
mod interval;
mod quantity;
pub mod rules;

pub use descriptor::{ComplexRef, EquivariantFlags, GroupClass, GroupDescriptor, SpaceDescriptor, Structure};
pub use engine::{bounds_for, bounds_with, FactBase, Report, TraceEntry};
pub use interval::Interval;
pub use quantity::{Quantity, QuantityKind};
pub use rules::{realizable_group_bounds, Context, RuleId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("inconsistent bounds for {quantity}: lower bound {lo} ({lo_source}) exceeds upper bound {hi} ({hi_source})")]
    Inconsistency { quantity: String, lo: u64, hi: u64, lo_source: String, hi_source: String },
    #[error("trace entry {index} does not replay: {reason}")]
    Replay { index: usize, reason: String },
    #[error("no fixpoint after {0} passes")]
    NoFixpoint(usize),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),
    #[error("malformed quantity key `{0}`")]
    BadQuantity(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
}
