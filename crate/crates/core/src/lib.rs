//! Dynamic loop self-scheduling (DLS) with robust rescheduling.
//!
//! This crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure computation:
//!
//! * [`schedule`]: chunk-size rules for STATIC, SS, FSC, mFSC, GSS, TSS, FAC,
//!   WF, RAND, AWF-B/C/D/E and AF, and the [`ledger::TaskLedger`] that tracks
//!   every iteration as unscheduled, scheduled or finished.
//! * [`sim`]: a deterministic discrete-event model of a master-worker loop
//!   execution with fail-stop failures and speed/latency perturbations.
//! * [`workload`]: per-iteration execution-time generators.
//! * [`metrics`]: the single-failure cost model, checkpointing comparison and
//!   FePIA-style robustness metrics.
//!
//! File formats, the experiment driver and the command line live in the
//! `rdlb` companion crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod ledger;
pub mod metrics;
pub mod schedule;
pub mod sim;
pub mod stats;
pub mod workload;

pub use error::{Error, Result};
pub use ledger::{IterState, RangeId, TaskLedger};
pub use schedule::{Technique, TechniqueParams, TechniqueState};
