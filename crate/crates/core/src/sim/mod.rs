//! Deterministic discrete-event simulation of master-worker loop execution.
//!
//! One dedicated master (never fails) hands out chunks to `P` workers. A free
//! worker sends a work request (carrying the report of its previous chunk);
//! the master records the completion on receipt, spends `h` seconds per
//! assignment, and replies. Messages take `base_latency` plus any active
//! latency perturbation of the worker's node, one way. Workers compute a
//! chunk in the summed iteration time stretched by their speed schedule.
//!
//! Once every iteration is scheduled, the master either answers with a
//! duplicate of a scheduled-but-unfinished range (robust mode) or does not
//! answer at all, leaving the worker blocked. Failed workers stop silently:
//! their in-flight chunk and pending messages vanish.

mod config;
mod engine;
mod inject;
mod queue;
mod timing;

pub use config::{PeModel, SimConfig, DEFAULT_BASE_LATENCY, DEFAULT_H, DEFAULT_PES_PER_NODE};
pub use engine::{run_simulation, FailureRecord, SimResult, TraceRecord};
pub use inject::{
    inject_failures, inject_perturbations, PerturbationKind, PerturbationParams,
    DEFAULT_EXTRA_LATENCY, DEFAULT_SLOWDOWN,
};
pub use queue::EventKind;
pub use timing::{compute_finish, extra_latency, speed_at};
