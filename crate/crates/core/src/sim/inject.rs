use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::SimConfig;
use super::engine::run_simulation;
use crate::error::{Error, Result};

/// Speed multiplier applied by the PE-perturbation scenario.
pub const DEFAULT_SLOWDOWN: f64 = 0.5;
/// One-way delay (seconds) added by the latency-perturbation scenario.
pub const DEFAULT_EXTRA_LATENCY: f64 = 10.0;

/// Hang horizon as a multiple of the failure-free makespan.
const HANG_FACTOR: f64 = 100.0;

/// Keeps the failure stream independent of the technique and workload
/// streams, which are seeded with the plain seed.
const FAILURE_STREAM: u64 = 0x6661_696c_7572_6573;

/// Fail `count` distinct workers at uniform times in `(0, T_baseline)`.
///
/// `T_baseline` is the makespan of `cfg` with every failure removed. Sets a
/// hang horizon of 100 × `T_baseline` unless one is already configured.
pub fn inject_failures(cfg: &SimConfig, count: usize, seed: u64) -> Result<SimConfig> {
    if count == 0 {
        return Ok(cfg.clone());
    }
    if count >= cfg.p {
        return Err(Error::TooManyFailures { count, p: cfg.p });
    }
    let mut baseline_cfg = cfg.clone();
    baseline_cfg.record_trace = false;
    for m in &mut baseline_cfg.pe_models {
        m.fail_at = None;
    }
    let baseline = run_simulation(&baseline_cfg)?;
    let t_baseline = if baseline.completed {
        baseline.t_par
    } else {
        baseline.end_time
    };
    if !(t_baseline > 0.0) {
        return Err(Error::Config(
            "baseline makespan must be positive to place failures",
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ FAILURE_STREAM);
    let victims = rand::seq::index::sample(&mut rng, cfg.p, count).into_vec();
    let mut out = cfg.clone();
    for pe in victims {
        let at = loop {
            let u: f64 = rng.random();
            if u > 0.0 {
                break u * t_baseline;
            }
        };
        out.pe_models[pe].fail_at = Some(at);
    }
    if out.hang_horizon.is_none() {
        out.hang_horizon = Some(HANG_FACTOR * t_baseline);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PerturbationKind {
    /// Every worker on the node computes slower.
    Pe,
    /// Every message to or from the node is delayed.
    Latency,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationParams {
    pub multiplier: f64,
    pub extra_latency: f64,
    pub start: f64,
    pub end: f64,
}

impl Default for PerturbationParams {
    fn default() -> Self {
        PerturbationParams {
            multiplier: DEFAULT_SLOWDOWN,
            extra_latency: DEFAULT_EXTRA_LATENCY,
            start: 0.0,
            end: f64::INFINITY,
        }
    }
}

/// Perturb every worker on `node`; by default for the whole run.
pub fn inject_perturbations(
    cfg: &SimConfig,
    kind: PerturbationKind,
    node: usize,
    params: PerturbationParams,
) -> Result<SimConfig> {
    let members: Vec<usize> = cfg.node_members(node).collect();
    if members.is_empty() {
        return Err(Error::Config("perturbed node has no workers"));
    }
    if !(params.start < params.end) {
        return Err(Error::Config("perturbation interval needs start < end"));
    }
    let mut out = cfg.clone();
    for pe in members {
        let m = &mut out.pe_models[pe];
        if matches!(kind, PerturbationKind::Pe | PerturbationKind::Combined) {
            if !(params.multiplier > 0.0 && params.multiplier <= 1.0) {
                return Err(Error::Config("speed multiplier must be in (0, 1]"));
            }
            m.speed_schedule
                .push((params.start, params.end, params.multiplier));
        }
        if matches!(kind, PerturbationKind::Latency | PerturbationKind::Combined) {
            if !(params.extra_latency >= 0.0) {
                return Err(Error::Config("extra latency must be non-negative"));
            }
            m.latency_schedule
                .push((params.start, params.end, params.extra_latency));
        }
    }
    Ok(out)
}
