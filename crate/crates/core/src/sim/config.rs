use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::schedule::Technique;
use crate::workload::WorkloadSpec;

/// Default scheduling overhead per assignment, seconds.
pub const DEFAULT_H: f64 = 1e-4;
/// Default one-way message latency, seconds.
pub const DEFAULT_BASE_LATENCY: f64 = 1e-5;
pub const DEFAULT_PES_PER_NODE: usize = 4;

/// Failure and perturbation model of one worker.
#[derive(Debug, Clone, PartialEq)]
pub struct PeModel {
    pub id: usize,
    pub node: usize,
    /// Fail-stop time; the worker never recovers.
    pub fail_at: Option<f64>,
    /// `(start, end, multiplier)`: compute speed is multiplied by every
    /// active multiplier.
    pub speed_schedule: Vec<(f64, f64, f64)>,
    /// `(start, end, extra)`: one-way delay added to messages to or from
    /// this worker sent while the interval is active.
    pub latency_schedule: Vec<(f64, f64, f64)>,
}

impl PeModel {
    pub fn new(id: usize, node: usize) -> Self {
        PeModel {
            id,
            node,
            fail_at: None,
            speed_schedule: Vec::new(),
            latency_schedule: Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(f) = self.fail_at {
            if !(f >= 0.0) {
                return Err(Error::Config("fail_at must be non-negative"));
            }
        }
        for &(s, e, m) in &self.speed_schedule {
            if !(s < e) || !(m > 0.0 && m <= 1.0) {
                return Err(Error::Config(
                    "speed intervals need start < end and multiplier in (0, 1]",
                ));
            }
        }
        for &(s, e, d) in &self.latency_schedule {
            if !(s < e) || !(d >= 0.0) {
                return Err(Error::Config(
                    "latency intervals need start < end and extra >= 0",
                ));
            }
        }
        Ok(())
    }
}

/// A complete simulation scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub p: usize,
    pub technique: Technique,
    pub rdlb: bool,
    /// Master time per chunk assignment, seconds.
    pub h: f64,
    pub base_latency: f64,
    pub workload: WorkloadSpec,
    pub pe_models: Vec<PeModel>,
    /// Seeds the technique's random stream.
    pub seed: u64,
    /// Simulated time after which an unfinished run is declared hung.
    /// `None` relies on the event queue draining.
    pub hang_horizon: Option<f64>,
    /// Fixed WF weights; uniform when `None`.
    pub wf_weights: Option<Vec<f64>>,
    pub record_trace: bool,
}

impl SimConfig {
    pub fn new(technique: Technique, p: usize, workload: WorkloadSpec) -> Self {
        SimConfig {
            n: workload.n,
            p,
            technique,
            rdlb: false,
            h: DEFAULT_H,
            base_latency: DEFAULT_BASE_LATENCY,
            workload,
            pe_models: (0..p)
                .map(|i| PeModel::new(i, i / DEFAULT_PES_PER_NODE))
                .collect(),
            seed: 0,
            hang_horizon: None,
            wf_weights: None,
            record_trace: true,
        }
    }

    pub fn with_rdlb(mut self, on: bool) -> Self {
        self.rdlb = on;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_overheads(mut self, h: f64, base_latency: f64) -> Self {
        self.h = h;
        self.base_latency = base_latency;
        self
    }

    pub fn with_pes_per_node(mut self, k: usize) -> Self {
        let k = k.max(1);
        for m in &mut self.pe_models {
            m.node = m.id / k;
        }
        self
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.record_trace = on;
        self
    }

    /// Workers placed on `node`.
    pub fn node_members(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.pe_models
            .iter()
            .filter(move |m| m.node == node)
            .map(|m| m.id)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.n == 0 {
            return Err(Error::Config("need P >= 1 and N >= 1"));
        }
        if self.workload.n != self.n {
            return Err(Error::Config("workload length must equal N"));
        }
        if self.pe_models.len() != self.p
            || self.pe_models.iter().enumerate().any(|(i, m)| m.id != i)
        {
            return Err(Error::Config("need one PE model per worker, in id order"));
        }
        if !(self.h >= 0.0) || !(self.base_latency >= 0.0) {
            return Err(Error::Config("h and base_latency must be non-negative"));
        }
        if let Some(h) = self.hang_horizon {
            if !(h > 0.0) {
                return Err(Error::Config("hang_horizon must be positive"));
            }
        }
        self.pe_models.iter().try_for_each(PeModel::validate)
    }
}
