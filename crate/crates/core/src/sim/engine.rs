use alloc::vec;
use alloc::vec::Vec;

use super::config::SimConfig;
use super::queue::{EventKind, EventQueue};
use super::timing::{compute_finish, extra_latency};
use crate::error::Result;
use crate::ledger::{RangeId, TaskLedger};
use crate::schedule::{PerfSample, TechniqueParams, TechniqueState};
use crate::stats;

/// One processed event.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub time: f64,
    pub kind: EventKind,
    pub pe: usize,
    pub chunk_start: Option<usize>,
    pub chunk_size: Option<usize>,
    pub duplicate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailureRecord {
    pub pe: usize,
    pub time: f64,
    /// `(start, size)` of the chunk the worker held (assigned, not yet
    /// reported) when it failed.
    pub held: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub completed: bool,
    /// Time of the report that finished the last iteration; infinite when
    /// the run did not complete.
    pub t_par: f64,
    /// Time of the last processed event.
    pub end_time: f64,
    pub per_pe_busy: Vec<f64>,
    pub per_pe_idle: Vec<f64>,
    /// Iterations each worker finished computing (duplicates included).
    pub per_pe_iterations: Vec<usize>,
    /// Chunks handed out, duplicates included.
    pub n_chunks: usize,
    pub n_rescheduled: usize,
    /// Iterations lost to failures or computed by a duplicate that lost the
    /// race.
    pub n_wasted_iterations: usize,
    pub failures: Vec<FailureRecord>,
    pub trace: Vec<TraceRecord>,
}

#[derive(Debug, Clone)]
struct Assignment {
    range: RangeId,
    start: usize,
    size: usize,
    duplicate: bool,
    compute: f64,
    overhead: f64,
}

#[derive(Debug, Clone, Default)]
struct Worker {
    alive: bool,
    holding: Option<usize>,
    request_sent: f64,
    computing: Option<(f64, f64)>,
    busy: f64,
    executed: usize,
}

struct Engine<'a> {
    cfg: &'a SimConfig,
    times: Vec<f64>,
    queue: EventQueue,
    ledger: TaskLedger,
    tech: TechniqueState,
    workers: Vec<Worker>,
    assignments: Vec<Assignment>,
    master_free: f64,
    result: SimResult,
}

/// Run one scenario to completion, hang detection or the horizon.
pub fn run_simulation(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let times = cfg.workload.generate()?;
    let params = TechniqueParams {
        h: cfg.h,
        sigma: stats::std_dev(&times),
        weights: cfg.wf_weights.clone(),
        seed: cfg.seed,
    };
    let tech = TechniqueState::new(cfg.technique, cfg.n, cfg.p, &params)?;
    let mut engine = Engine {
        cfg,
        times,
        queue: EventQueue::default(),
        ledger: TaskLedger::new(cfg.n),
        tech,
        workers: vec![
            Worker {
                alive: true,
                ..Default::default()
            };
            cfg.p
        ],
        assignments: Vec::new(),
        master_free: 0.0,
        result: SimResult {
            completed: false,
            t_par: f64::INFINITY,
            end_time: 0.0,
            per_pe_busy: vec![0.0; cfg.p],
            per_pe_idle: vec![0.0; cfg.p],
            per_pe_iterations: vec![0; cfg.p],
            n_chunks: 0,
            n_rescheduled: 0,
            n_wasted_iterations: 0,
            failures: Vec::new(),
            trace: Vec::new(),
        },
    };
    engine.run()?;
    Ok(engine.finish())
}

impl Engine<'_> {
    fn latency(&self, pe: usize, send: f64) -> f64 {
        self.cfg.base_latency + extra_latency(&self.cfg.pe_models[pe].latency_schedule, send)
    }

    fn trace(&mut self, time: f64, kind: EventKind, pe: usize, assignment: Option<usize>) {
        if !self.cfg.record_trace {
            return;
        }
        let (chunk_start, chunk_size, duplicate) = match assignment.map(|a| &self.assignments[a]) {
            Some(a) => (Some(a.start), Some(a.size), a.duplicate),
            None => (None, None, false),
        };
        self.result.trace.push(TraceRecord {
            time,
            kind,
            pe,
            chunk_start,
            chunk_size,
            duplicate,
        });
    }

    fn run(&mut self) -> Result<()> {
        for m in &self.cfg.pe_models {
            if let Some(f) = m.fail_at {
                self.queue.push(f, EventKind::Failure, m.id, None);
            }
            for &(s, e, _) in m.speed_schedule.iter().chain(&m.latency_schedule) {
                self.queue.push(s, EventKind::PerturbStart, m.id, None);
                if e.is_finite() {
                    self.queue.push(e, EventKind::PerturbEnd, m.id, None);
                }
            }
        }
        for pe in 0..self.cfg.p {
            let arrive = self.latency(pe, 0.0);
            self.queue.push(arrive, EventKind::WorkRequest, pe, None);
        }
        let horizon = self.cfg.hang_horizon.unwrap_or(f64::INFINITY);
        while let Some(ev) = self.queue.pop() {
            if ev.time > horizon {
                break;
            }
            let pe = ev.pe;
            if ev.kind != EventKind::Failure && !self.workers[pe].alive {
                // messages from or to a failed worker are lost
                continue;
            }
            self.result.end_time = ev.time;
            match ev.kind {
                EventKind::Failure => self.on_failure(ev.time, pe),
                EventKind::PerturbStart | EventKind::PerturbEnd => {
                    self.trace(ev.time, ev.kind, pe, None)
                }
                EventKind::ChunkCompletion => self.on_chunk_done(
                    ev.time,
                    pe,
                    ev.assignment.expect("completion carries its chunk"),
                ),
                EventKind::WorkRequest => {
                    if self.on_request(ev.time, pe, ev.assignment)? {
                        break;
                    }
                }
                EventKind::Assignment => self.on_assignment(
                    ev.time,
                    pe,
                    ev.assignment.expect("assignment carries its chunk"),
                ),
            }
        }
        Ok(())
    }

    fn on_failure(&mut self, t: f64, pe: usize) {
        let w = &mut self.workers[pe];
        if !w.alive {
            return;
        }
        w.alive = false;
        if let Some((start, _)) = w.computing.take() {
            w.busy += t - start;
        }
        let held = w.holding.take();
        let held_chunk = held.map(|a| (self.assignments[a].start, self.assignments[a].size));
        if let Some((_, size)) = held_chunk {
            self.result.n_wasted_iterations += size;
        }
        self.result.failures.push(FailureRecord {
            pe,
            time: t,
            held: held_chunk,
        });
        self.trace(t, EventKind::Failure, pe, held);
    }

    fn on_chunk_done(&mut self, t: f64, pe: usize, a: usize) {
        let size = self.assignments[a].size;
        let w = &mut self.workers[pe];
        if let Some((start, _)) = w.computing.take() {
            w.busy += t - start;
        }
        w.executed += size;
        w.request_sent = t;
        self.trace(t, EventKind::ChunkCompletion, pe, Some(a));
        let arrive = t + self.latency(pe, t);
        self.queue.push(arrive, EventKind::WorkRequest, pe, Some(a));
    }

    /// Returns `true` when the loop is complete.
    fn on_request(&mut self, t: f64, pe: usize, report: Option<usize>) -> Result<bool> {
        self.trace(t, EventKind::WorkRequest, pe, report);
        if let Some(a) = report {
            self.workers[pe].holding = None;
            let (range, size, compute, overhead) = {
                let x = &self.assignments[a];
                (x.range, x.size, x.compute, x.overhead)
            };
            if !self.ledger.report_range(range)? {
                self.result.n_wasted_iterations += size;
            }
            self.tech.record_sample(
                pe,
                PerfSample {
                    size,
                    compute,
                    overhead,
                },
            );
            if self.ledger.is_complete() {
                self.result.completed = true;
                self.result.t_par = t;
                return Ok(true);
            }
        }
        let (range, duplicate) = if self.tech.remaining() > 0 {
            let size = self.tech.next_chunk(pe)?;
            (self.ledger.schedule(size, pe)?, false)
        } else if self.cfg.rdlb {
            match self.ledger.rdlb_select() {
                Some(r) => (r, true),
                None => return Ok(false),
            }
        } else {
            // no reply: the worker blocks for good
            return Ok(false);
        };
        let r = self.ledger.range(range);
        let (start, size) = (r.start, r.size);
        let a = self.assignments.len();
        self.assignments.push(Assignment {
            range,
            start,
            size,
            duplicate,
            compute: 0.0,
            overhead: 0.0,
        });
        self.result.n_chunks += 1;
        if duplicate {
            self.result.n_rescheduled += 1;
        }
        self.workers[pe].holding = Some(a);
        let begin = t.max(self.master_free);
        let send = begin + self.cfg.h;
        self.master_free = send;
        let arrive = send + self.latency(pe, send);
        self.queue.push(arrive, EventKind::Assignment, pe, Some(a));
        Ok(false)
    }

    fn on_assignment(&mut self, t: f64, pe: usize, a: usize) {
        self.trace(t, EventKind::Assignment, pe, Some(a));
        let (start, size) = (self.assignments[a].start, self.assignments[a].size);
        let work: f64 = self.times[start..start + size].iter().sum();
        let finish = compute_finish(&self.cfg.pe_models[pe].speed_schedule, t, work);
        let w = &mut self.workers[pe];
        let overhead = t - w.request_sent;
        w.computing = Some((t, finish));
        let x = &mut self.assignments[a];
        x.compute = finish - t;
        x.overhead = overhead;
        self.queue
            .push(finish, EventKind::ChunkCompletion, pe, Some(a));
    }

    fn finish(mut self) -> SimResult {
        let end = if self.result.completed {
            self.result.t_par
        } else {
            self.result.end_time
        };
        for (i, w) in self.workers.iter().enumerate() {
            let mut busy = w.busy;
            if let Some((start, finish)) = w.computing {
                busy += finish.min(end) - start;
            }
            let lifetime = match self.cfg.pe_models[i].fail_at {
                Some(f) if f < end => f,
                _ => end,
            };
            self.result.per_pe_busy[i] = busy;
            self.result.per_pe_idle[i] = (lifetime - busy).max(0.0);
            self.result.per_pe_iterations[i] = w.executed;
        }
        self.result
    }
}
