//! Time-ordered event queue with deterministic tie-breaking.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

/// Event kinds in tie-breaking priority order (earlier variants first at
/// equal times).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKind {
    Failure,
    PerturbStart,
    PerturbEnd,
    /// A worker finished computing a chunk.
    ChunkCompletion,
    /// A request (possibly carrying a completion report) reached the master.
    WorkRequest,
    /// The master's reply with a chunk reached a worker.
    Assignment,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Failure => "Failure",
            EventKind::PerturbStart => "PerturbStart",
            EventKind::PerturbEnd => "PerturbEnd",
            EventKind::ChunkCompletion => "ChunkCompletion",
            EventKind::WorkRequest => "WorkRequest",
            EventKind::Assignment => "Assignment",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub pe: usize,
    /// assignment index carried by the event, if any
    pub assignment: Option<usize>,
    seq: u64,
}

impl Event {
    fn key(&self) -> (f64, EventKind, usize, u64) {
        (self.time, self.kind, self.pe, self.seq)
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        let (ta, ka, pa, sa) = self.key();
        let (tb, kb, pb, sb) = other.key();
        tb.total_cmp(&ta)
            .then(kb.cmp(&ka))
            .then(pb.cmp(&pa))
            .then(sb.cmp(&sa))
    }
}

#[derive(Debug, Default)]
pub(crate) struct EventQueue {
    heap: BinaryHeap<Event>,
    next_seq: u64,
}

impl EventQueue {
    pub fn push(&mut self, time: f64, kind: EventKind, pe: usize, assignment: Option<usize>) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Event {
            time,
            kind,
            pe,
            assignment,
            seq,
        });
    }

    pub fn pop(&mut self) -> Option<Event> {
        self.heap.pop()
    }
}
