//! Per-iteration bookkeeping for robust rescheduling.
//!
//! Every iteration is `Unscheduled`, `Scheduled` or `Finished`. Once all
//! iterations are scheduled, [`TaskLedger::rdlb_select`] hands out
//! scheduled-but-unfinished ranges again so idle PEs can duplicate them; the
//! first completion report for a range wins.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IterState {
    Unscheduled,
    Scheduled,
    Finished,
}

/// Index of a range in original scheduling order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RangeId(pub usize);

/// A range as first scheduled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduledRange {
    pub start: usize,
    pub size: usize,
    pub pe: usize,
}

impl ScheduledRange {
    pub fn iterations(&self) -> Range<usize> {
        self.start..self.start + self.size
    }
}

#[derive(Debug, Clone)]
pub struct TaskLedger {
    state: Vec<IterState>,
    scheduled_order: Vec<ScheduledRange>,
    /// finished iterations per scheduled range
    finished_in_range: Vec<usize>,
    unfinished: BTreeSet<usize>,
    cursor: usize,
    next_unscheduled: usize,
    counts: [usize; 3],
}

impl TaskLedger {
    pub fn new(n_total: usize) -> Self {
        TaskLedger {
            state: vec![IterState::Unscheduled; n_total],
            scheduled_order: Vec::new(),
            finished_in_range: Vec::new(),
            unfinished: BTreeSet::new(),
            cursor: 0,
            next_unscheduled: 0,
            counts: [n_total, 0, 0],
        }
    }

    pub fn n_total(&self) -> usize {
        self.state.len()
    }

    pub fn state(&self, iteration: usize) -> IterState {
        self.state[iteration]
    }

    pub fn count(&self, s: IterState) -> usize {
        self.counts[s as usize]
    }

    pub fn is_complete(&self) -> bool {
        self.count(IterState::Finished) == self.n_total()
    }

    pub fn scheduled_order(&self) -> &[ScheduledRange] {
        &self.scheduled_order
    }

    pub fn range(&self, id: RangeId) -> &ScheduledRange {
        &self.scheduled_order[id.0]
    }

    pub fn is_range_finished(&self, id: RangeId) -> bool {
        self.finished_in_range[id.0] == self.scheduled_order[id.0].size
    }

    /// Number of scheduled ranges that still have unfinished iterations.
    pub fn unfinished_ranges(&self) -> usize {
        self.unfinished.len()
    }

    /// Move the next `size` unscheduled iterations to `Scheduled` for `pe`.
    pub fn schedule(&mut self, size: usize, pe: usize) -> Result<RangeId> {
        let start = self.next_unscheduled;
        let end = start + size;
        if size == 0 || end > self.n_total() {
            return Err(Error::RangeOutOfBounds {
                start,
                end,
                n: self.n_total(),
            });
        }
        for s in &mut self.state[start..end] {
            *s = IterState::Scheduled;
        }
        self.counts[IterState::Unscheduled as usize] -= size;
        self.counts[IterState::Scheduled as usize] += size;
        self.next_unscheduled = end;
        let id = self.scheduled_order.len();
        self.scheduled_order
            .push(ScheduledRange { start, size, pe });
        self.finished_in_range.push(0);
        self.unfinished.insert(id);
        Ok(RangeId(id))
    }

    /// Next scheduled-but-unfinished range for an idle PE.
    ///
    /// Walks ranges in original scheduling order with a rotating cursor, so
    /// consecutive calls hand out distinct ranges until every unfinished range
    /// has been issued once, then wraps. `None` once everything is finished.
    pub fn rdlb_select(&mut self) -> Option<RangeId> {
        let id = self
            .unfinished
            .range(self.cursor..)
            .next()
            .or_else(|| self.unfinished.iter().next())
            .copied()?;
        self.cursor = id + 1;
        Some(RangeId(id))
    }

    /// Record that the iterations in `range` completed.
    ///
    /// Returns `true` if any iteration moved to `Finished`; a repeated
    /// (duplicate) report changes nothing and returns `false`.
    pub fn report_completion(&mut self, range: Range<usize>) -> Result<bool> {
        let Range { start, end } = range;
        if start >= end || end > self.n_total() {
            return Err(Error::RangeOutOfBounds {
                start,
                end,
                n: self.n_total(),
            });
        }
        if self.state[start..end].contains(&IterState::Unscheduled) {
            return Err(Error::Unscheduled { start, end });
        }
        let mut changed = false;
        // scheduled ranges are contiguous and sorted by start
        let mut idx = self
            .scheduled_order
            .partition_point(|r| r.start + r.size <= start);
        while idx < self.scheduled_order.len() && self.scheduled_order[idx].start < end {
            let r = &self.scheduled_order[idx];
            let lo = r.start.max(start);
            let hi = (r.start + r.size).min(end);
            let mut newly = 0;
            for s in &mut self.state[lo..hi] {
                if *s == IterState::Scheduled {
                    *s = IterState::Finished;
                    newly += 1;
                }
            }
            if newly > 0 {
                changed = true;
                self.counts[IterState::Scheduled as usize] -= newly;
                self.counts[IterState::Finished as usize] += newly;
                self.finished_in_range[idx] += newly;
                if self.finished_in_range[idx] == r.size {
                    self.unfinished.remove(&idx);
                }
            }
            idx += 1;
        }
        Ok(changed)
    }

    /// Convenience wrapper reporting a whole scheduled range.
    pub fn report_range(&mut self, id: RangeId) -> Result<bool> {
        let r = self.scheduled_order[id.0].iterations();
        self.report_completion(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conserved(l: &TaskLedger) -> bool {
        l.count(IterState::Unscheduled)
            + l.count(IterState::Scheduled)
            + l.count(IterState::Finished)
            == l.n_total()
    }

    #[test]
    fn forward_path() {
        let mut l = TaskLedger::new(10);
        let a = l.schedule(4, 0).unwrap();
        assert_eq!(l.count(IterState::Scheduled), 4);
        assert!(conserved(&l));
        assert!(l.report_range(a).unwrap());
        assert_eq!(l.count(IterState::Finished), 4);
        assert!(!l.report_range(a).unwrap());
        assert_eq!(l.count(IterState::Finished), 4);
        assert!(conserved(&l));
        assert!(!l.is_complete());
        let b = l.schedule(6, 1).unwrap();
        l.report_range(b).unwrap();
        assert!(l.is_complete());
    }

    #[test]
    fn reporting_unscheduled_is_an_error() {
        let mut l = TaskLedger::new(10);
        l.schedule(3, 0).unwrap();
        assert_eq!(
            l.report_completion(2..5),
            Err(Error::Unscheduled { start: 2, end: 5 })
        );
        assert!(l.report_completion(8..12).is_err());
        assert!(l.schedule(8, 0).is_err());
    }

    #[test]
    fn select_single_range_repeats() {
        let mut l = TaskLedger::new(5);
        let a = l.schedule(5, 0).unwrap();
        assert_eq!(l.rdlb_select(), Some(a));
        assert_eq!(l.rdlb_select(), Some(a));
    }

    #[test]
    fn select_skips_finished_and_wraps() {
        let mut l = TaskLedger::new(9);
        let a = l.schedule(3, 0).unwrap();
        let b = l.schedule(3, 1).unwrap();
        let c = l.schedule(3, 2).unwrap();
        l.report_range(b).unwrap();
        assert_eq!(l.rdlb_select(), Some(a));
        assert_eq!(l.rdlb_select(), Some(c));
        assert_eq!(l.rdlb_select(), Some(a));
        l.report_range(a).unwrap();
        l.report_range(c).unwrap();
        assert_eq!(l.rdlb_select(), None);
        assert!(l.is_complete());
    }
}
