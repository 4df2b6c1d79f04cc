//! Expected makespan with one fail-stop failure, and the comparison with
//! checkpointing.
//!
//! Tasks are equal (`t` seconds) and equally distributed (`n` per PE over
//! `q` PEs). A single failure strikes uniformly over a PE's `n` tasks; the
//! unfinished tasks are redistributed over the `q − 1` survivors.

use crate::error::{Error, Result};

/// `λ·C` below which the first-order expansions are considered valid.
pub const FIRST_ORDER_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryParams {
    /// Tasks per PE.
    pub n: usize,
    /// PE count.
    pub q: usize,
    /// Time per task, seconds.
    pub t: f64,
    /// Failure rate, 1/seconds.
    pub lambda: f64,
    /// Checkpoint cost, seconds.
    pub c: f64,
}

impl TheoryParams {
    pub fn new(n: usize, q: usize, t: f64, lambda: f64) -> Self {
        TheoryParams {
            n,
            q,
            t,
            lambda,
            c: 0.0,
        }
    }

    pub fn with_checkpoint_cost(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Config("n must be at least 1"));
        }
        if self.q < 2 {
            return Err(Error::Config(
                "q must be at least 2 (survivors divide by q - 1)",
            ));
        }
        if !(self.t > 0.0) || !(self.lambda >= 0.0) || !(self.c >= 0.0) {
            return Err(Error::Config("need t > 0, lambda >= 0, C >= 0"));
        }
        Ok(())
    }

    /// Failure-free makespan `T = n·t`.
    pub fn makespan(&self) -> f64 {
        self.n as f64 * self.t
    }

    /// Probability of one exponential failure within `T`: `1 − e^(−λT)`.
    pub fn p_fail(&self) -> f64 {
        -libm::expm1(-self.lambda * self.makespan())
    }

    /// `(t/2)·(n+1)/(q−1)`: the expected extra time given that a failure
    /// happened.
    fn redistribution(&self) -> f64 {
        self.t / 2.0 * (self.n as f64 + 1.0) / (self.q as f64 - 1.0)
    }

    /// `E_T = T + p_F·(t/2)·(n+1)/(q−1)`.
    pub fn expected_time_one_failure(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.makespan() + self.p_fail() * self.redistribution())
    }

    /// First-order expansion in `λT`: `T + λT·(t/2)·(n+1)/(q−1)`.
    pub fn expected_time_first_order(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.makespan() + self.lambda * self.makespan() * self.redistribution())
    }

    /// Relative overhead of robust rescheduling, `(λt/2)·(n+1)/(q−1)`.
    pub fn overhead_rdlb(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.lambda * self.redistribution())
    }

    /// Relative overhead of optimal periodic checkpointing, `√(2λC)`.
    pub fn overhead_checkpoint(&self) -> f64 {
        libm::sqrt(2.0 * self.lambda * self.c)
    }

    /// Checkpoint cost above which rescheduling beats checkpointing:
    /// `C ≥ (λt²/8)·(n+1)²/(q−1)²`.
    pub fn checkpoint_crossover(&self) -> Result<Crossover> {
        self.validate()?;
        let ratio = (self.n as f64 + 1.0) / (self.q as f64 - 1.0);
        let threshold = self.lambda * self.t * self.t / 8.0 * ratio * ratio;
        Ok(Crossover {
            threshold,
            rdlb_better: self.overhead_rdlb()? <= self.overhead_checkpoint(),
            first_order_regime: self.lambda * self.c <= FIRST_ORDER_LIMIT,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    /// Checkpoint cost (seconds) where both overheads are equal.
    pub threshold: f64,
    /// Whether rescheduling has no more overhead than checkpointing at the
    /// given `C`.
    pub rdlb_better: bool,
    /// `λC` is small enough for the first-order expansions to hold.
    pub first_order_regime: bool,
}

/// Failure-free makespan from per-PE task times: the largest per-PE sum.
pub fn makespan<S: AsRef<[f64]>>(per_pe: &[S]) -> f64 {
    per_pe
        .iter()
        .map(|tasks| tasks.as_ref().iter().sum::<f64>())
        .fold(0.0, f64::max)
}
