use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rules::{self, div_ceil, TssParams};
use super::Technique;
use crate::error::{Error, Result};
use crate::stats::Running;

/// Inputs a technique may need beyond `N` and `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct TechniqueParams {
    /// Scheduling overhead per assignment in seconds (FSC).
    pub h: f64,
    /// Standard deviation of iteration execution times in seconds (FSC).
    pub sigma: f64,
    /// Fixed relative PE weights for WF; uniform when `None`.
    pub weights: Option<Vec<f64>>,
    /// Seed of the RAND stream.
    pub seed: u64,
}

impl Default for TechniqueParams {
    fn default() -> Self {
        TechniqueParams {
            h: 1e-4,
            sigma: 0.0,
            weights: None,
            seed: 0,
        }
    }
}

/// One measured chunk: size, compute time and scheduling-overhead time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerfSample {
    pub size: usize,
    pub compute: f64,
    pub overhead: f64,
}

#[derive(Debug, Clone, Default)]
struct PeTotals {
    iterations: f64,
    compute: f64,
    overhead: f64,
}

/// Evolving scheduling state of one technique over one loop.
#[derive(Debug, Clone)]
pub struct TechniqueState {
    technique: Technique,
    n: usize,
    p: usize,
    remaining: usize,
    /// chunks still to hand out from the current batch
    batch_chunks_left: usize,
    /// iterations in the current batch, `ceil(R/2)` at batch start
    batch_size: usize,
    tss_next: f64,
    tss_decrement: f64,
    fixed_chunk: usize,
    weights: Vec<f64>,
    perf_samples: Vec<Vec<PerfSample>>,
    totals: Vec<PeTotals>,
    per_iter: Vec<Running>,
    rng: ChaCha8Rng,
}

impl TechniqueState {
    pub fn new(technique: Technique, n: usize, p: usize, params: &TechniqueParams) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("loop must have at least one iteration"));
        }
        if p == 0 {
            return Err(Error::Config("need at least one PE"));
        }
        let fixed_chunk = match technique {
            Technique::Static => div_ceil(n, p),
            Technique::Fsc => {
                // zero variance sends the formula to infinity; a fixed chunk
                // never needs to be larger than the static block
                let block = div_ceil(n, p);
                if params.sigma > 0.0 {
                    rules::chunk_fsc(n, p, params.h, params.sigma)?.min(block)
                } else {
                    if p < 2 {
                        return Err(Error::Config(
                            "FSC needs at least two PEs (ln P must be positive)",
                        ));
                    }
                    block
                }
            }
            Technique::Mfsc => rules::mfsc_chunk(n, p),
            _ => 1,
        };
        let weights = match (&params.weights, technique) {
            (Some(w), Technique::Wf) => normalize(w, p)?,
            _ => vec![1.0; p],
        };
        let tss = TssParams::new(n, p);
        Ok(TechniqueState {
            technique,
            n,
            p,
            remaining: n,
            batch_chunks_left: 0,
            batch_size: 0,
            tss_next: tss.first as f64,
            tss_decrement: tss.decrement,
            fixed_chunk,
            weights,
            perf_samples: vec![Vec::new(); p],
            totals: vec![PeTotals::default(); p],
            per_iter: vec![Running::default(); p],
            rng: ChaCha8Rng::seed_from_u64(params.seed),
        })
    }

    pub fn technique(&self) -> Technique {
        self.technique
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Unscheduled iterations left (`R`).
    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn samples(&self, pe: usize) -> &[PerfSample] {
        &self.perf_samples[pe]
    }

    /// Per-iteration mean and standard deviation learned for `pe` (AF).
    pub fn estimate(&self, pe: usize) -> Option<(f64, f64)> {
        let r = &self.per_iter[pe];
        (r.count() > 0).then(|| (r.mean(), r.std_dev()))
    }

    /// Size of the next chunk for a request from `pe`; decrements `R`.
    pub fn next_chunk(&mut self, pe: usize) -> Result<usize> {
        if pe >= self.p {
            return Err(Error::PeOutOfRange { pe, p: self.p });
        }
        if self.remaining == 0 {
            return Err(Error::NoWork);
        }
        let r = self.remaining;
        let raw = match self.technique {
            Technique::Static | Technique::Fsc | Technique::Mfsc => self.fixed_chunk,
            Technique::Ss => 1,
            Technique::Gss => rules::chunk_gss(r, self.p),
            Technique::Tss => {
                let c = libm::round(self.tss_next).max(1.0) as usize;
                self.tss_next -= self.tss_decrement;
                c
            }
            Technique::Rand => {
                let (lo, hi) = rules::rand_bounds(self.n, self.p);
                self.rng.random_range(lo..=hi)
            }
            Technique::Af => self.af_chunk(pe),
            Technique::Fac
            | Technique::Wf
            | Technique::AwfB
            | Technique::AwfC
            | Technique::AwfD
            | Technique::AwfE => self.batched_chunk(pe),
        };
        let chunk = raw.clamp(1, r);
        self.remaining -= chunk;
        Ok(chunk)
    }

    fn batched_chunk(&mut self, pe: usize) -> usize {
        if self.batch_chunks_left == 0 {
            self.batch_size = div_ceil(self.remaining, 2);
            self.batch_chunks_left = self.p;
            if matches!(self.technique, Technique::AwfB | Technique::AwfD) {
                self.refresh_weights();
            }
        }
        self.batch_chunks_left -= 1;
        if self.technique == Technique::Fac {
            div_ceil(self.batch_size, self.p).max(1)
        } else {
            rules::chunk_weighted(self.batch_size, self.p, self.weights[pe])
        }
    }

    fn af_chunk(&self, pe: usize) -> usize {
        if self.per_iter[pe].count() == 0 {
            return div_ceil(self.n, 2 * self.p * self.p).max(1);
        }
        // PEs without measurements yet borrow the average of those with
        let known: Vec<&Running> = self.per_iter.iter().filter(|r| r.count() > 0).collect();
        let avg_mu = known.iter().map(|r| r.mean()).sum::<f64>() / known.len() as f64;
        let avg_sigma = known.iter().map(|r| r.std_dev()).sum::<f64>() / known.len() as f64;
        let mut mu = Vec::with_capacity(self.p);
        let mut sigma = Vec::with_capacity(self.p);
        for r in &self.per_iter {
            if r.count() > 0 {
                mu.push(r.mean().max(MIN_ITER_TIME));
                sigma.push(r.std_dev());
            } else {
                mu.push(avg_mu.max(MIN_ITER_TIME));
                sigma.push(avg_sigma);
            }
        }
        rules::chunk_af(&mu, &sigma, self.remaining, pe)
    }

    /// Feed a completed-chunk measurement from `pe` into the adaptive state.
    ///
    /// AWF-C/E recompute weights right away, AWF-B/D at the next batch
    /// boundary, AF updates its per-PE μ/σ.
    pub fn record_sample(&mut self, pe: usize, sample: PerfSample) {
        if pe >= self.p || sample.size == 0 {
            return;
        }
        self.perf_samples[pe].push(sample);
        let t = &mut self.totals[pe];
        t.iterations += sample.size as f64;
        t.compute += sample.compute;
        t.overhead += sample.overhead;
        self.per_iter[pe].push(sample.compute / sample.size as f64);
        if matches!(self.technique, Technique::AwfC | Technique::AwfE) {
            self.refresh_weights();
        }
    }

    fn refresh_weights(&mut self) {
        let include_overhead = matches!(self.technique, Technique::AwfD | Technique::AwfE);
        let iterations: Vec<f64> = self.totals.iter().map(|t| t.iterations).collect();
        let times: Vec<f64> = self
            .totals
            .iter()
            .map(|t| {
                if include_overhead {
                    t.compute + t.overhead
                } else {
                    t.compute
                }
            })
            .collect();
        if let Some(w) = rules::weights_from_totals(&iterations, &times) {
            self.weights = w;
        }
    }
}

/// Smallest per-iteration time estimate AF will divide by.
const MIN_ITER_TIME: f64 = 1e-12;

/// Recompute AWF weights from every PE's samples.
///
/// Returns `None` (weights stay as they are) until every PE has at least one
/// sample. `include_overhead` selects AWF-D/E, whose elapsed time includes
/// the scheduling overhead of each chunk.
pub fn update_weights(samples: &[Vec<PerfSample>], include_overhead: bool) -> Option<Vec<f64>> {
    if samples.iter().any(|s| s.is_empty()) {
        return None;
    }
    let iterations: Vec<f64> = samples
        .iter()
        .map(|s| s.iter().map(|x| x.size as f64).sum())
        .collect();
    let times: Vec<f64> = samples
        .iter()
        .map(|s| {
            s.iter()
                .map(|x| {
                    if include_overhead {
                        x.compute + x.overhead
                    } else {
                        x.compute
                    }
                })
                .sum()
        })
        .collect();
    rules::weights_from_totals(&iterations, &times)
}

fn normalize(w: &[f64], p: usize) -> Result<Vec<f64>> {
    if w.len() != p {
        return Err(Error::Config("WF weight vector length must equal P"));
    }
    if w.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Config("WF weights must be positive and finite"));
    }
    let sum: f64 = w.iter().sum();
    Ok(w.iter().map(|x| p as f64 * x / sum).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drain(t: Technique, n: usize, p: usize) -> Vec<usize> {
        let mut s = TechniqueState::new(t, n, p, &TechniqueParams::default()).unwrap();
        let mut out = Vec::new();
        let mut pe = 0;
        while s.remaining() > 0 {
            out.push(s.next_chunk(pe).unwrap());
            pe = (pe + 1) % p;
        }
        out
    }

    #[test]
    fn static_blocks() {
        assert_eq!(drain(Technique::Static, 100, 4), [25, 25, 25, 25]);
        assert_eq!(drain(Technique::Static, 10, 4), [3, 3, 3, 1]);
    }

    #[test]
    fn ss_is_one() {
        assert!(drain(Technique::Ss, 37, 3).iter().all(|&c| c == 1));
    }

    #[test]
    fn fac_sequence() {
        let mut want = Vec::new();
        for c in [13, 6, 3, 2, 1] {
            want.extend([c; 4]);
        }
        assert_eq!(drain(Technique::Fac, 100, 4), want);
        assert!(drain(Technique::Fac, 4, 4).iter().all(|&c| c == 1));
    }

    #[test]
    fn tss_first_three() {
        assert_eq!(&drain(Technique::Tss, 100, 4)[..3], &[13, 12, 11]);
        assert!(drain(Technique::Tss, 8, 4).iter().all(|&c| c == 1));
    }

    #[test]
    fn no_work_after_exhaustion() {
        let mut s = TechniqueState::new(Technique::Gss, 3, 2, &TechniqueParams::default()).unwrap();
        while s.remaining() > 0 {
            s.next_chunk(0).unwrap();
        }
        assert_eq!(s.next_chunk(0), Err(Error::NoWork));
        assert_eq!(s.next_chunk(5), Err(Error::PeOutOfRange { pe: 5, p: 2 }));
    }

    #[test]
    fn wf_uses_fixed_weights() {
        let params = TechniqueParams {
            weights: Some(vec![3.0, 1.0, 1.0, 1.0]),
            ..Default::default()
        };
        let mut s = TechniqueState::new(Technique::Wf, 100, 4, &params).unwrap();
        // batch 50, weights (2, 2/3, 2/3, 2/3)
        assert_eq!(s.next_chunk(0).unwrap(), 25);
        assert_eq!(s.next_chunk(1).unwrap(), 9);
    }

    #[test]
    fn wf_rejects_bad_weights() {
        let params = TechniqueParams {
            weights: Some(vec![1.0, 0.0]),
            ..Default::default()
        };
        assert!(TechniqueState::new(Technique::Wf, 10, 2, &params).is_err());
    }

    #[test]
    fn awf_c_learns_fast_pe() {
        let mut s =
            TechniqueState::new(Technique::AwfC, 1000, 4, &TechniqueParams::default()).unwrap();
        let sample = |size, compute| PerfSample {
            size,
            compute,
            overhead: 0.0,
        };
        s.record_sample(0, sample(10, 5.0));
        for pe in 1..4 {
            s.record_sample(pe, sample(10, 10.0));
        }
        let w = s.weights();
        for (got, want) in w.iter().zip([1.6, 0.8, 0.8, 0.8]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn awf_b_waits_for_batch_boundary() {
        let mut s =
            TechniqueState::new(Technique::AwfB, 1000, 2, &TechniqueParams::default()).unwrap();
        s.next_chunk(0).unwrap();
        s.record_sample(
            0,
            PerfSample {
                size: 10,
                compute: 1.0,
                overhead: 0.0,
            },
        );
        s.record_sample(
            1,
            PerfSample {
                size: 10,
                compute: 3.0,
                overhead: 0.0,
            },
        );
        assert_eq!(s.weights(), &[1.0, 1.0]);
        s.next_chunk(1).unwrap();
        // next request opens a new batch and picks up the samples
        s.next_chunk(0).unwrap();
        assert!((s.weights()[0] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn awf_d_counts_overhead() {
        let mut samples = vec![Vec::new(); 2];
        samples[0].push(PerfSample {
            size: 10,
            compute: 1.0,
            overhead: 1.0,
        });
        samples[1].push(PerfSample {
            size: 10,
            compute: 1.0,
            overhead: 0.0,
        });
        let b = update_weights(&samples, false).unwrap();
        let d = update_weights(&samples, true).unwrap();
        assert_eq!(b, [1.0, 1.0]);
        assert!(d[0] < d[1]);
    }

    #[test]
    fn running_totals_agree_with_sample_lists() {
        let mut s =
            TechniqueState::new(Technique::AwfE, 1000, 3, &TechniqueParams::default()).unwrap();
        let xs = [
            (0, 7, 1.3, 0.2),
            (1, 4, 0.9, 0.05),
            (2, 9, 2.2, 0.4),
            (0, 3, 0.4, 0.1),
            (2, 1, 0.3, 0.0),
        ];
        for (pe, size, compute, overhead) in xs {
            s.record_sample(
                pe,
                PerfSample {
                    size,
                    compute,
                    overhead,
                },
            );
        }
        let from_lists = update_weights(&s.perf_samples, true).unwrap();
        for (a, b) in from_lists.iter().zip(s.weights()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn af_bootstrap_then_adapts() {
        let mut s =
            TechniqueState::new(Technique::Af, 1000, 2, &TechniqueParams::default()).unwrap();
        // ceil(1000 / 8)
        assert_eq!(s.next_chunk(0).unwrap(), 125);
        s.record_sample(
            0,
            PerfSample {
                size: 125,
                compute: 125.0,
                overhead: 0.0,
            },
        );
        s.record_sample(
            1,
            PerfSample {
                size: 125,
                compute: 250.0,
                overhead: 0.0,
            },
        );
        let fast = s.clone().next_chunk(0).unwrap();
        let slow = s.next_chunk(1).unwrap();
        assert!(fast > slow);
    }

    #[test]
    fn rand_is_seeded() {
        let a = drain(Technique::Rand, 5000, 8);
        let b = drain(Technique::Rand, 5000, 8);
        assert_eq!(a, b);
        let (lo, hi) = rules::rand_bounds(5000, 8);
        assert!(a[..a.len() - 1].iter().all(|&c| (lo..=hi).contains(&c)));
    }

    #[test]
    fn fsc_zero_sigma_caps_at_block() {
        assert_eq!(drain(Technique::Fsc, 100, 4), [25, 25, 25, 25]);
        assert!(TechniqueState::new(Technique::Fsc, 100, 1, &TechniqueParams::default()).is_err());
    }
}
