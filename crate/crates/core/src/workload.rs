//! Per-iteration execution-time generators.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::stats;

/// Default escape-count budget for the Mandelbrot model.
pub const MANDELBROT_MAX_ITER: u32 = 10_000;
/// Default side of the Mandelbrot grid (512 × 512 = 262,144 iterations).
pub const MANDELBROT_SIDE: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub enum WorkloadKind {
    /// Every iteration takes `t` seconds.
    Constant { t: f64 },
    /// Uniform in `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// Normal with the given mean and σ, resampled until positive.
    Gaussian { mean: f64, sigma: f64 },
    /// Escape counts over `[-2, 0.5] × [-1.25, 1.25]` on a `width × height`
    /// grid, scaled by `cost_per_iter` seconds per inner iteration.
    Mandelbrot {
        width: usize,
        height: usize,
        max_iter: u32,
        cost_per_iter: f64,
    },
    /// Replay of measured or previously generated times.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadSpec {
    pub n: usize,
    pub kind: WorkloadKind,
    pub seed: u64,
}

impl WorkloadSpec {
    pub fn constant(n: usize, t: f64) -> Self {
        WorkloadSpec {
            n,
            kind: WorkloadKind::Constant { t },
            seed: 0,
        }
    }

    pub fn uniform(n: usize, lo: f64, hi: f64, seed: u64) -> Self {
        WorkloadSpec {
            n,
            kind: WorkloadKind::Uniform { lo, hi },
            seed,
        }
    }

    pub fn gaussian(n: usize, mean: f64, sigma: f64, seed: u64) -> Self {
        WorkloadSpec {
            n,
            kind: WorkloadKind::Gaussian { mean, sigma },
            seed,
        }
    }

    /// Low-variability stand-in for the spin-image kernel: uniform times with
    /// the given mean and a coefficient of variation of 0.1.
    pub fn psia_like(n: usize, mean: f64, seed: u64) -> Self {
        let half_width = mean * 0.1 * libm::sqrt(3.0);
        Self::uniform(n, mean - half_width, mean + half_width, seed)
    }

    /// Mandelbrot escape-count model on a square grid; `n` must be a perfect
    /// square.
    pub fn mandelbrot(n: usize, cost_per_iter: f64) -> Self {
        let side = libm::round(libm::sqrt(n as f64)) as usize;
        WorkloadSpec {
            n,
            kind: WorkloadKind::Mandelbrot {
                width: side,
                height: side,
                max_iter: MANDELBROT_MAX_ITER,
                cost_per_iter,
            },
            seed: 0,
        }
    }

    pub fn explicit(times: Vec<f64>) -> Self {
        WorkloadSpec {
            n: times.len(),
            kind: WorkloadKind::Explicit(times),
            seed: 0,
        }
    }

    /// Whether different seeds can produce different vectors.
    pub fn is_seeded(&self) -> bool {
        matches!(
            self.kind,
            WorkloadKind::Uniform { .. } | WorkloadKind::Gaussian { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("workload needs at least one iteration"));
        }
        match &self.kind {
            WorkloadKind::Constant { t } if !(*t > 0.0) => {
                Err(Error::Config("constant time must be positive"))
            }
            WorkloadKind::Uniform { lo, hi } if !(*lo > 0.0 && hi >= lo) => {
                Err(Error::Config("uniform bounds must satisfy 0 < lo <= hi"))
            }
            WorkloadKind::Gaussian { mean, sigma } if !(*mean > 0.0 && *sigma >= 0.0) => {
                Err(Error::Config("gaussian needs mean > 0 and sigma >= 0"))
            }
            WorkloadKind::Mandelbrot {
                width,
                height,
                max_iter,
                cost_per_iter,
            } => {
                if width * height != self.n {
                    Err(Error::GridMismatch {
                        got: self.n,
                        expected: width * height,
                    })
                } else if *max_iter == 0 || !(*cost_per_iter > 0.0) {
                    Err(Error::Config(
                        "mandelbrot needs max_iter > 0 and cost_per_iter > 0",
                    ))
                } else {
                    Ok(())
                }
            }
            WorkloadKind::Explicit(times) => {
                if times.len() != self.n {
                    Err(Error::Config("explicit workload length must equal N"))
                } else if times.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
                    Err(Error::Config(
                        "explicit iteration times must be positive and finite",
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Iteration execution times in seconds.
    pub fn generate(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let n = self.n;
        Ok(match &self.kind {
            WorkloadKind::Constant { t } => alloc::vec![*t; n],
            WorkloadKind::Uniform { lo, hi } => {
                if lo == hi {
                    alloc::vec![*lo; n]
                } else {
                    (0..n).map(|_| rng.random_range(*lo..=*hi)).collect()
                }
            }
            WorkloadKind::Gaussian { mean, sigma } => {
                let normal = Normal::new(*mean, *sigma)
                    .map_err(|_| Error::Config("invalid gaussian parameters"))?;
                (0..n)
                    .map(|_| loop {
                        let x: f64 = normal.sample(&mut rng);
                        if x > 0.0 {
                            break x;
                        }
                    })
                    .collect()
            }
            WorkloadKind::Mandelbrot {
                width,
                height,
                max_iter,
                cost_per_iter,
            } => escape_counts(*width, *height, *max_iter)
                .into_iter()
                .map(|k| k as f64 * cost_per_iter)
                .collect(),
            WorkloadKind::Explicit(times) => times.clone(),
        })
    }
}

/// Escape count of every pixel of a `width × height` grid over
/// `[-2, 0.5] × [-1.25, 1.25]`, row-major, sampled at pixel centres.
pub fn escape_counts(width: usize, height: usize, max_iter: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        let ci = -1.25 + (y as f64 + 0.5) * 2.5 / height as f64;
        for x in 0..width {
            let cr = -2.0 + (x as f64 + 0.5) * 2.5 / width as f64;
            out.push(escape_count(cr, ci, max_iter));
        }
    }
    out
}

/// Number of `z ← z² + c` steps until `|z| > 2`, capped at `max_iter`
/// (always at least 1).
pub fn escape_count(cr: f64, ci: f64, max_iter: u32) -> u32 {
    let (mut zr, mut zi) = (0.0f64, 0.0f64);
    let mut k = 0;
    while k < max_iter {
        let zr2 = zr * zr;
        let zi2 = zi * zi;
        if zr2 + zi2 > 4.0 {
            break;
        }
        zi = 2.0 * zr * zi + ci;
        zr = zr2 - zi2 + cr;
        k += 1;
    }
    k.max(1)
}

/// Mean and population standard deviation of a time vector.
pub fn summary(times: &[f64]) -> (f64, f64) {
    (stats::mean(times), stats::std_dev(times))
}
