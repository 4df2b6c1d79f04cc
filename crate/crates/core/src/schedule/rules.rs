//! Closed-form chunk-size rules. Every function here is pure.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Integer ceiling division.
#[inline]
pub(crate) fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Ceiling of a float that should be treated as an exact integer when it is
/// within rounding noise of one (weights renormalized in floating point are
/// rarely exactly 1.0).
#[inline]
pub(crate) fn ceil_tol(x: f64) -> f64 {
    let r = libm::round(x);
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        libm::ceil(x)
    }
}

/// Guided self-scheduling: `max(1, ceil(R / P))`.
pub fn chunk_gss(remaining: usize, p: usize) -> usize {
    div_ceil(remaining, p.max(1)).max(1)
}

/// Practical factoring: each batch is `ceil(R / 2)` iterations split into
/// `P` chunks of `ceil(batch / P)`.
pub fn chunk_fac(remaining_at_batch_start: usize, p: usize) -> usize {
    div_ceil(div_ceil(remaining_at_batch_start, 2), p.max(1)).max(1)
}

/// Number of chunks practical FAC emits for a loop of `n` iterations on `p`
/// PEs.
pub fn fac_chunk_count(n: usize, p: usize) -> usize {
    let mut remaining = n;
    let mut count = 0;
    while remaining > 0 {
        let chunk = chunk_fac(remaining, p);
        for _ in 0..p {
            if remaining == 0 {
                break;
            }
            remaining -= chunk.min(remaining);
            count += 1;
        }
    }
    count
}

/// Fixed-size chunking from the scheduling overhead `h` and the iteration
/// time standard deviation `sigma`:
///
/// `max(1, round(((√2 · N · h) / (σ · P · √ln P))^(2/3)))`
pub fn chunk_fsc(n: usize, p: usize, h: f64, sigma: f64) -> Result<usize> {
    if p < 2 {
        return Err(Error::Config(
            "FSC needs at least two PEs (ln P must be positive)",
        ));
    }
    if !(h >= 0.0) || !(sigma > 0.0) {
        return Err(Error::Config("FSC needs h >= 0 and sigma > 0"));
    }
    let p_f = p as f64;
    let ratio =
        (core::f64::consts::SQRT_2 * n as f64 * h) / (sigma * p_f * libm::sqrt(libm::log(p_f)));
    let chunk = libm::round(libm::pow(ratio, 2.0 / 3.0));
    if chunk.is_finite() && chunk < n as f64 {
        Ok((chunk as usize).max(1))
    } else {
        Ok(n.max(1))
    }
}

/// Modified FSC: a fixed chunk giving as many chunks as practical FAC would.
pub fn mfsc_chunk(n: usize, p: usize) -> usize {
    let count = fac_chunk_count(n, p).max(1);
    (libm::round(n as f64 / count as f64) as usize).max(1)
}

/// Lower and upper bound of a RAND chunk: `[N/(100P), N/(2P)]`, floored and
/// clamped to at least one.
pub fn rand_bounds(n: usize, p: usize) -> (usize, usize) {
    let lo = (n / (100 * p.max(1))).max(1);
    let hi = (n / (2 * p.max(1))).max(1);
    (lo, hi.max(lo))
}

/// Weighted chunk from a batch: `max(1, ceil(batch / P · w))`.
pub fn chunk_weighted(batch: usize, p: usize, weight: f64) -> usize {
    let x = batch as f64 / p.max(1) as f64 * weight;
    (ceil_tol(x) as usize).max(1)
}

/// Adaptive factoring chunk for `pe` given per-PE iteration-time estimates.
///
/// `D = Σ σ_j²/μ_j`, `T = R / Σ 1/μ_j`,
/// `chunk = max(1, floor((D + 2T − √(D² + 4DT)) / (2 μ_pe)))`.
pub fn chunk_af(mu: &[f64], sigma: &[f64], remaining: usize, pe: usize) -> usize {
    debug_assert_eq!(mu.len(), sigma.len());
    let d: f64 = mu.iter().zip(sigma).map(|(m, s)| s * s / m).sum();
    let inv: f64 = mu.iter().map(|m| 1.0 / m).sum();
    let t = remaining as f64 / inv;
    let raw = if d == 0.0 {
        t / mu[pe]
    } else {
        (d + 2.0 * t - libm::sqrt(d * d + 4.0 * d * t)) / (2.0 * mu[pe])
    };
    let chunk = libm::floor(raw);
    if chunk.is_finite() && chunk >= 1.0 {
        (chunk as usize).min(remaining.max(1))
    } else {
        1
    }
}

/// Relative PE weights from cumulative per-PE totals.
///
/// The rate of PE `i` is `iterations_i / time_i`; weights are
/// `P · r_i / Σ r_j`. A PE with zero elapsed time gets the largest finite
/// rate observed. Returns `None` when any PE has no iterations yet or when
/// no finite rate exists.
pub fn weights_from_totals(iterations: &[f64], times: &[f64]) -> Option<Vec<f64>> {
    if iterations.iter().any(|&it| it <= 0.0) {
        return None;
    }
    let rates: Vec<f64> = iterations
        .iter()
        .zip(times)
        .map(|(&it, &t)| if t > 0.0 { it / t } else { f64::INFINITY })
        .collect();
    let max_finite = rates
        .iter()
        .copied()
        .filter(|r| r.is_finite())
        .fold(f64::NAN, f64::max);
    let rates: Vec<f64> = if max_finite.is_nan() {
        // every PE reported zero time: treat them as equally fast
        alloc::vec![1.0; rates.len()]
    } else {
        rates
            .into_iter()
            .map(|r| if r.is_finite() { r } else { max_finite })
            .collect()
    };
    let sum: f64 = rates.iter().sum();
    let p = rates.len() as f64;
    Some(rates.into_iter().map(|r| p * r / sum).collect())
}

/// Trapezoid self-scheduling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TssParams {
    pub first: usize,
    pub last: usize,
    pub chunk_count: usize,
    pub decrement: f64,
}

impl TssParams {
    /// `f = ceil(N/(2P))`, `l = 1`, `n_c = ceil(2N/(f+l))`,
    /// `d = (f − l)/(n_c − 1)`.
    pub fn new(n: usize, p: usize) -> Self {
        let first = div_ceil(n, 2 * p.max(1)).max(1);
        let last = 1;
        let chunk_count = div_ceil(2 * n, first + last).max(1);
        let decrement = if chunk_count > 1 {
            (first - last) as f64 / (chunk_count - 1) as f64
        } else {
            0.0
        };
        TssParams {
            first,
            last,
            chunk_count,
            decrement,
        }
    }
}
