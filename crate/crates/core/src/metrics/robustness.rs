//! Robustness radius and the normalized resilience/flexibility metric.
//!
//! For a scenario π the radius of a technique is `r = T_par^π − T_par^orig`
//! and its metric is `ρ = r / r_min`; the most robust technique scores 1.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessEntry {
    pub technique: String,
    pub baseline: f64,
    pub perturbed: f64,
    pub radius: f64,
    pub rho: f64,
    /// The perturbed run was faster than baseline and the radius was
    /// clamped to zero.
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport {
    pub scenario: String,
    pub entries: Vec<RobustnessEntry>,
    /// The smallest radius is zero or infinite, so ratios are not
    /// informative.
    pub degenerate: bool,
}

impl RobustnessReport {
    pub fn get(&self, technique: &str) -> Option<&RobustnessEntry> {
        self.entries.iter().find(|e| e.technique == technique)
    }

    pub fn min_rho(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.rho)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Build the report for one scenario from per-technique mean makespans.
///
/// Both slices must list the same techniques in the same order. A
/// non-terminating technique can be passed as `f64::INFINITY`.
pub fn robustness(
    scenario: &str,
    baselines: &[(&str, f64)],
    perturbed: &[(&str, f64)],
) -> Result<RobustnessReport> {
    if baselines.len() != perturbed.len()
        || baselines
            .iter()
            .zip(perturbed)
            .any(|((a, _), (b, _))| a != b)
    {
        return Err(Error::Config(
            "baseline and perturbed technique sets differ",
        ));
    }
    if baselines.is_empty() {
        return Err(Error::Config("robustness needs at least one technique"));
    }
    let mut entries: Vec<RobustnessEntry> = baselines
        .iter()
        .zip(perturbed)
        .map(|(&(name, base), &(_, pert))| {
            let raw = pert - base;
            let clamped = raw < 0.0;
            RobustnessEntry {
                technique: name.to_string(),
                baseline: base,
                perturbed: pert,
                radius: if clamped { 0.0 } else { raw },
                rho: f64::NAN,
                clamped,
            }
        })
        .collect();
    let r_min = entries
        .iter()
        .map(|e| e.radius)
        .fold(f64::INFINITY, f64::min);
    let degenerate = r_min == 0.0 || r_min.is_infinite();
    for e in &mut entries {
        e.rho = if e.radius == r_min {
            1.0
        } else if degenerate {
            f64::INFINITY
        } else {
            e.radius / r_min
        };
    }
    Ok(RobustnessReport {
        scenario: scenario.to_string(),
        entries,
        degenerate,
    })
}
