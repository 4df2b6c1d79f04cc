//! Experiment scenarios and their textual form.

use std::fmt;
use std::str::FromStr;

use rdlb_core::sim::{
    inject_failures, inject_perturbations, PerturbationKind, PerturbationParams, SimConfig,
    DEFAULT_EXTRA_LATENCY, DEFAULT_SLOWDOWN,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureCount {
    Exact(usize),
    /// `P / 2` failures.
    Half,
    /// `P − 1` failures.
    Max,
}

impl FailureCount {
    pub fn resolve(self, p: usize) -> usize {
        match self {
            FailureCount::Exact(k) => k,
            FailureCount::Half => p / 2,
            FailureCount::Max => p.saturating_sub(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    Baseline,
    Failures(FailureCount),
    Pe { multiplier: f64 },
    Latency { extra: f64 },
    Combined { multiplier: f64, extra: f64 },
}

impl Scenario {
    pub fn is_baseline(&self) -> bool {
        matches!(self, Scenario::Baseline)
    }

    /// Label used in reports, with failure counts resolved against `p`.
    pub fn label(&self, p: usize) -> String {
        match self {
            Scenario::Failures(k) => format!("failures:{}", k.resolve(p)),
            other => other.to_string(),
        }
    }

    /// Apply the scenario to a fault-free template.
    pub fn apply(
        &self,
        cfg: &SimConfig,
        node: usize,
        window: (f64, f64),
        seed: u64,
    ) -> Result<SimConfig> {
        let params = |multiplier, extra_latency| PerturbationParams {
            multiplier,
            extra_latency,
            start: window.0,
            end: window.1,
        };
        let out = match *self {
            Scenario::Baseline => cfg.clone(),
            Scenario::Failures(k) => inject_failures(cfg, k.resolve(cfg.p), seed)?,
            Scenario::Pe { multiplier } => {
                inject_perturbations(cfg, PerturbationKind::Pe, node, params(multiplier, 0.0))?
            }
            Scenario::Latency { extra } => {
                inject_perturbations(cfg, PerturbationKind::Latency, node, params(1.0, extra))?
            }
            Scenario::Combined { multiplier, extra } => inject_perturbations(
                cfg,
                PerturbationKind::Combined,
                node,
                params(multiplier, extra),
            )?,
        };
        Ok(out)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Baseline => f.write_str("baseline"),
            Scenario::Failures(FailureCount::Exact(k)) => write!(f, "failures:{k}"),
            Scenario::Failures(FailureCount::Half) => f.write_str("failures:half"),
            Scenario::Failures(FailureCount::Max) => f.write_str("failures:max"),
            Scenario::Pe { multiplier } => write!(f, "pe:{multiplier}"),
            Scenario::Latency { extra } => write!(f, "latency:{extra}"),
            Scenario::Combined { multiplier, extra } => write!(f, "combined:{multiplier}:{extra}"),
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownScenario(s.to_string());
        let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let sc = match parts.as_slice() {
            ["baseline"] => Scenario::Baseline,
            ["failures", "half"] => Scenario::Failures(FailureCount::Half),
            ["failures", "max"] => Scenario::Failures(FailureCount::Max),
            ["failures", k] => {
                Scenario::Failures(FailureCount::Exact(k.parse().map_err(|_| bad())?))
            }
            ["pe"] => Scenario::Pe {
                multiplier: DEFAULT_SLOWDOWN,
            },
            ["pe", m] => Scenario::Pe {
                multiplier: num(m)?,
            },
            ["latency"] => Scenario::Latency {
                extra: DEFAULT_EXTRA_LATENCY,
            },
            ["latency", x] => Scenario::Latency { extra: num(x)? },
            ["combined"] => Scenario::Combined {
                multiplier: DEFAULT_SLOWDOWN,
                extra: DEFAULT_EXTRA_LATENCY,
            },
            ["combined", m, x] => Scenario::Combined {
                multiplier: num(m)?,
                extra: num(x)?,
            },
            _ => return Err(bad()),
        };
        let ok = match sc {
            Scenario::Pe { multiplier } => multiplier > 0.0 && multiplier <= 1.0,
            Scenario::Latency { extra } => extra >= 0.0 && extra.is_finite(),
            Scenario::Combined { multiplier, extra } => {
                multiplier > 0.0 && multiplier <= 1.0 && extra >= 0.0 && extra.is_finite()
            }
            _ => true,
        };
        if ok {
            Ok(sc)
        } else {
            Err(bad())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in [
            "baseline",
            "failures:3",
            "failures:half",
            "failures:max",
            "pe:0.25",
            "latency:2.5",
            "combined:0.5:10",
        ] {
            let sc: Scenario = s.parse().unwrap();
            assert_eq!(sc.to_string(), s);
        }
        assert_eq!(
            "pe".parse::<Scenario>().unwrap(),
            Scenario::Pe { multiplier: 0.5 }
        );
        assert_eq!(
            "latency".parse::<Scenario>().unwrap(),
            Scenario::Latency { extra: 10.0 }
        );
    }

    #[test]
    fn rejects_garbage() {
        for s in [
            "",
            "failure:1",
            "failures:",
            "failures:-1",
            "pe:0",
            "pe:2",
            "latency:-1",
            "combined:0.5",
            "storm",
        ] {
            assert!(s.parse::<Scenario>().is_err(), "{s}");
        }
    }

    #[test]
    fn failure_counts_resolve() {
        assert_eq!(FailureCount::Half.resolve(16), 8);
        assert_eq!(FailureCount::Max.resolve(16), 15);
        assert_eq!(
            Scenario::Failures(FailureCount::Max).label(16),
            "failures:15"
        );
    }
}
