//! Line-oriented `key = value` experiment configuration.
//!
//! The grammar is documented in `docs/config.md`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use rdlb_core::sim::{DEFAULT_BASE_LATENCY, DEFAULT_H, DEFAULT_PES_PER_NODE};
use rdlb_core::workload::WorkloadSpec;
use rdlb_core::Technique;

use crate::error::{io_err, Error, Result};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdlbMode {
    On,
    Off,
    Both,
}

impl RdlbMode {
    pub fn settings(self) -> &'static [bool] {
        match self {
            RdlbMode::Off => &[false],
            RdlbMode::On => &[true],
            RdlbMode::Both => &[false, true],
        }
    }
}

impl FromStr for RdlbMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "on" => Ok(RdlbMode::On),
            "off" => Ok(RdlbMode::Off),
            "both" => Ok(RdlbMode::Both),
            _ => Err(Error::BadValue {
                key: "rdlb",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WorkloadChoice {
    Constant { t: f64 },
    Uniform { lo: f64, hi: f64 },
    Gaussian { mean: f64, sigma: f64 },
    Psia { mean: f64 },
    Mandelbrot { cost_per_iter: f64 },
    File(PathBuf),
}

impl WorkloadChoice {
    /// Whether different seeds give different vectors.
    pub fn is_seeded(&self) -> bool {
        matches!(
            self,
            WorkloadChoice::Uniform { .. }
                | WorkloadChoice::Gaussian { .. }
                | WorkloadChoice::Psia { .. }
        )
    }

    /// Workload for `n` iterations. Files are read and must hold exactly `n`
    /// times.
    pub fn spec(&self, n: usize, seed: u64) -> Result<WorkloadSpec> {
        let spec = match self {
            WorkloadChoice::Constant { t } => WorkloadSpec::constant(n, *t),
            WorkloadChoice::Uniform { lo, hi } => WorkloadSpec::uniform(n, *lo, *hi, seed),
            WorkloadChoice::Gaussian { mean, sigma } => {
                WorkloadSpec::gaussian(n, *mean, *sigma, seed)
            }
            WorkloadChoice::Psia { mean } => WorkloadSpec::psia_like(n, *mean, seed),
            WorkloadChoice::Mandelbrot { cost_per_iter } => {
                WorkloadSpec::mandelbrot(n, *cost_per_iter)
            }
            WorkloadChoice::File(path) => {
                let times = crate::io::read_workload(path)?;
                if times.len() != n {
                    return Err(Error::BadValue {
                        key: "workload",
                        value: format!(
                            "{} holds {} times but n = {n}",
                            path.display(),
                            times.len()
                        ),
                    });
                }
                WorkloadSpec::explicit(times)
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl FromStr for WorkloadChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadValue {
            key: "workload",
            value: s.to_string(),
        };
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(WorkloadChoice::File(PathBuf::from(path)));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let nums: Vec<f64> = parts[1..]
            .iter()
            .map(|x| x.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        Ok(match (parts[0], nums.as_slice()) {
            ("constant", [t]) => WorkloadChoice::Constant { t: *t },
            ("uniform", [lo, hi]) => WorkloadChoice::Uniform { lo: *lo, hi: *hi },
            ("gaussian", [mean, sigma]) => WorkloadChoice::Gaussian {
                mean: *mean,
                sigma: *sigma,
            },
            ("psia", [mean]) => WorkloadChoice::Psia { mean: *mean },
            ("mandelbrot", [cost]) => WorkloadChoice::Mandelbrot {
                cost_per_iter: *cost,
            },
            _ => return Err(bad()),
        })
    }
}

/// Parameter grid for the closed-form cost-model table.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryGrid {
    pub n: Vec<usize>,
    pub q: Vec<usize>,
    pub t: Vec<f64>,
    pub lambda: Vec<f64>,
    pub c: Vec<f64>,
}

impl Default for TheoryGrid {
    fn default() -> Self {
        TheoryGrid {
            n: vec![5, 10, 50],
            q: vec![4, 16, 256],
            t: vec![1.0],
            lambda: vec![1e-5, 1e-3, 1e-2],
            c: vec![1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub p: usize,
    pub n: usize,
    pub h: f64,
    pub base_latency: f64,
    pub pes_per_node: usize,
    pub trials: usize,
    pub seed: u64,
    pub rdlb: RdlbMode,
    pub techniques: Vec<Technique>,
    pub scenarios: Vec<Scenario>,
    pub workload: WorkloadChoice,
    pub perturbed_node: usize,
    pub perturb_start: f64,
    pub perturb_end: f64,
    pub wf_weights: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub trace_dir: Option<PathBuf>,
    pub theory: TheoryGrid,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            p: 16,
            n: 10_000,
            h: DEFAULT_H,
            base_latency: DEFAULT_BASE_LATENCY,
            pes_per_node: DEFAULT_PES_PER_NODE,
            trials: 20,
            seed: 0,
            rdlb: RdlbMode::Both,
            techniques: Technique::ALL.to_vec(),
            scenarios: vec![Scenario::Baseline],
            workload: WorkloadChoice::Constant { t: 0.01 },
            perturbed_node: 0,
            perturb_start: 0.0,
            perturb_end: f64::INFINITY,
            wf_weights: None,
            out: None,
            trace_dir: None,
            theory: TheoryGrid::default(),
        }
    }
}

fn list<T: FromStr>(key: &'static str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(|x| {
            x.trim().parse::<T>().map_err(|_| Error::BadValue {
                key,
                value: v.to_string(),
            })
        })
        .collect()
}

fn one<T: FromStr>(key: &'static str, v: &str) -> Result<T> {
    v.parse::<T>().map_err(|_| Error::BadValue {
        key,
        value: v.to_string(),
    })
}

/// `all`, `dynamic`, or one technique name.
pub fn parse_techniques(v: &str) -> Result<Vec<Technique>> {
    match v.to_ascii_lowercase().as_str() {
        "all" => Ok(Technique::ALL.to_vec()),
        "dynamic" => Ok(Technique::dynamic().collect()),
        _ => Ok(vec![v.parse::<Technique>()?]),
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parse configuration text; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut techniques: Option<Vec<Technique>> = None;
        let mut scenarios: Option<Vec<Scenario>> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::Config {
                path: origin.to_string(),
                line: i + 1,
                msg,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let res: Result<()> = (|| {
                match key {
                    "p" => cfg.p = one("p", value)?,
                    "n" => cfg.n = one("n", value)?,
                    "h" => cfg.h = one("h", value)?,
                    "latency" => cfg.base_latency = one("latency", value)?,
                    "pes_per_node" => cfg.pes_per_node = one("pes_per_node", value)?,
                    "trials" => cfg.trials = one("trials", value)?,
                    "seed" => cfg.seed = one("seed", value)?,
                    "rdlb" => cfg.rdlb = value.parse()?,
                    "technique" => techniques
                        .get_or_insert_with(Vec::new)
                        .extend(parse_techniques(value)?),
                    "scenario" => scenarios.get_or_insert_with(Vec::new).push(value.parse()?),
                    "workload" => cfg.workload = value.parse()?,
                    "perturbed_node" => cfg.perturbed_node = one("perturbed_node", value)?,
                    "perturb_start" => cfg.perturb_start = one("perturb_start", value)?,
                    "perturb_end" => cfg.perturb_end = one("perturb_end", value)?,
                    "wf_weights" => cfg.wf_weights = Some(list("wf_weights", value)?),
                    "out" => cfg.out = Some(PathBuf::from(value)),
                    "trace_dir" => cfg.trace_dir = Some(PathBuf::from(value)),
                    "theory_n" => cfg.theory.n = list("theory_n", value)?,
                    "theory_q" => cfg.theory.q = list("theory_q", value)?,
                    "theory_t" => cfg.theory.t = list("theory_t", value)?,
                    "theory_lambda" => cfg.theory.lambda = list("theory_lambda", value)?,
                    "theory_c" => cfg.theory.c = list("theory_c", value)?,
                    _ => return Err(at(format!("unknown key `{key}`"))),
                }
                Ok(())
            })();
            res.map_err(|e| match e {
                Error::Config { .. } => e,
                other => at(other.to_string()),
            })?;
        }
        if let Some(t) = techniques {
            cfg.techniques = t;
        }
        if let Some(s) = scenarios {
            cfg.scenarios = s;
        }
        cfg.validate().map_err(|e| Error::Config {
            path: origin.to_string(),
            line: 0,
            msg: e.to_string(),
        })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &'static str, value: String| Err(Error::BadValue { key, value });
        if self.p == 0 {
            return bad("p", "0".into());
        }
        if self.n == 0 {
            return bad("n", "0".into());
        }
        if self.trials == 0 {
            return bad("trials", "0".into());
        }
        if !(self.h >= 0.0) {
            return bad("h", self.h.to_string());
        }
        if !(self.base_latency >= 0.0) {
            return bad("latency", self.base_latency.to_string());
        }
        if self.pes_per_node == 0 {
            return bad("pes_per_node", "0".into());
        }
        if self.techniques.is_empty() {
            return bad("technique", "(none)".into());
        }
        if !(self.perturb_start < self.perturb_end) {
            return bad("perturb_end", self.perturb_end.to_string());
        }
        if let Some(w) = &self.wf_weights {
            if w.len() != self.p {
                return Err(rdlb_core::Error::GridMismatch {
                    got: w.len(),
                    expected: self.p,
                }
                .into());
            }
        }
        Ok(())
    }
}
