//! Technique × scenario × trial experiment matrices.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use rdlb_core::metrics::{robustness, RobustnessReport};
use rdlb_core::sim::{run_simulation, SimConfig};
use rdlb_core::workload::WorkloadSpec;
use rdlb_core::{stats, Technique};

use crate::config::{ExperimentConfig, WorkloadChoice};
use crate::error::{io_err, Result};
use crate::scenario::Scenario;

/// Report label of a technique, e.g. `FAC+rDLB`.
pub fn technique_label(t: Technique, rdlb: bool) -> String {
    if rdlb {
        format!("{t}+rDLB")
    } else {
        t.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub technique: String,
    pub scenario: String,
    pub trial: usize,
    pub completed: bool,
    pub t_par: f64,
    pub n_rescheduled: usize,
    pub wasted_iters: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Stat {
    /// Statistics over all values. Any infinite value makes the mean and
    /// maximum infinite and the deviation undefined.
    pub fn of(xs: &[f64]) -> Stat {
        let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if xs.iter().all(|x| x.is_finite()) {
            Stat {
                mean: stats::mean(xs),
                std: stats::std_dev(xs),
                min,
                max,
            }
        } else {
            Stat {
                mean: f64::INFINITY,
                std: f64::NAN,
                min,
                max,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub technique: String,
    pub scenario: String,
    /// Statistic of the 0/1 completion flag; its mean is the completion rate.
    pub completed: Stat,
    pub t_par: Stat,
    pub n_rescheduled: Stat,
    pub wasted_iters: Stat,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatrixReport {
    pub rows: Vec<TrialRow>,
    pub summaries: Vec<CellSummary>,
    pub robustness: Vec<RobustnessReport>,
}

impl MatrixReport {
    pub fn summary(&self, technique: &str, scenario: &str) -> Option<&CellSummary> {
        self.summaries
            .iter()
            .find(|s| s.technique == technique && s.scenario == scenario)
    }

    pub fn robustness_for(&self, scenario: &str, rdlb: bool) -> Option<&RobustnessReport> {
        self.robustness.iter().find(|r| {
            r.scenario == scenario
                && r.entries
                    .first()
                    .is_some_and(|e| e.technique.ends_with("+rDLB") == rdlb)
        })
    }

    /// Whether every requested run finished (hangs count as data, not
    /// failures of the driver).
    pub fn all_completed(&self) -> bool {
        self.rows.iter().all(|r| r.completed)
    }
}

#[derive(Debug, Clone)]
struct Cell {
    technique: Technique,
    rdlb: bool,
    scenario: Scenario,
}

/// Scenarios actually run: the requested ones, with `baseline` prepended
/// when any other scenario needs it for robustness.
pub fn effective_scenarios(requested: &[Scenario]) -> Vec<Scenario> {
    let mut out = requested.to_vec();
    if !out.iter().any(Scenario::is_baseline) && !out.is_empty() {
        out.insert(0, Scenario::Baseline);
    }
    out
}

fn cells(cfg: &ExperimentConfig) -> Vec<Cell> {
    let scenarios = effective_scenarios(&cfg.scenarios);
    let mut out = Vec::new();
    for &technique in &cfg.techniques {
        for &rdlb in cfg.rdlb.settings() {
            // STATIC has no shared queue to reschedule from
            if rdlb && technique == Technique::Static {
                continue;
            }
            for &scenario in &scenarios {
                out.push(Cell {
                    technique,
                    rdlb,
                    scenario,
                });
            }
        }
    }
    out
}

fn trace_name(label: &str, scenario: &str, trial: usize) -> String {
    let clean = |s: &str| s.replace([':', '+'], "-");
    format!("{}_{}_{trial}.tsv", clean(label), clean(scenario))
}

/// Run every cell of the matrix and gather per-trial rows, per-cell
/// summaries and per-scenario robustness reports.
pub fn run_matrix(cfg: &ExperimentConfig) -> Result<MatrixReport> {
    cfg.validate()?;
    // unseeded or file-backed workloads are generated once and replayed
    let shared: Option<WorkloadSpec> = if cfg.workload.is_seeded() {
        None
    } else {
        let spec = cfg.workload.spec(cfg.n, cfg.seed)?;
        Some(match (&cfg.workload, &spec.kind) {
            (WorkloadChoice::Constant { .. }, _) => spec,
            _ => WorkloadSpec::explicit(spec.generate()?),
        })
    };
    if let Some(dir) = &cfg.trace_dir {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }

    let cells = cells(cfg);
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let rows: Vec<TrialRow> = jobs
        .par_iter()
        .map(|&(c, trial)| run_trial(cfg, &cells[c], trial, shared.as_ref()))
        .collect::<Result<_>>()?;

    let mut report = MatrixReport {
        rows,
        ..Default::default()
    };
    for group in report.rows.chunks(cfg.trials) {
        let col = |f: &dyn Fn(&TrialRow) -> f64| group.iter().map(f).collect::<Vec<f64>>();
        report.summaries.push(CellSummary {
            technique: group[0].technique.clone(),
            scenario: group[0].scenario.clone(),
            completed: Stat::of(&col(&|r| f64::from(u8::from(r.completed)))),
            t_par: Stat::of(&col(&|r| r.t_par)),
            n_rescheduled: Stat::of(&col(&|r| r.n_rescheduled as f64)),
            wasted_iters: Stat::of(&col(&|r| r.wasted_iters as f64)),
        });
    }

    let mut reports = Vec::new();
    for &rdlb in cfg.rdlb.settings() {
        let labels: Vec<String> = cfg
            .techniques
            .iter()
            .filter(|&&t| !(rdlb && t == Technique::Static))
            .map(|&t| technique_label(t, rdlb))
            .collect();
        if labels.is_empty() {
            continue;
        }
        let means = |scenario: &str| -> Vec<(&str, f64)> {
            labels
                .iter()
                .map(|l| {
                    (
                        l.as_str(),
                        report.summary(l, scenario).expect("cell ran").t_par.mean,
                    )
                })
                .collect()
        };
        let baseline = means(&Scenario::Baseline.label(cfg.p));
        for sc in effective_scenarios(&cfg.scenarios)
            .iter()
            .filter(|s| !s.is_baseline())
        {
            let label = sc.label(cfg.p);
            reports.push(robustness(&label, &baseline, &means(&label))?);
        }
    }
    report.robustness = reports;
    Ok(report)
}

fn run_trial(
    cfg: &ExperimentConfig,
    cell: &Cell,
    trial: usize,
    shared: Option<&WorkloadSpec>,
) -> Result<TrialRow> {
    let seed = cfg.seed.wrapping_add(trial as u64);
    let workload = match shared {
        Some(w) => w.clone(),
        None => cfg.workload.spec(cfg.n, seed)?,
    };
    let mut template = SimConfig::new(cell.technique, cfg.p, workload)
        .with_rdlb(cell.rdlb)
        .with_seed(seed)
        .with_overheads(cfg.h, cfg.base_latency)
        .with_pes_per_node(cfg.pes_per_node)
        .with_trace(cfg.trace_dir.is_some());
    template.wf_weights = cfg.wf_weights.clone();
    let sim = cell.scenario.apply(
        &template,
        cfg.perturbed_node,
        (cfg.perturb_start, cfg.perturb_end),
        seed,
    )?;
    let result = run_simulation(&sim)?;
    let technique = technique_label(cell.technique, cell.rdlb);
    let scenario = cell.scenario.label(cfg.p);
    if let Some(dir) = &cfg.trace_dir {
        crate::io::save_trace(
            &dir.join(trace_name(&technique, &scenario, trial)),
            &result.trace,
        )?;
    }
    Ok(TrialRow {
        technique,
        scenario,
        trial,
        completed: result.completed,
        t_par: result.t_par,
        n_rescheduled: result.n_rescheduled,
        wasted_iters: result.n_wasted_iterations,
    })
}

pub const CSV_HEADER: &str = "technique,scenario,trial,completed,t_par,n_rescheduled,wasted_iters";
pub const ROBUSTNESS_HEADER: &str = "technique,scenario,T_baseline,T_perturbed,radius,rho";

/// Shortest round-trip form; infinities as `inf`, undefined as `nan`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        x.to_string()
    }
}

type StatField = fn(&Stat) -> f64;

/// Per-trial rows of each cell followed by its `mean`, `std`, `min` and
/// `max` rows.
pub fn write_csv<W: Write>(mut w: W, report: &MatrixReport) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    let trials = report.rows.len() / report.summaries.len().max(1);
    for (group, s) in report.rows.chunks(trials.max(1)).zip(&report.summaries) {
        for r in group {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.technique,
                r.scenario,
                r.trial,
                u8::from(r.completed),
                num(r.t_par),
                r.n_rescheduled,
                r.wasted_iters
            )?;
        }
        let pick: [(&str, StatField); 4] = [
            ("mean", |s| s.mean),
            ("std", |s| s.std),
            ("min", |s| s.min),
            ("max", |s| s.max),
        ];
        for (name, f) in pick {
            writeln!(
                w,
                "{},{},{name},{},{},{},{}",
                s.technique,
                s.scenario,
                num(f(&s.completed)),
                num(f(&s.t_par)),
                num(f(&s.n_rescheduled)),
                num(f(&s.wasted_iters))
            )?;
        }
    }
    Ok(())
}

pub fn write_robustness_csv<W: Write>(
    mut w: W,
    reports: &[RobustnessReport],
) -> std::io::Result<()> {
    writeln!(w, "{ROBUSTNESS_HEADER}")?;
    for rep in reports {
        for e in &rep.entries {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                e.technique,
                rep.scenario,
                num(e.baseline),
                num(e.perturbed),
                num(e.radius),
                num(e.rho)
            )?;
        }
    }
    Ok(())
}

/// Write the matrix CSV to `path` and the robustness CSV next to it
/// (`results.csv` → `results.robustness.csv`).
pub fn save(path: &Path, report: &MatrixReport) -> Result<()> {
    let write = |p: &Path, f: &dyn Fn(&mut Vec<u8>) -> std::io::Result<()>| -> Result<()> {
        let mut buf = Vec::new();
        f(&mut buf).map_err(io_err(p))?;
        std::fs::write(p, buf).map_err(io_err(p))
    };
    write(path, &|b| write_csv(b, report))?;
    write(&robustness_path(path), &|b| {
        write_robustness_csv(b, &report.robustness)
    })
}

pub fn robustness_path(path: &Path) -> std::path::PathBuf {
    path.with_extension("robustness.csv")
}
