use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use rdlb::config::{parse_techniques, ExperimentConfig, RdlbMode};
use rdlb::matrix::{self, run_matrix};
use rdlb::theory::write_theory;
use rdlb::{Error, Scenario};

/// Simulate dynamic loop scheduling with and without robust rescheduling.
#[derive(Debug, Parser)]
#[command(name = "rdlb", version)]
struct Cli {
    /// Experiment configuration file (key = value lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed; trial i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Matrix CSV path; robustness goes to <stem>.robustness.csv.
    /// Without it both tables are printed to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Technique name, `all` or `dynamic`. Repeatable.
    #[arg(long = "technique")]
    techniques: Vec<String>,
    /// baseline, failures:K|half|max, pe[:mult], latency[:secs],
    /// combined[:mult:secs]. Repeatable.
    #[arg(long = "scenario")]
    scenarios: Vec<String>,
    #[arg(long, value_parser = ["on", "off", "both"])]
    rdlb: Option<String>,
    /// Print the cost-model table instead of simulating.
    #[arg(long)]
    theory: bool,
    /// Write one event trace per run into this directory.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

fn configure(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    if let Some(d) = &cli.trace_dir {
        cfg.trace_dir = Some(d.clone());
    }
    if let Some(r) = &cli.rdlb {
        cfg.rdlb = r.parse::<RdlbMode>()?;
    }
    if !cli.techniques.is_empty() {
        cfg.techniques = cli
            .techniques
            .iter()
            .map(|t| parse_techniques(t))
            .collect::<Result<Vec<_>, _>>()?
            .concat();
    }
    if !cli.scenarios.is_empty() {
        cfg.scenarios = cli
            .scenarios
            .iter()
            .map(|s| s.parse::<Scenario>())
            .collect::<Result<_, _>>()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cfg: &ExperimentConfig, theory: bool) -> anyhow::Result<()> {
    let stdout = std::io::stdout();
    if theory {
        write_theory(stdout.lock(), &cfg.theory)?;
        return Ok(());
    }
    let report = run_matrix(cfg)?;
    match &cfg.out {
        Some(path) => {
            matrix::save(path, &report).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            let mut w = stdout.lock();
            matrix::write_csv(&mut w, &report)?;
            if !report.robustness.is_empty() {
                writeln!(w)?;
                matrix::write_robustness_csv(&mut w, &report.robustness)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match configure(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("rdlb: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg, cli.theory) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rdlb: {e:#}");
            let usage = e.downcast_ref::<Error>().is_some_and(Error::is_usage);
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
