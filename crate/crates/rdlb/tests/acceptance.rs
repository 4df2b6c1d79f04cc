//! Exit criteria. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rdlb::config::{ExperimentConfig, RdlbMode, WorkloadChoice};
use rdlb::matrix::{self, run_matrix, technique_label, MatrixReport};
use rdlb::Scenario;
use rdlb_core::metrics::{robustness, RobustnessReport, TheoryParams};
use rdlb_core::schedule::rand_bounds;
use rdlb_core::sim::{inject_failures, run_simulation, SimConfig};
use rdlb_core::workload::WorkloadSpec;
use rdlb_core::{Technique, TechniqueParams, TechniqueState};

const P: usize = 16;
const N: usize = 10_000;
const CONSTANT_T: f64 = 0.01;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn scenarios(list: &[&str]) -> Vec<Scenario> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

fn matrix_config(
    techniques: Vec<Technique>,
    sc: &[&str],
    trials: usize,
    rdlb: RdlbMode,
    w: WorkloadChoice,
) -> ExperimentConfig {
    ExperimentConfig {
        p: P,
        n: N,
        trials,
        seed: 0,
        rdlb,
        techniques,
        scenarios: scenarios(sc),
        workload: w,
        ..Default::default()
    }
}

fn dynamic() -> Vec<Technique> {
    Technique::dynamic().collect()
}

fn fault_tolerance() -> Outcome {
    let started = Instant::now();
    let cfg = matrix_config(
        dynamic(),
        &["failures:1", "failures:8", "failures:15"],
        10,
        RdlbMode::On,
        WorkloadChoice::Constant { t: CONSTANT_T },
    );
    let report = run_matrix(&cfg).expect("matrix runs");
    let elapsed = started.elapsed().as_secs_f64();
    let faulty: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.scenario != "baseline")
        .collect();
    let incomplete: Vec<String> = faulty
        .iter()
        .filter(|r| !r.completed)
        .map(|r| format!("{} {} trial {}", r.technique, r.scenario, r.trial))
        .collect();
    let pass = incomplete.is_empty() && faulty.len() == 13 * 3 * 10 && elapsed < 60.0;
    outcome(
        pass,
        format!(
            "{}/{} failure runs completed in {elapsed:.1} s{}",
            faulty.len() - incomplete.len(),
            faulty.len(),
            if incomplete.is_empty() {
                String::new()
            } else {
                format!("; incomplete: {}", incomplete.join(", "))
            }
        ),
    )
}

fn hang_without_rdlb() -> Outcome {
    let cases: Vec<(Technique, u64)> = dynamic()
        .into_iter()
        .flat_map(|t| (0..10).map(move |s| (t, s)))
        .collect();
    let results: Vec<(Technique, u64, bool, bool)> = cases
        .par_iter()
        .map(|&(t, seed)| {
            let base = SimConfig::new(t, P, WorkloadSpec::constant(N, CONSTANT_T))
                .with_seed(seed)
                .with_trace(false);
            let cfg = inject_failures(&base, 1, seed).unwrap();
            let r = run_simulation(&cfg).unwrap();
            (t, seed, r.failures[0].held.is_some(), r.completed)
        })
        .collect();
    let holding: Vec<_> = results.iter().filter(|r| r.2).collect();
    let finished: Vec<String> = holding
        .iter()
        .filter(|r| r.3)
        .map(|r| format!("{} seed {}", r.0, r.1))
        .collect();
    outcome(
        !holding.is_empty() && finished.is_empty(),
        format!(
            "{} of {} trials lost a held chunk; {} of those completed{}",
            holding.len(),
            results.len(),
            finished.len(),
            if finished.is_empty() {
                String::new()
            } else {
                format!(" ({})", finished.join(", "))
            }
        ),
    )
}

fn zero_overhead() -> Outcome {
    let mut cases = Vec::new();
    for t in Technique::ALL {
        for seed in 0..10u64 {
            cases.push((t, seed, WorkloadSpec::constant(N, CONSTANT_T)));
            cases.push((t, seed, WorkloadSpec::gaussian(N, 0.01, 0.001, seed)));
        }
    }
    let mismatches: Vec<String> = cases
        .par_iter()
        .filter_map(|(t, seed, w)| {
            let cfg = SimConfig::new(*t, P, w.clone())
                .with_seed(*seed)
                .with_trace(false);
            let off = run_simulation(&cfg).unwrap();
            let on = run_simulation(&cfg.clone().with_rdlb(true)).unwrap();
            (!(off.completed && on.completed && off.t_par == on.t_par))
                .then(|| format!("{t} seed {seed}: {} vs {}", off.t_par, on.t_par))
        })
        .collect();
    outcome(
        mismatches.is_empty(),
        format!(
            "{} run pairs, mismatches: [{}]",
            cases.len(),
            mismatches.join("; ")
        ),
    )
}

/// Mean and standard error of the makespan under the one-failure model:
/// with probability `p_F` a uniformly chosen task fails and the remaining
/// tasks of that PE are spread over the `q − 1` survivors.
fn monte_carlo(p: &TheoryParams, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let total = p.n as f64 * p.t;
    let p_f = 1.0 - (-p.lambda * total).exp();
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..samples {
        let mut x = total;
        if rng.random::<f64>() < p_f {
            let i = rng.random_range(0..p.n);
            x += (p.n - i) as f64 * p.t / (p.q - 1) as f64;
        }
        sum += x;
        sq += x * x;
    }
    let m = sum / samples as f64;
    (
        m,
        ((sq / samples as f64 - m * m).max(0.0) / samples as f64).sqrt(),
    )
}

fn bisect_crossover(p: &TheoryParams) -> f64 {
    let target = p.overhead_rdlb().unwrap();
    let gap = |c: f64| (2.0 * p.lambda * c).sqrt() - target;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while gap(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn cost_model() -> Outcome {
    let mut grid = Vec::new();
    for n in [5, 10, 50] {
        for q in [4, 16] {
            for lambda in [1e-3, 1e-2] {
                grid.push(TheoryParams::new(n, q, 1.0, lambda));
            }
        }
    }
    let mc_bad: Vec<String> = grid
        .par_iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let exact = p.expected_time_one_failure().unwrap();
            let (mean, se) = monte_carlo(p, 1_000_000, 1000 + i as u64);
            ((exact - mean).abs() > 3.0 * se)
                .then(|| format!("n={} q={} λ={}: {exact} vs {mean}±{se}", p.n, p.q, p.lambda))
        })
        .collect();

    let mut fo_bad = Vec::new();
    for n in [5, 10, 50] {
        for q in [4, 16] {
            for lt in [1e-4, 1e-3, 1e-2] {
                let p = TheoryParams::new(n, q, 1.0, lt / n as f64);
                let exact = p.expected_time_one_failure().unwrap() - p.makespan();
                let approx = p.expected_time_first_order().unwrap() - p.makespan();
                if (approx - exact).abs() > 0.01 * exact {
                    fo_bad.push(format!("n={n} q={q} λT={lt}"));
                }
            }
        }
    }

    let mut cross_bad = Vec::new();
    let mut worst: f64 = 0.0;
    for p in &grid {
        let closed = p.checkpoint_crossover().unwrap().threshold;
        let root = bisect_crossover(p);
        let rel = (closed - root).abs() / root;
        worst = worst.max(rel);
        if rel > 1e-9 {
            cross_bad.push(format!("n={} q={} λ={}", p.n, p.q, p.lambda));
        }
    }
    outcome(
        mc_bad.is_empty() && fo_bad.is_empty() && cross_bad.is_empty(),
        format!(
            "monte carlo {}/12 within 3 SE; first order {}/18 within 1%; crossover worst rel err {worst:.1e}; misses: [{}]",
            12 - mc_bad.len(),
            18 - fo_bad.len(),
            [mc_bad, fo_bad, cross_bad].concat().join("; ")
        ),
    )
}

fn single_failure_near_baseline() -> (Outcome, MatrixReport) {
    let cfg = matrix_config(
        dynamic(),
        &["baseline", "failures:1"],
        20,
        RdlbMode::On,
        WorkloadChoice::Gaussian {
            mean: 0.01,
            sigma: 0.001,
        },
    );
    let report = run_matrix(&cfg).expect("matrix runs");
    let mut over = Vec::new();
    let mut ratios = Vec::new();
    for t in dynamic() {
        let label = technique_label(t, true);
        let base = report.summary(&label, "baseline").unwrap().t_par.mean;
        let fail = report.summary(&label, "failures:1").unwrap().t_par.mean;
        let ratio = fail / base;
        ratios.push(format!("{t}={ratio:.3}"));
        if ratio.is_nan() || ratio > 1.10 {
            over.push(t.to_string());
        }
    }
    (
        outcome(
            over.is_empty(),
            format!(
                "ratio to baseline (limit 1.10): {}; over: [{}]",
                ratios.join(" "),
                over.join(", ")
            ),
        ),
        report,
    )
}

fn ss_most_resilient() -> (Outcome, MatrixReport) {
    let set = vec![
        Technique::Ss,
        Technique::Gss,
        Technique::Tss,
        Technique::Fac,
        Technique::Mfsc,
    ];
    let cfg = matrix_config(
        set,
        &["failures:half"],
        20,
        RdlbMode::On,
        WorkloadChoice::Constant { t: CONSTANT_T },
    );
    let report = run_matrix(&cfg).expect("matrix runs");
    let rep = report
        .robustness_for("failures:8", true)
        .expect("robustness report");
    let ss = rep.get("SS+rDLB").unwrap();
    let radii: Vec<String> = rep
        .entries
        .iter()
        .map(|e| format!("{}={:.3}", e.technique.trim_end_matches("+rDLB"), e.radius))
        .collect();
    let pass =
        !rep.degenerate && ss.rho == 1.0 && rep.entries.iter().all(|e| e.radius >= ss.radius);
    (
        outcome(
            pass,
            format!("radii (s): {}; rho_SS = {}", radii.join(" "), ss.rho),
        ),
        report,
    )
}

fn latency_helped() -> (Outcome, MatrixReport) {
    let cfg = matrix_config(
        dynamic(),
        &["latency:10"],
        20,
        RdlbMode::Both,
        WorkloadChoice::Mandelbrot {
            cost_per_iter: 1e-5,
        },
    );
    let report = run_matrix(&cfg).expect("matrix runs");
    let mut bad = Vec::new();
    let mut rows = Vec::new();
    for t in dynamic() {
        let off = report
            .summary(&technique_label(t, false), "latency:10")
            .unwrap()
            .t_par
            .mean;
        let on = report
            .summary(&technique_label(t, true), "latency:10")
            .unwrap()
            .t_par
            .mean;
        rows.push(format!("{t} {off:.2}->{on:.2}"));
        let ok = if t.is_adaptive() { on < off } else { on <= off };
        if !ok {
            bad.push(t.to_string());
        }
    }
    (
        outcome(
            bad.is_empty(),
            format!(
                "mean T_par off->on: {}; violations: [{}]",
                rows.join(", "),
                bad.join(", ")
            ),
        ),
        report,
    )
}

fn drain(t: Technique, n: usize, p: usize, seed: u64) -> Vec<usize> {
    let params = TechniqueParams {
        h: 1e-4,
        sigma: 1e-3,
        weights: None,
        seed,
    };
    let mut s = TechniqueState::new(t, n, p, &params).unwrap();
    let mut out = Vec::new();
    let mut pe = 0;
    while s.remaining() > 0 {
        out.push(s.next_chunk(pe).unwrap());
        pe = (pe + 1) % p;
    }
    out
}

fn chunk_oracles() -> Outcome {
    let mut bad = Vec::new();
    if drain(Technique::Gss, 100, 4, 0) != [25, 19, 14, 11, 8, 6, 5, 3, 3, 2, 1, 1, 1, 1] {
        bad.push("GSS".to_string());
    }
    let tss = drain(Technique::Tss, 100, 4, 0);
    if tss[..3] != [13, 12, 11] || tss.iter().sum::<usize>() != 100 {
        bad.push("TSS".to_string());
    }
    let fac: Vec<usize> = [13, 6, 3, 2, 1].iter().flat_map(|&c| [c; 4]).collect();
    if drain(Technique::Fac, 100, 4, 0) != fac {
        bad.push("FAC".to_string());
    }
    let rand_seq = drain(Technique::Rand, 100, 4, 9);
    if rand_bounds(100, 4) != (1, 12)
        || rand_bounds(20_000, 256) != (1, 39)
        || !rand_seq.iter().all(|c| (1..=12).contains(c))
        || rand_seq != drain(Technique::Rand, 100, 4, 9)
    {
        bad.push("RAND".to_string());
    }
    let mut rng = StdRng::seed_from_u64(8);
    let mut cover_bad = 0;
    for t in Technique::ALL {
        for _ in 0..200 {
            let p = rng.random_range(2..=256);
            let n = rng.random_range(p..=100_000);
            if drain(t, n, p, rng.random()).iter().sum::<usize>() != n {
                cover_bad += 1;
                bad.push(format!("{t} N={n} P={p}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} of {} random (N, P) pairs covered exactly; mismatches: [{}]",
            14 * 200 - cover_bad,
            14 * 200,
            bad.join("; ")
        ),
    )
}

fn robustness_definition(generated: &[RobustnessReport]) -> Outcome {
    let base = [("A", 5.0), ("B", 5.0), ("C", 5.0)];
    let pert = [("A", 15.0), ("B", 25.0), ("C", 35.0)];
    let rep = robustness("synthetic", &base, &pert).unwrap();
    let rho: Vec<f64> = rep.entries.iter().map(|e| e.rho).collect();
    let bad: Vec<String> = generated
        .iter()
        .filter(|r| r.min_rho() != 1.0)
        .map(|r| r.scenario.clone())
        .collect();
    outcome(
        rho == [1.0, 2.0, 3.0] && bad.is_empty() && !generated.is_empty(),
        format!(
            "synthetic rho = {rho:?}; {} generated reports, min rho != 1 in [{}]",
            generated.len(),
            bad.join(", ")
        ),
    )
}

fn determinism() -> Outcome {
    let mut cfg = matrix_config(
        vec![
            Technique::Rand,
            Technique::Af,
            Technique::AwfC,
            Technique::Fsc,
        ],
        &["failures:half", "combined"],
        3,
        RdlbMode::Both,
        WorkloadChoice::Gaussian {
            mean: 0.001,
            sigma: 0.0005,
        },
    );
    cfg.n = 2000;
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut outputs = Vec::new();
    for d in &dirs {
        cfg.trace_dir = Some(d.path().join("traces"));
        let out = d.path().join("m.csv");
        matrix::save(&out, &run_matrix(&cfg).unwrap()).unwrap();
        let mut files: Vec<_> = std::fs::read_dir(d.path().join("traces"))
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        files.push(out.clone());
        files.push(matrix::robustness_path(&out));
        let blobs: Vec<(String, Vec<u8>)> = files
            .iter()
            .map(|f| {
                (
                    f.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read(f).unwrap(),
                )
            })
            .collect();
        outputs.push(blobs);
    }
    let same = outputs[0] == outputs[1];
    outcome(
        same && outputs[0].len() > 2,
        format!("{} files compared, identical = {same}", outputs[0].len()),
    )
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "fault tolerance up to P-1 failures", fault_tolerance()),
        (2, "hang without rescheduling", hang_without_rdlb()),
        (3, "no overhead without failures", zero_overhead()),
        (4, "cost model", cost_model()),
    ];
    let (o5, r5) = single_failure_near_baseline();
    results.push((5, "single failure near baseline", o5));
    let (o6, r6) = ss_most_resilient();
    results.push((6, "SS most resilient at P/2 failures", o6));
    let (o7, r7) = latency_helped();
    results.push((7, "rescheduling helps under latency", o7));
    results.push((8, "chunk-sequence oracles", chunk_oracles()));
    let generated: Vec<RobustnessReport> = [r5, r6, r7]
        .into_iter()
        .flat_map(|r| r.robustness)
        .collect();
    results.push((9, "robustness metric", robustness_definition(&generated)));
    results.push((10, "determinism", determinism()));

    let mut failed = 0;
    for (id, name, o) in &results {
        println!(
            "criterion {id:>2} {} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
