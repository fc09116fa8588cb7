//! Report structures written by the benchmark harness.
//!
//! Everything serializes in declared field order with no maps and no
//! timestamps, so a run whose stopping rule does not depend on wall-clock
//! time produces byte-identical JSON on every repetition. Wall-clock derived
//! fields are `null` in such runs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cccnp::CcOutcome;
use crate::memetic::{Params, SolveOutcome};

/// Schema marker embedded in every report.
pub const REPORT_SCHEMA: &str = "cnp-report-v1";

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ParamsReport {
    pub pop_size: usize,
    pub max_no_improve: u64,
    pub p0: f64,
    pub pool_beta: f64,
}

impl From<&Params> for ParamsReport {
    fn from(p: &Params) -> ParamsReport {
        ParamsReport {
            pop_size: p.pop_size,
            max_no_improve: p.max_no_improve,
            p0: p.p0,
            pool_beta: p.pool_beta,
        }
    }
}

/// One fixed-budget trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub objective: u64,
    /// Objective of the first raw solution, before any improvement.
    pub initial_objective: u64,
    pub seconds_to_best: Option<f64>,
    pub steps_to_best: u64,
    pub generations_to_best: u64,
    pub total_steps: u64,
    pub generations: u64,
    pub elapsed_seconds: Option<f64>,
    pub steps_per_second: Option<f64>,
    pub population_size: usize,
    /// `objective - best_known`, when a reference value exists.
    pub gap: Option<i64>,
    pub nodes: Vec<u32>,
}

/// One level of one descending-budget trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CcLevelEntry {
    pub k: usize,
    pub feasible: bool,
    pub excess: u64,
    pub steps: u64,
    pub generations: u64,
    pub elapsed_seconds: Option<f64>,
}

/// One descending-budget trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CcTrialReport {
    pub trial: usize,
    pub seed: u64,
    pub initial_k: usize,
    pub best_k: usize,
    /// `best_k - best_known_k`, when a reference value exists.
    pub gap: Option<i64>,
    pub total_steps: u64,
    pub levels: Vec<CcLevelEntry>,
    pub nodes: Vec<u32>,
}

/// Aggregates over trials. Fixed-budget runs fill the `f_*` block, the
/// descending-budget runs fill the `k_*` block.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub f_best: Option<u64>,
    pub f_avg: Option<f64>,
    /// Mean wall-clock seconds until each trial's best, over timed trials.
    pub t_avg_seconds: Option<f64>,
    pub mean_steps: Option<f64>,
    pub mean_steps_per_second: Option<f64>,
    pub gap_best: Option<i64>,
    /// Trials whose objective (or budget) matched the reference value.
    pub hits_best_known: Option<usize>,
    pub k_best: Option<usize>,
    pub k_avg: Option<f64>,
    pub k_gap_best: Option<i64>,
}

/// Full record of one harness invocation on one instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub instance: String,
    pub mode: String,
    pub n: usize,
    pub m: usize,
    pub k: Option<usize>,
    pub cap: Option<u32>,
    pub seed: u64,
    pub trials: usize,
    pub time_limit_seconds: Option<f64>,
    pub generation_limit: Option<u64>,
    pub target: Option<u64>,
    pub params: ParamsReport,
    pub best_known: Option<u64>,
    pub best_known_k: Option<usize>,
    pub trial_reports: Vec<TrialReport>,
    pub cc_trial_reports: Vec<CcTrialReport>,
    pub summary: Summary,
}

fn empty_summary() -> Summary {
    Summary {
        f_best: None,
        f_avg: None,
        t_avg_seconds: None,
        mean_steps: None,
        mean_steps_per_second: None,
        gap_best: None,
        hits_best_known: None,
        k_best: None,
        k_avg: None,
        k_gap_best: None,
    }
}

fn mean_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for v in values {
        sum += v;
        count += 1;
    }
    (count > 0).then(|| sum / count as f64)
}

/// Assembles per-trial records and the aggregate block for a fixed-budget
/// run. Trial `i` is attributed the seed `base_seed + i`.
pub fn cnp_trial_reports(
    outcomes: &[SolveOutcome],
    base_seed: u64,
    best_known: Option<u64>,
) -> (Vec<TrialReport>, Summary) {
    let trials: Vec<TrialReport> = outcomes
        .iter()
        .enumerate()
        .map(|(i, out)| TrialReport {
            trial: i,
            seed: base_seed.wrapping_add(i as u64),
            objective: out.best.objective,
            initial_objective: out.initial_objective,
            seconds_to_best: out.seconds_to_best,
            steps_to_best: out.steps_to_best,
            generations_to_best: out.generations_to_best,
            total_steps: out.total_steps,
            generations: out.generations,
            elapsed_seconds: out.elapsed_seconds,
            steps_per_second: out
                .elapsed_seconds
                .filter(|&s| s > 0.0)
                .map(|s| out.total_steps as f64 / s),
            population_size: out.population_size,
            gap: best_known.map(|kbv| out.best.objective as i64 - kbv as i64),
            nodes: out.best.nodes.clone(),
        })
        .collect();

    let mut summary = empty_summary();
    if !trials.is_empty() {
        let f_best = trials.iter().map(|t| t.objective).min().unwrap();
        summary.f_best = Some(f_best);
        summary.f_avg = mean_of(trials.iter().map(|t| t.objective as f64));
        summary.t_avg_seconds = mean_of(trials.iter().filter_map(|t| t.seconds_to_best));
        summary.mean_steps = mean_of(trials.iter().map(|t| t.total_steps as f64));
        summary.mean_steps_per_second = mean_of(trials.iter().filter_map(|t| t.steps_per_second));
        summary.gap_best = best_known.map(|kbv| f_best as i64 - kbv as i64);
        summary.hits_best_known =
            best_known.map(|kbv| trials.iter().filter(|t| t.objective == kbv).count());
    }
    (trials, summary)
}

/// Assembles per-trial records and the aggregate block for a
/// descending-budget run.
pub fn cc_trial_reports(
    outcomes: &[CcOutcome],
    base_seed: u64,
    best_known_k: Option<usize>,
) -> (Vec<CcTrialReport>, Summary) {
    let trials: Vec<CcTrialReport> = outcomes
        .iter()
        .enumerate()
        .map(|(i, out)| CcTrialReport {
            trial: i,
            seed: base_seed.wrapping_add(i as u64),
            initial_k: out.initial_k,
            best_k: out.best_k,
            gap: best_known_k.map(|r| out.best_k as i64 - r as i64),
            total_steps: out.total_steps,
            levels: out
                .levels
                .iter()
                .map(|l| CcLevelEntry {
                    k: l.k,
                    feasible: l.feasible,
                    excess: l.excess,
                    steps: l.steps,
                    generations: l.generations,
                    elapsed_seconds: l.elapsed_seconds,
                })
                .collect(),
            nodes: out.best_nodes.clone(),
        })
        .collect();

    let mut summary = empty_summary();
    if !trials.is_empty() {
        let k_best = trials.iter().map(|t| t.best_k).min().unwrap();
        summary.k_best = Some(k_best);
        summary.k_avg = mean_of(trials.iter().map(|t| t.best_k as f64));
        summary.mean_steps = mean_of(trials.iter().map(|t| t.total_steps as f64));
        summary.k_gap_best = best_known_k.map(|r| k_best as i64 - r as i64);
        summary.hits_best_known =
            best_known_k.map(|r| trials.iter().filter(|t| t.best_k <= r).count());
    }
    (trials, summary)
}

/// Pretty JSON with a trailing newline.
pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization");
    s.push('\n');
    s
}

/// One-row-per-instance CSV with a header line.
pub fn write_csv(w: &mut impl Write, report: &Report) -> std::io::Result<()> {
    writeln!(
        w,
        "instance,mode,n,m,k,cap,trials,f_best,f_avg,t_avg_seconds,mean_steps,gap_best,\
         hits_best_known,k_best,k_avg,k_gap_best"
    )?;
    let s = &report.summary;
    let opt = |v: Option<String>| v.unwrap_or_default();
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        report.instance,
        report.mode,
        report.n,
        report.m,
        opt(report.k.map(|v| v.to_string())),
        opt(report.cap.map(|v| v.to_string())),
        report.trials,
        opt(s.f_best.map(|v| v.to_string())),
        opt(s.f_avg.map(|v| v.to_string())),
        opt(s.t_avg_seconds.map(|v| v.to_string())),
        opt(s.mean_steps.map(|v| v.to_string())),
        opt(s.gap_best.map(|v| v.to_string())),
        opt(s.hits_best_known.map(|v| v.to_string())),
        opt(s.k_best.map(|v| v.to_string())),
        opt(s.k_avg.map(|v| v.to_string())),
        opt(s.k_gap_best.map(|v| v.to_string())),
    )
}

/// Short human-readable digest for the terminal.
pub fn human_summary(report: &Report) -> String {
    let s = &report.summary;
    let mut out = format!(
        "{} [{}] n={} m={} trials={}",
        report.instance, report.mode, report.n, report.m, report.trials
    );
    if let Some(k) = report.k {
        out.push_str(&format!(" k={k}"));
    }
    if let Some(cap) = report.cap {
        out.push_str(&format!(" cap={cap}"));
    }
    out.push('\n');
    if let Some(f_best) = s.f_best {
        out.push_str(&format!("  f_best={f_best}"));
        if let Some(f_avg) = s.f_avg {
            out.push_str(&format!(" f_avg={f_avg:.2}"));
        }
        if let Some(gap) = s.gap_best {
            out.push_str(&format!(" gap_best={gap}"));
        }
        if let Some(hits) = s.hits_best_known {
            out.push_str(&format!(" hits_best_known={hits}/{}", report.trials));
        }
        if let Some(t) = s.t_avg_seconds {
            out.push_str(&format!(" t_avg={t:.2}s"));
        }
        if let Some(rate) = s.mean_steps_per_second {
            out.push_str(&format!(" steps_per_sec={rate:.0}"));
        }
        out.push('\n');
    }
    if let Some(k_best) = s.k_best {
        out.push_str(&format!("  k_best={k_best}"));
        if let Some(k_avg) = s.k_avg {
            out.push_str(&format!(" k_avg={k_avg:.2}"));
        }
        if let Some(gap) = s.k_gap_best {
            out.push_str(&format!(" k_gap_best={gap}"));
        }
        if let Some(hits) = s.hits_best_known {
            out.push_str(&format!(" hits_best_known={hits}/{}", report.trials));
        }
        out.push('\n');
    }
    out
}
