//! Command-line solver and benchmark harness for critical node detection.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cnp::campaign::{run_cc_trials, run_cnp_trials, validate_solution, BudgetSpec};
use cnp::cccnp::CcParams;
use cnp::graph::{load_graph_path, Graph, ParseOptions, Parsed};
use cnp::kbv;
use cnp::memetic::Params;
use cnp::oracle::brute_force_optimum;
use cnp::report::{
    cc_trial_reports, cnp_trial_reports, human_summary, to_json, write_csv, ParamsReport, Report,
    REPORT_SCHEMA,
};
use cnp::signtest::sign_test;
use cnp::solution::{read_solution, write_solution, Metric};

#[derive(Parser)]
#[command(
    name = "cnp",
    version,
    about = "Critical node solver and benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run seeded solver trials on one instance and report the results.
    Solve(SolveArgs),
    /// Recompute a solution file's objective from scratch and check it.
    Validate(ValidateArgs),
    /// Exhaustively compute the optimum of a small instance.
    Oracle(OracleArgs),
    /// Paired sign test between two report sets.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Fixed removal budget; minimize pairwise connectivity.
    Cnp,
    /// Minimize the removal budget subject to a residual component cap.
    Cccnp,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file: optional comments, one `n m` header line, then m edges.
    #[arg(long)]
    instance: PathBuf,
    /// Treat node ids in the instance file as 1-based.
    #[arg(long)]
    one_indexed: bool,
    /// Reject self-loops instead of dropping them.
    #[arg(long)]
    strict: bool,
}

impl InstanceArgs {
    fn load(&self) -> Result<(Graph, String)> {
        let opts = ParseOptions {
            one_indexed: self.one_indexed,
            strict: self.strict,
        };
        let Parsed {
            graph,
            self_loops_dropped,
            duplicates_collapsed,
        } = load_graph_path(&self.instance, &opts)
            .with_context(|| format!("loading {}", self.instance.display()))?;
        if self_loops_dropped > 0 {
            eprintln!("warning: dropped {self_loops_dropped} self-loops");
        }
        if duplicates_collapsed > 0 {
            eprintln!("warning: collapsed {duplicates_collapsed} duplicate edges");
        }
        Ok((graph, instance_name(&self.instance)))
    }
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Removal budget (cnp mode).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Cnp)]
    mode: Mode,
    /// Residual component size cap (cccnp mode, or cap-based objective in cnp mode).
    #[arg(long)]
    w: Option<u32>,
    /// Per-trial wall-clock limit in seconds [default: 3600, dropped when
    /// --generations is set].
    #[arg(long)]
    time_limit: Option<f64>,
    /// Stop each trial after this many crossover generations; without an
    /// explicit --time-limit this makes reports byte-reproducible.
    #[arg(long)]
    generations: Option<u64>,
    /// Stop a trial early at this objective value (cnp mode).
    #[arg(long)]
    target: Option<u64>,
    /// Stop the budget descent at this set size (cccnp mode).
    #[arg(long)]
    target_k: Option<usize>,
    /// Independent trials; trial i uses seed + i.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Base random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Population size.
    #[arg(long, default_value_t = 20)]
    pop_size: usize,
    /// Local search stops after this many non-improving iterations.
    #[arg(long, default_value_t = 1000)]
    max_iter: u64,
    /// Probability of inheriting each non-shared parent node in crossover.
    #[arg(long, default_value_t = 0.85)]
    p0: f64,
    /// Weight of quality versus diversity in pool replacement.
    #[arg(long, default_value_t = 0.6)]
    pool_beta: f64,
    /// Run trials in parallel, one per worker thread.
    #[arg(long)]
    parallel: bool,
    /// Write the full JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a one-row CSV summary here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the best solution found to this file.
    #[arg(long)]
    solution_out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Solution file: one `K f` header line, then K node ids.
    #[arg(long)]
    solution: PathBuf,
    /// Required set size; defaults to the size the file declares.
    #[arg(long)]
    k: Option<usize>,
    /// Check the overflow objective under this component cap instead of
    /// pairwise connectivity.
    #[arg(long)]
    w: Option<u32>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Removal budget.
    #[arg(long)]
    k: usize,
    /// Use the overflow objective under this component cap.
    #[arg(long)]
    w: Option<u32>,
    /// Write the optimal solution to this file.
    #[arg(long)]
    solution_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompareMetric {
    /// Best objective over trials.
    Best,
    /// Mean objective over trials.
    Avg,
}

#[derive(Args)]
struct CompareArgs {
    /// Side A report files, one per instance (repeatable).
    #[arg(long, num_args = 1.., required = true)]
    a: Vec<PathBuf>,
    /// Side B report files, paired with side A by position.
    #[arg(long, num_args = 1.., required = true)]
    b: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = CompareMetric::Best)]
    metric: CompareMetric,
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Solve(args) => solve(args),
        Cmd::Validate(args) => validate(args),
        Cmd::Oracle(args) => oracle(args),
        Cmd::Compare(args) => compare(args),
    }
}

fn metric_label(metric: Metric) -> &'static str {
    match metric {
        Metric::PairwiseConnectivity => "pairwise connectivity",
        Metric::ComponentExcess { .. } => "component overflow",
    }
}

fn solve(args: SolveArgs) -> Result<()> {
    let (graph, name) = args.input.load()?;
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let time_limit = args
        .time_limit
        .or_else(|| args.generations.is_none().then_some(3600.0));
    if let Some(t) = time_limit {
        let valid = t.is_finite() && t > 0.0;
        if !valid {
            bail!("--time-limit must be a positive number of seconds");
        }
    }
    let params = Params {
        pop_size: args.pop_size,
        max_no_improve: args.max_iter,
        p0: args.p0,
        pool_beta: args.pool_beta,
    };

    let report = match args.mode {
        Mode::Cnp => {
            let Some(k) = args.k else {
                bail!("cnp mode requires --k")
            };
            if args.target_k.is_some() {
                bail!("--target-k applies to cccnp mode");
            }
            let metric = match args.w {
                None => Metric::PairwiseConnectivity,
                Some(cap) => Metric::ComponentExcess { cap },
            };
            let best_known = match metric {
                Metric::PairwiseConnectivity => kbv::cnp_reference(&name)
                    .filter(|r| r.k == k)
                    .map(|r| r.best),
                Metric::ComponentExcess { .. } => None,
            };
            let spec = BudgetSpec {
                time_limit: time_limit.map(Duration::from_secs_f64),
                generations: args.generations,
                target: args.target,
            };
            let outcomes = run_cnp_trials(
                &graph,
                k,
                metric,
                &params,
                &spec,
                args.seed,
                args.trials,
                args.parallel,
            )?;
            // Defense in depth: re-derive every reported objective from
            // scratch before publishing it.
            for out in &outcomes {
                let f = validate_solution(&graph, &out.best.nodes, Some(k), metric)?;
                if f != out.best.objective {
                    bail!(
                        "internal objective mismatch: incremental {} vs recomputed {f}",
                        out.best.objective
                    );
                }
            }
            let (trial_reports, summary) = cnp_trial_reports(&outcomes, args.seed, best_known);
            Report {
                schema: REPORT_SCHEMA.to_string(),
                instance: name,
                mode: "cnp".to_string(),
                n: graph.n(),
                m: graph.m(),
                k: Some(k),
                cap: args.w,
                seed: args.seed,
                trials: args.trials,
                time_limit_seconds: time_limit,
                generation_limit: args.generations,
                target: args.target,
                params: ParamsReport::from(&params),
                best_known,
                best_known_k: None,
                trial_reports,
                cc_trial_reports: Vec::new(),
                summary,
            }
        }
        Mode::Cccnp => {
            let Some(cap) = args.w else {
                bail!("cccnp mode requires --w")
            };
            if args.k.is_some() {
                bail!("--k applies to cnp mode; use --target-k to bound the descent");
            }
            if args.target.is_some() {
                bail!("--target applies to cnp mode; cccnp levels always target zero overflow");
            }
            let best_known_k = kbv::cc_reference(&name)
                .filter(|r| r.cap == cap)
                .map(|r| r.best_k);
            let cc = CcParams {
                cap,
                inner: params,
                level_time: None,
                level_generations: args.generations,
                total_time: time_limit.map(Duration::from_secs_f64),
                target_k: args.target_k,
            };
            let outcomes = run_cc_trials(&graph, &cc, args.seed, args.trials, args.parallel)?;
            for out in &outcomes {
                let excess = validate_solution(
                    &graph,
                    &out.best_nodes,
                    Some(out.best_k),
                    Metric::ComponentExcess { cap },
                )?;
                if excess != 0 {
                    bail!("internal feasibility mismatch: reported set has overflow {excess}");
                }
            }
            let (cc_reports, summary) = cc_trial_reports(&outcomes, args.seed, best_known_k);
            Report {
                schema: REPORT_SCHEMA.to_string(),
                instance: name,
                mode: "cccnp".to_string(),
                n: graph.n(),
                m: graph.m(),
                k: None,
                cap: Some(cap),
                seed: args.seed,
                trials: args.trials,
                time_limit_seconds: time_limit,
                generation_limit: args.generations,
                target: None,
                params: ParamsReport::from(&params),
                best_known: None,
                best_known_k,
                trial_reports: Vec::new(),
                cc_trial_reports: cc_reports,
                summary,
            }
        }
    };

    print!("{}", human_summary(&report));
    if let Some(path) = &args.out {
        std::fs::write(path, to_json(&report))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.csv {
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("writing {}", path.display()))?,
        );
        write_csv(&mut w, &report)?;
        w.flush()?;
    }
    if let Some(path) = &args.solution_out {
        let (nodes, objective): (&[u32], u64) = match report.mode.as_str() {
            "cnp" => {
                let best = report
                    .trial_reports
                    .iter()
                    .min_by_key(|t| t.objective)
                    .expect("at least one trial");
                (&best.nodes, best.objective)
            }
            _ => {
                let best = report
                    .cc_trial_reports
                    .iter()
                    .min_by_key(|t| t.best_k)
                    .expect("at least one trial");
                (&best.nodes, best.best_k as u64)
            }
        };
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("writing {}", path.display()))?,
        );
        let f = match report.mode.as_str() {
            "cnp" => objective,
            _ => 0,
        };
        write_solution(&mut w, nodes, f)?;
        w.flush()?;
    }
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<()> {
    let (graph, _) = args.input.load()?;
    let file = File::open(&args.solution)
        .with_context(|| format!("opening {}", args.solution.display()))?;
    let (nodes, claimed) = read_solution(BufReader::new(file))
        .with_context(|| format!("parsing {}", args.solution.display()))?;
    let metric = match args.w {
        None => Metric::PairwiseConnectivity,
        Some(cap) => Metric::ComponentExcess { cap },
    };
    let recomputed = validate_solution(&graph, &nodes, args.k, metric)?;
    if recomputed == claimed {
        println!(
            "ok: |S|={} {}={}",
            nodes.len(),
            metric_label(metric),
            recomputed
        );
        Ok(())
    } else {
        bail!(
            "mismatch: file claims {claimed}, recomputed {} = {recomputed}",
            metric_label(metric)
        );
    }
}

fn oracle(args: OracleArgs) -> Result<()> {
    let (graph, _) = args.input.load()?;
    let metric = match args.w {
        None => Metric::PairwiseConnectivity,
        Some(cap) => Metric::ComponentExcess { cap },
    };
    let (f_opt, nodes) = brute_force_optimum(&graph, args.k, metric)?;
    println!("optimum {}={f_opt}", metric_label(metric));
    println!(
        "nodes: {}",
        nodes
            .iter()
            .map(|u| u.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    if let Some(path) = &args.solution_out {
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("writing {}", path.display()))?,
        );
        write_solution(&mut w, &nodes, f_opt)?;
        w.flush()?;
    }
    Ok(())
}

fn load_report(path: &Path) -> Result<Report> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn compare(args: CompareArgs) -> Result<()> {
    if args.a.len() != args.b.len() {
        bail!(
            "side A has {} reports, side B has {}",
            args.a.len(),
            args.b.len()
        );
    }
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(args.a.len());
    for (pa, pb) in args.a.iter().zip(&args.b) {
        let ra = load_report(pa)?;
        let rb = load_report(pb)?;
        if ra.instance != rb.instance {
            bail!(
                "paired reports disagree on the instance: {} vs {}",
                ra.instance,
                rb.instance
            );
        }
        let value = |r: &Report| -> Result<f64> {
            let v = match (args.metric, r.mode.as_str()) {
                (CompareMetric::Best, "cnp") => r.summary.f_best.map(|v| v as f64),
                (CompareMetric::Avg, "cnp") => r.summary.f_avg,
                (CompareMetric::Best, _) => r.summary.k_best.map(|v| v as f64),
                (CompareMetric::Avg, _) => r.summary.k_avg,
            };
            v.ok_or_else(|| anyhow::anyhow!("report for {} has no trials to compare", r.instance))
        };
        let (va, vb) = (value(&ra)?, value(&rb)?);
        println!("{}: a={va} b={vb}", ra.instance);
        pairs.push((va, vb));
    }
    let t = sign_test(&pairs);
    println!(
        "pairs={} a_wins={} b_wins={} ties={} score_a={} score_b={}",
        t.pairs, t.a_wins, t.b_wins, t.ties, t.a_score, t.b_score
    );
    match t.published_critical {
        Some(cv) => println!(
            "critical value: published={cv} (governs), exact binomial={}",
            t.binomial_critical
        ),
        None => println!("critical value: exact binomial={}", t.binomial_critical),
    }
    let verdict = match (t.a_significant, t.b_significant) {
        (true, false) => "side A is significantly better at the 5% level",
        (false, true) => "side B is significantly better at the 5% level",
        _ => "no significant difference at the 5% level",
    };
    println!("verdict: {verdict}");
    Ok(())
}
