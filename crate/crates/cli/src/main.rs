//! `simlabel`: solve, check and benchmark similar elements and complete-graph
//! metric labeling instances.
//!
//! Exit codes: 0 success, 1 input error, 2 approximation guarantee violated.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use simlabel_core::bench::{run_bench, BenchConfig, BenchReport};
use simlabel_core::generate::{generate, Family, GeneratorSpec};
use simlabel_core::io::{parse_instance_file, InstanceFile, SpaceSpec};
use simlabel_core::par::with_threads;
use simlabel_core::solver::{select_labeling, select_similar, solve_stars_labeling, solve_stars_similar};
use simlabel_core::{
    exact_labeling, exact_similar, validate_metric, Assignment, Execution, ExactResult, Instance,
    MetricSpace, PointMetric, ProblemKind, SolveReport, Verdict, DEFAULT_BUDGET,
};

/// Additive slack on the factor-2 check.
const GUARANTEE_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "simlabel", version, about = "2-approximation solvers for similar elements and metric labeling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Similar,
    Labeling,
}

impl From<Problem> for ProblemKind {
    fn from(p: Problem) -> Self {
        match p {
            Problem::Similar => ProblemKind::Similar,
            Problem::Labeling => ProblemKind::Labeling,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Points,
    RandomMetric,
    Strings,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Points => Family::Points,
            FamilyArg::RandomMetric => Family::RandomMetric,
            FamilyArg::Strings => Family::Strings,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    L1,
    L2,
    Linf,
}

impl From<MetricArg> for PointMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::L1 => PointMetric::L1,
            MetricArg::L2 => PointMetric::L2,
            MetricArg::Linf => PointMetric::Linf,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the approximation algorithm on an instance file.
    Solve {
        path: PathBuf,
        /// Expected instance kind; the file's `kind` must match.
        #[arg(long, value_enum)]
        problem: Option<Problem>,
        /// Also compute the exact optimum and the approximation ratio.
        #[arg(long)]
        with_exact: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
        /// Worker threads for the per-root subproblems (0 = all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Exact optimum by exhaustive enumeration.
    Exact {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Check an instance file, including the metric axioms of explicit matrices.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, value_enum, default_value = "similar")]
        problem: Problem,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value = "l2")]
        metric: MetricArg,
        /// Universe size for random-metric similar instances (default 2k).
        #[arg(long)]
        universe: Option<usize>,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Draw set sizes uniformly from 1..=k.
        #[arg(long)]
        ragged: bool,
        /// Add random per-node label masks (labeling only).
        #[arg(long)]
        masks: bool,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the solver over a grid of sizes and fit log-log slopes.
    Bench {
        #[arg(long, value_enum, default_value = "random-metric")]
        family: FamilyArg,
        #[arg(long, value_enum, default_value = "similar")]
        problem: Problem,
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "10")]
        k_list: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Input(anyhow::Error),
    Guarantee(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Guarantee(msg)) => {
            eprintln!("guarantee violation: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Solve { path, problem, with_exact, budget, output, threads } => {
            cmd_solve(&path, problem.map(Into::into), with_exact, budget, output, threads)
        }
        Command::Exact { path, budget, output } => cmd_exact(&path, budget, output),
        Command::Validate { path, output } => cmd_validate(&path, output),
        Command::Gen {
            family,
            problem,
            n,
            k,
            seed,
            dim,
            metric,
            universe,
            max_len,
            ragged,
            masks,
            out,
        } => {
            let mut spec = GeneratorSpec::new(family.into(), problem.into(), n, k, seed);
            spec.dim = dim;
            spec.metric = metric.into();
            spec.universe = universe;
            spec.max_len = max_len;
            spec.ragged = ragged;
            spec.masks = masks;
            let text = generate(&spec)?.to_canonical_json()?;
            match out {
                Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Bench { family, problem, n_list, k_list, seed, reps, threads, output } => {
            let mut cfg = BenchConfig::new(family.into(), problem.into(), n_list, k_list);
            cfg.seed = seed;
            cfg.reps = reps;
            cfg.exec = if threads == 1 { Execution::Sequential } else { Execution::Parallel };
            let report = with_threads(threads, || run_bench(&cfg))?;
            match output {
                Output::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                Output::Text => print_bench(&report, reps),
            }
            Ok(())
        }
    }
}

fn load(path: &Path) -> anyhow::Result<(InstanceFile, Instance)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let file = parse_instance_file(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    let inst = file.to_instance().with_context(|| format!("loading {}", path.display()))?;
    Ok((file, inst))
}

#[derive(Serialize)]
struct InstanceInfo {
    name: Option<String>,
    kind: &'static str,
    n: usize,
    k: usize,
}

fn info(file: &InstanceFile, inst: &Instance) -> InstanceInfo {
    InstanceInfo {
        name: file.metadata.as_ref().and_then(|m| m.name.clone()),
        kind: inst.kind().name(),
        n: inst.n(),
        k: inst.k(),
    }
}

#[derive(Serialize)]
struct Timings {
    per_root_dp_secs: f64,
    selection_secs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_secs: Option<f64>,
}

#[derive(Serialize)]
struct RunReport {
    instance: InstanceInfo,
    #[serde(flatten)]
    solve: SolveReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<ExactResult>,
    /// objective / exact objective; 1 when both are zero, null when only the optimum is zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<Option<f64>>,
    guarantee_ok: bool,
    timings: Timings,
}

fn cmd_solve(
    path: &Path,
    problem: Option<ProblemKind>,
    with_exact: bool,
    budget: u64,
    output: Output,
    threads: usize,
) -> Result<(), Failure> {
    let (file, inst) = load(path)?;
    if let Some(p) = problem {
        if p != inst.kind() {
            return Err(anyhow!(
                "instance kind is `{}`, --problem asked for `{}`",
                inst.kind().name(),
                p.name()
            )
            .into());
        }
    }
    let exec = if threads == 1 { Execution::Sequential } else { Execution::Parallel };

    let (solve, dp_secs, sel_secs) = with_threads(threads, || {
        let t0 = Instant::now();
        match &inst {
            Instance::Similar(i) => {
                let stars = solve_stars_similar(i, exec);
                let t1 = Instant::now();
                let rep = select_similar(i, stars);
                (rep, (t1 - t0).as_secs_f64(), t1.elapsed().as_secs_f64())
            }
            Instance::Labeling(i) => {
                let stars = solve_stars_labeling(i, exec);
                let t1 = Instant::now();
                let rep = select_labeling(i, stars);
                (rep, (t1 - t0).as_secs_f64(), t1.elapsed().as_secs_f64())
            }
        }
    });

    let (exact, exact_secs) = if with_exact {
        let t = Instant::now();
        let ex = match &inst {
            Instance::Similar(i) => exact_similar(i, budget)?,
            Instance::Labeling(i) => exact_labeling(i, budget)?,
        };
        (Some(ex), Some(t.elapsed().as_secs_f64()))
    } else {
        (None, None)
    };

    let guarantee_ok = exact
        .as_ref()
        .is_none_or(|ex| solve.objective <= 2.0 * ex.objective + GUARANTEE_TOL);
    let ratio = exact.as_ref().map(|ex| ratio(solve.objective, ex.objective));

    let report = RunReport {
        instance: info(&file, &inst),
        solve,
        exact,
        ratio,
        guarantee_ok,
        timings: Timings { per_root_dp_secs: dp_secs, selection_secs: sel_secs, exact_secs },
    };
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Output::Text => print_run(&report),
    }
    if !guarantee_ok {
        let ex = report.exact.as_ref().map_or(f64::NAN, |e| e.objective);
        return Err(Failure::Guarantee(format!(
            "objective {} exceeds twice the optimum {}",
            report.solve.objective, ex
        )));
    }
    Ok(())
}

fn ratio(objective: f64, optimum: f64) -> Option<f64> {
    if optimum > 0.0 {
        Some(objective / optimum)
    } else if objective == 0.0 {
        Some(1.0)
    } else {
        None
    }
}

fn fmt_assignment(x: &Assignment) -> String {
    let parts: Vec<String> = x.as_slice().iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn print_run(r: &RunReport) {
    let i = &r.instance;
    println!("instance    {} ({}, n={}, k={})", i.name.as_deref().unwrap_or("-"), i.kind, i.n, i.k);
    println!("root        {}", r.solve.root);
    println!("assignment  {}", fmt_assignment(&r.solve.assignment));
    println!("star value  {}", r.solve.star_value);
    println!("objective   {}", r.solve.objective);
    if let Some(ex) = &r.exact {
        println!("optimum     {} at {}", ex.objective, fmt_assignment(&ex.assignment));
        println!("enumerated  {}", ex.enumerated_count);
        match r.ratio.flatten() {
            Some(q) => println!("ratio       {q}"),
            None => println!("ratio       undefined"),
        }
    }
    println!(
        "time        dp {:.6}s, selection {:.6}s",
        r.timings.per_root_dp_secs, r.timings.selection_secs
    );
}

#[derive(Serialize)]
struct ExactReport {
    instance: InstanceInfo,
    #[serde(flatten)]
    exact: ExactResult,
}

fn cmd_exact(path: &Path, budget: u64, output: Output) -> Result<(), Failure> {
    let (file, inst) = load(path)?;
    let exact = match &inst {
        Instance::Similar(i) => exact_similar(i, budget)?,
        Instance::Labeling(i) => exact_labeling(i, budget)?,
    };
    let report = ExactReport { instance: info(&file, &inst), exact };
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Output::Text => {
            println!("optimum     {}", report.exact.objective);
            println!("assignment  {}", fmt_assignment(&report.exact.assignment));
            println!("enumerated  {}", report.exact.enumerated_count);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    #[serde(flatten)]
    verdict: Verdict,
}

fn cmd_validate(path: &Path, output: Output) -> Result<(), Failure> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let mut file = parse_instance_file(&bytes)?;
    let verdict = match &file.space {
        SpaceSpec::Matrix { distances } => {
            validate_metric(&MetricSpace::matrix_unchecked(distances.clone())?)?
        }
        _ => Verdict::default(),
    };
    let report = ValidateReport { valid: verdict.is_valid(), verdict };
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Output::Text => println!("{}", report.verdict),
    }
    if !report.valid {
        bail_input(format!("metric axioms violated: {}", report.verdict))?;
    }
    // remaining structural checks
    file.skip_validation = true;
    file.to_instance()?;
    Ok(())
}

fn bail_input(msg: String) -> anyhow::Result<()> {
    bail!(msg)
}

fn print_bench(r: &BenchReport, reps: usize) {
    println!("family={} problem={} reps={reps}", r.family, r.problem);
    println!("{:>8} {:>8} {:>14}", "n", "k", "median_ms");
    for row in &r.rows {
        println!("{:>8} {:>8} {:>14.4}", row.n, row.k, row.median_secs * 1e3);
    }
    for f in &r.slope_n {
        println!("slope vs n (k={}): {:.3}", f.fixed, f.slope);
    }
    for f in &r.slope_k {
        println!("slope vs k (n={}): {:.3}", f.fixed, f.slope);
    }
}
