//! Wall-clock scaling harness for the approximation algorithms.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{generate, Family, GeneratorSpec};
use crate::io::{Instance, ProblemKind};
use crate::par::Execution;
use crate::solver::{solve_labeling_with, solve_similar_with};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub family: Family,
    pub problem: ProblemKind,
    pub n_list: Vec<usize>,
    pub k_list: Vec<usize>,
    pub seed: u64,
    /// Timed repetitions per cell, after one discarded warm-up run.
    pub reps: usize,
    pub exec: Execution,
}

impl BenchConfig {
    pub fn new(family: Family, problem: ProblemKind, n_list: Vec<usize>, k_list: Vec<usize>) -> Self {
        Self { family, problem, n_list, k_list, seed: 0, reps: 5, exec: Execution::Sequential }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub median_secs: f64,
}

/// Least-squares slope of `log(time)` against `log(size)` with the other size held fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub fixed: usize,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub family: &'static str,
    pub problem: &'static str,
    pub rows: Vec<BenchRow>,
    /// Slope against `n`, one entry per `k` with at least two `n` values.
    pub slope_n: Vec<SlopeFit>,
    /// Slope against `k`, one entry per `n` with at least two `k` values.
    pub slope_k: Vec<SlopeFit>,
}

/// Times the solver over the grid `n_list x k_list`.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.n_list.is_empty() || cfg.k_list.is_empty() {
        return Err(Error::BenchGrid("n and k lists must be non-empty".into()));
    }
    if cfg.n_list.contains(&0) || cfg.k_list.contains(&0) {
        return Err(Error::BenchGrid("sizes must be positive".into()));
    }
    if cfg.reps == 0 {
        return Err(Error::BenchGrid("reps must be at least 1".into()));
    }

    let mut rows = Vec::new();
    for &n in &cfg.n_list {
        for &k in &cfg.k_list {
            let spec = GeneratorSpec::new(cfg.family, cfg.problem, n, k, cfg.seed);
            let instance = generate(&spec)?.to_instance()?;
            let run = || -> f64 {
                match &instance {
                    Instance::Similar(i) => solve_similar_with(i, cfg.exec).objective,
                    Instance::Labeling(i) => solve_labeling_with(i, cfg.exec).objective,
                }
            };
            std::hint::black_box(run());
            let mut times: Vec<Duration> = (0..cfg.reps)
                .map(|_| {
                    let start = Instant::now();
                    std::hint::black_box(run());
                    start.elapsed()
                })
                .collect();
            times.sort();
            rows.push(BenchRow { n, k, median_secs: median(&times).as_secs_f64() });
        }
    }

    let fits = |fixed_list: &[usize], pick: fn(&BenchRow) -> (usize, usize)| {
        fixed_list
            .iter()
            .filter_map(|&fixed| {
                let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                    .iter()
                    .filter(|r| pick(r).1 == fixed)
                    .map(|r| (pick(r).0 as f64, r.median_secs))
                    .unzip();
                (xs.len() >= 2).then(|| SlopeFit { fixed, slope: loglog_slope(&xs, &ys) })
            })
            .collect::<Vec<_>>()
    };
    let slope_n = fits(&cfg.k_list, |r| (r.n, r.k));
    let slope_k = fits(&cfg.n_list, |r| (r.k, r.n));

    Ok(BenchReport {
        family: cfg.family.name(),
        problem: cfg.problem.name(),
        rows,
        slope_n,
        slope_k,
    })
}

fn median(sorted: &[Duration]) -> Duration {
    let m = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[m]
    } else {
        (sorted[m - 1] + sorted[m]) / 2
    }
}

/// Ordinary least-squares slope of `ln y` on `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.max(f64::MIN_POSITIVE).ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
