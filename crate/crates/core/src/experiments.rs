//! Batch experiment runners: enumeration timings, per-rank game counts,
//! average optimal error over random targets, and bounded convergence
//! traces. Each runner returns typed rows plus a CSV rendering.

use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::time::Instant;

use crate::banzhaf::banzhaf;
use crate::enumeration::{count_by_rank, enumerate_cwvg, Order};
use crate::game::GameRep;
use crate::solver::{sample_canonical_target, solve_pvgd, Budget, SolveError, EXHAUSTIVE_CAP};

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n_min: u8,
    pub n_max: u8,
    pub instances: u32,
    pub seed: u64,
    pub games_budget: Option<u64>,
    pub order: Order,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_min: 1,
            n_max: 5,
            instances: 100,
            seed: 0,
            games_budget: None,
            order: Order::BreadthFirst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    #[error("need 1 <= n_min <= n_max, got {n_min}..{n_max}")]
    BadRange { n_min: u8, n_max: u8 },
    #[error("exhaustive experiments are capped at n = {cap}, got {n}")]
    BeyondCap { n: u8, cap: u8 },
    #[error("experiment 4 needs a games budget")]
    MissingBudget,
    #[error("need at least one instance")]
    NoInstances,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

fn check_range(cfg: &ExperimentConfig, capped: bool) -> Result<(), ExperimentError> {
    if cfg.n_min < 1 || cfg.n_min > cfg.n_max {
        return Err(ExperimentError::BadRange { n_min: cfg.n_min, n_max: cfg.n_max });
    }
    if capped && cfg.n_max > EXHAUSTIVE_CAP {
        return Err(ExperimentError::BeyondCap { n: cfg.n_max, cap: EXHAUSTIVE_CAP });
    }
    Ok(())
}

/// Experiment 1: wall-clock enumeration time per player count and
/// traversal order, with and without Banzhaf scoring folded in.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub n: u8,
    pub order: Order,
    pub games: u64,
    pub enumerate_secs: f64,
    pub with_banzhaf_secs: f64,
}

pub fn run_timings(cfg: &ExperimentConfig) -> Result<Vec<TimingRow>, ExperimentError> {
    check_range(cfg, true)?;
    let mut rows = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        for order in [Order::BreadthFirst, Order::DepthFirst] {
            let start = Instant::now();
            let mut games = 0u64;
            enumerate_cwvg(n, order, |_| {
                games += 1;
                ControlFlow::Continue(())
            });
            let enumerate_secs = start.elapsed().as_secs_f64();

            let start = Instant::now();
            enumerate_cwvg(n, order, |node| {
                let game = GameRep::MinimalWinning { n, list: node.wmin.clone() };
                let _ = banzhaf(&game).expect("n is capped");
                ControlFlow::Continue(())
            });
            let with_banzhaf_secs = start.elapsed().as_secs_f64();
            rows.push(TimingRow { n, order, games, enumerate_secs, with_banzhaf_secs });
        }
    }
    Ok(rows)
}

pub fn timings_csv(rows: &[TimingRow]) -> String {
    let mut out = String::from("n,order,games,enumerate_secs,with_banzhaf_secs\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.6},{:.6}",
            r.n,
            order_name(r.order),
            r.games,
            r.enumerate_secs,
            r.with_banzhaf_secs
        )
        .unwrap();
    }
    out
}

/// Experiment 2: exact number of canonical weighted voting games per
/// number of minimal winning coalitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCountRow {
    pub n: u8,
    pub rank: usize,
    pub count: u64,
}

pub fn run_rank_histogram(cfg: &ExperimentConfig) -> Result<Vec<RankCountRow>, ExperimentError> {
    check_range(cfg, true)?;
    let mut rows = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        for (rank, &count) in count_by_rank(n).iter().enumerate() {
            rows.push(RankCountRow { n, rank, count });
        }
    }
    Ok(rows)
}

pub fn rank_histogram_csv(rows: &[RankCountRow]) -> String {
    let mut out = String::from("n,rank,count\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.n, r.rank, r.count).unwrap();
    }
    out
}

/// Experiment 3: mean, worst, and standard deviation of the optimal error
/// over random canonical targets, with the solver run to completion.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalErrorRow {
    pub n: u8,
    pub instances: u32,
    pub mean: f64,
    pub worst: f64,
    pub stddev: f64,
}

pub fn run_optimal_error(cfg: &ExperimentConfig) -> Result<Vec<OptimalErrorRow>, ExperimentError> {
    check_range(cfg, true)?;
    if cfg.instances == 0 {
        return Err(ExperimentError::NoInstances);
    }
    let mut rows = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        let mut errors = Vec::with_capacity(cfg.instances as usize);
        for k in 0..cfg.instances {
            let target = sample_canonical_target(n, cfg.seed.wrapping_add(k as u64));
            let report = solve_pvgd(&target, cfg.order, Budget::Exhaustive)?;
            errors.push(report.best().expect("stream is nonempty").error);
        }
        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        let worst = errors.iter().cloned().fold(f64::MIN, f64::max);
        let var = errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
            / errors.len() as f64;
        rows.push(OptimalErrorRow {
            n,
            instances: cfg.instances,
            mean,
            worst,
            stddev: var.sqrt(),
        });
    }
    Ok(rows)
}

pub fn optimal_error_csv(rows: &[OptimalErrorRow]) -> String {
    let mut out = String::from("n,instances,mean_error,worst_error,stddev\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{:.9},{:.9},{:.9}",
            r.n, r.instances, r.mean, r.worst, r.stddev
        )
        .unwrap();
    }
    out
}

/// Experiment 4: bounded convergence traces. One row per improvement per
/// instance, at a fixed player count (`cfg.n_max`) under a games budget.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub instance: u32,
    pub games_scored: u64,
    pub elapsed_secs: f64,
    pub error: f64,
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRow>, ExperimentError> {
    if cfg.instances == 0 {
        return Err(ExperimentError::NoInstances);
    }
    let budget = cfg.games_budget.ok_or(ExperimentError::MissingBudget)?;
    let n = cfg.n_max;
    let mut rows = Vec::new();
    for k in 0..cfg.instances {
        let target = sample_canonical_target(n, cfg.seed.wrapping_add(k as u64));
        let report = solve_pvgd(&target, cfg.order, Budget::Games(budget))?;
        for imp in &report.improvements {
            rows.push(ConvergenceRow {
                instance: k,
                games_scored: imp.games_scored,
                elapsed_secs: imp.elapsed_secs,
                error: imp.error,
            });
        }
    }
    Ok(rows)
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("instance,games_scored,elapsed_secs,error\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{:.6},{:.9}",
            r.instance, r.games_scored, r.elapsed_secs, r.error
        )
        .unwrap();
    }
    out
}

pub fn order_name(order: Order) -> &'static str {
    match order {
        Order::BreadthFirst => "breadth-first",
        Order::DepthFirst => "depth-first",
    }
}
