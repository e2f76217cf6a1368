//! Exact anytime solver for the power-index voting game design problem:
//! enumerate canonical weighted voting games, score each against a target
//! Banzhaf index, and stream strict improvements until the budget runs out
//! or the enumeration is exhausted.

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use crate::banzhaf::{banzhaf, euclidean_error};
use crate::coalition::Coalition;
use crate::enumeration::{enumerate_antichains, enumerate_cwvg, Order, PosetNode};
use crate::game::{GameRep, WeightVector};

/// Enumeration is practical only up to this many players when a run must
/// go to exhaustion; budgeted runs may go higher.
pub const EXHAUSTIVE_CAP: u8 = 9;

/// A canonical target power index: a point of the unit simplex with
/// non-increasing coordinates.
#[derive(Clone, PartialEq, Debug)]
pub struct TargetIndex {
    p: Vec<f64>,
}

const SIMPLEX_TOLERANCE: f64 = 1e-12;

impl TargetIndex {
    /// Accepts a canonical target: nonnegative, non-increasing, summing to
    /// 1 within 1e-12.
    pub fn new(p: Vec<f64>) -> Result<Self, TargetError> {
        if p.is_empty() || p.len() > 64 {
            return Err(TargetError::BadLength(p.len()));
        }
        if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(TargetError::NegativeEntry);
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(TargetError::NotNormalized { sum });
        }
        if p.windows(2).any(|w| w[0] < w[1]) {
            return Err(TargetError::NotCanonical);
        }
        Ok(TargetIndex { p })
    }

    /// Sorts an arbitrary simplex point into canonical form. Returns the
    /// target plus the relabeling `permutation[old_index] = new player
    /// number`, so a solution for the sorted target can be permuted back.
    pub fn from_unsorted(p: Vec<f64>) -> Result<(Self, Vec<u8>), TargetError> {
        let mut order: Vec<usize> = (0..p.len()).collect();
        order.sort_by(|&a, &b| p[b].partial_cmp(&p[a]).unwrap_or(std::cmp::Ordering::Equal));
        let sorted: Vec<f64> = order.iter().map(|&i| p[i]).collect();
        let mut permutation = vec![0u8; p.len()];
        for (new_pos, &old) in order.iter().enumerate() {
            permutation[old] = new_pos as u8 + 1;
        }
        Ok((TargetIndex::new(sorted)?, permutation))
    }

    pub fn n(&self) -> u8 {
        self.p.len() as u8
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TargetError {
    #[error("target must have between 1 and 64 entries, got {0}")]
    BadLength(usize),
    #[error("target entries must be finite and nonnegative")]
    NegativeEntry,
    #[error("target must sum to 1 (got {sum})")]
    NotNormalized { sum: f64 },
    #[error("target is not non-increasing; sort it first (see TargetIndex::from_unsorted)")]
    NotCanonical,
}

/// Search budget. Game-count budgets are preferred in CI because they are
/// deterministic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Budget {
    Exhaustive,
    Games(u64),
    Time(Duration),
}

/// One strict improvement of the incumbent.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Improvement {
    pub games_scored: u64,
    pub elapsed_secs: f64,
    pub error: f64,
    pub wmin: Vec<Coalition>,
    pub weights: WeightVector,
}

/// The full anytime record of a solve run. The improvement errors are
/// strictly decreasing; the last improvement is the incumbent, and it is
/// the provable optimum when `exhausted` is true.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: u8,
    pub target: Vec<f64>,
    pub games_scored: u64,
    pub elapsed_secs: f64,
    pub exhausted: bool,
    pub improvements: Vec<Improvement>,
}

impl SolveReport {
    pub fn best(&self) -> Option<&Improvement> {
        self.improvements.last()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("exhaustive enumeration is capped at n = {cap}; give n = {n} a budget")]
    ExhaustiveCap { n: u8, cap: u8 },
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Oracle(#[from] crate::enumeration::EnumerationError),
}

/// Runs the anytime solver. Every emitted game is scored with the
/// normalized Banzhaf index; strict improvements are recorded (ties keep
/// the first-emitted game) and passed to `on_improvement` as they occur.
/// `stop` allows an external interrupt; stopping early is a normal outcome
/// with `exhausted = false`.
pub fn solve_pvgd_with(
    target: &TargetIndex,
    order: Order,
    budget: Budget,
    stop: Option<&AtomicBool>,
    mut on_improvement: impl FnMut(&Improvement),
) -> Result<SolveReport, SolveError> {
    let n = target.n();
    if matches!(budget, Budget::Exhaustive) && n > EXHAUSTIVE_CAP {
        return Err(SolveError::ExhaustiveCap { n, cap: EXHAUSTIVE_CAP });
    }
    let start = Instant::now();
    let mut games_scored = 0u64;
    let mut best = f64::INFINITY;
    let mut improvements = Vec::new();
    let mut budget_hit = false;

    let completed = enumerate_cwvg(n, order, |node: &PosetNode| {
        if let Some(flag) = stop {
            if flag.load(AtomicOrdering::Relaxed) {
                budget_hit = true;
                return ControlFlow::Break(());
            }
        }
        let game = GameRep::MinimalWinning { n, list: node.wmin.clone() };
        let index = banzhaf(&game).expect("enumeration cap keeps n <= 30");
        let error = euclidean_error(&index.normalized, target.values())
            .expect("index length equals target length");
        games_scored += 1;
        if error < best {
            best = error;
            let improvement = Improvement {
                games_scored,
                elapsed_secs: start.elapsed().as_secs_f64(),
                error,
                wmin: node.wmin.clone(),
                weights: node.witness.clone(),
            };
            on_improvement(&improvement);
            improvements.push(improvement);
        }
        match budget {
            Budget::Games(max) if games_scored >= max => {
                budget_hit = true;
                ControlFlow::Break(())
            }
            Budget::Time(max) if start.elapsed() >= max => {
                budget_hit = true;
                ControlFlow::Break(())
            }
            _ => ControlFlow::Continue(()),
        }
    });

    Ok(SolveReport {
        n,
        target: target.values().to_vec(),
        games_scored,
        elapsed_secs: start.elapsed().as_secs_f64(),
        exhausted: completed && !budget_hit,
        improvements,
    })
}

/// [`solve_pvgd_with`] without streaming or interrupts.
pub fn solve_pvgd(
    target: &TargetIndex,
    order: Order,
    budget: Budget,
) -> Result<SolveReport, SolveError> {
    solve_pvgd_with(target, order, budget, None, |_| {})
}

/// Uniform sample from the unit simplex (sorted-uniform spacings), sorted
/// non-increasing to make it a canonical target. Deterministic per seed.
pub fn sample_canonical_target(n: u8, seed: u64) -> TargetIndex {
    assert!(n >= 1 && n <= 64);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut p = Vec::with_capacity(n as usize);
    let mut prev = 0.0;
    for &c in &cuts {
        p.push(c - prev);
        prev = c;
    }
    p.push(1.0 - prev);
    p.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Exact renormalization guard: float spacings sum to 1 up to rounding.
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
        for x in &mut p {
            *x /= sum;
        }
    }
    TargetIndex::new(p).expect("spacings construction lands on the simplex")
}

/// Best monotonic simple game for a target, by brute force over every
/// antichain of coalitions. An oracle for tiny n only.
#[derive(Clone, PartialEq, Debug)]
pub struct MonotonicSolve {
    pub wmin: Vec<Coalition>,
    pub index: Vec<BigRational>,
    pub error: f64,
}

pub fn solve_monotonic_pvgd(target: &TargetIndex) -> Result<MonotonicSolve, SolveError> {
    let n = target.n();
    let mut best: Option<MonotonicSolve> = None;
    for wmin in enumerate_antichains(n)? {
        let game = GameRep::MinimalWinning { n, list: wmin.clone() };
        let index = banzhaf(&game).expect("n <= 4");
        let error = euclidean_error(&index.normalized, target.values())
            .expect("lengths match");
        let better = match &best {
            None => true,
            Some(incumbent) => error < incumbent.error,
        };
        if better {
            best = Some(MonotonicSolve { wmin, index: index.normalized, error });
        }
    }
    Ok(best.expect("antichain stream is never empty"))
}
