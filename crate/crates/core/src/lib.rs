//! Weighted voting games: coalition combinatorics, representation
//! synthesis, output-polynomial enumeration of canonical weighted voting
//! games, Banzhaf power indices, and an exact anytime solver for the
//! power-index game design problem.
//!
//! The crate is organized around the pipeline:
//!
//! - [`coalition`]: bit-level coalitions, the PR-lexi order, and shift
//!   operations.
//! - [`game`]: the seven representation languages, evaluation, and the
//!   desirability relation.
//! - [`synthesis`]: shelters, the Hop-Skip-and-Jump walk to maximal losing
//!   coalitions, ceilings straight from minimal winning coalitions, and
//!   exact LP weight synthesis.
//! - [`enumeration`]: the graded poset of canonical weighted voting games
//!   and its exactly-once traversals.
//! - [`banzhaf`]: raw and normalized Banzhaf indices.
//! - [`solver`]: the anytime design-problem solver and target sampling.
//! - [`experiments`]: batch runners producing CSV/JSONL reports.
//! - [`encoding`]: the JSON wire formats shared by the CLI and files.

pub mod banzhaf;
pub mod coalition;
pub mod encoding;
pub mod enumeration;
pub mod experiments;
pub mod game;
pub mod simplex;
pub mod solver;
pub mod synthesis;

pub use coalition::Coalition;
pub use game::{GameRep, WeightVector};

/// Worker cap from the `WVG_THREADS` environment variable; defaults to 1
/// (sequential) so runs are reproducible unless parallelism is asked for.
pub fn env_threads() -> usize {
    std::env::var("WVG_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}
