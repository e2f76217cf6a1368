//! Output-polynomial enumeration of canonical weighted voting games over
//! the graded poset ordered by minimal-winning-coalition set inclusion.
//!
//! Rank-r games extend rank-(r-1) games by one coalition; candidate
//! coalitions are right-truncations of the parent's ceilings, weightedness
//! is decided by the compact margin LP, and a duplicates check keeps the
//! stream exactly-once even though the poset is not a tree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;

use crate::coalition::Coalition;
use crate::game::{
    check_linear_canonical, roofs_from_mwc_unchecked, sperner_bound, Canonicity,
    DesirabilityOrder, WeightVector,
};
use crate::synthesis::{ceilings_from_mwc_unchecked, synth_weights_compact};

/// Traversal order of the poset.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Order {
    BreadthFirst,
    DepthFirst,
}

impl Order {
    pub fn parse(s: &str) -> Option<Order> {
        match s {
            "breadth-first" | "bf" => Some(Order::BreadthFirst),
            "depth-first" | "df" => Some(Order::DepthFirst),
            _ => None,
        }
    }
}

/// A canonical weighted voting game as a node of the poset: its sorted
/// MWC list, its cached ceiling list (which drives extension generation),
/// and a weighted-form witness with quota 1.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PosetNode {
    pub wmin: Vec<Coalition>,
    pub ceilings: Vec<Coalition>,
    pub witness: WeightVector,
}

impl PosetNode {
    /// Rank in the graded poset: the number of minimal winning coalitions.
    pub fn rank(&self) -> usize {
        self.wmin.len()
    }

    pub fn n(&self) -> u8 {
        self.witness.n()
    }
}

/// The least element: the n-player game in which every coalition loses.
pub fn bottom(n: u8) -> PosetNode {
    PosetNode {
        wmin: Vec::new(),
        ceilings: vec![Coalition::grand(n)],
        witness: WeightVector::from_integers(1, &vec![0; n as usize]).expect("static form"),
    }
}

/// A fully verified canonical weighted voting game, as produced by
/// [`verify_weighted_canonical`].
pub struct VerifiedGame {
    pub order: DesirabilityOrder,
    pub roofs: Vec<Coalition>,
    pub ceilings: Vec<Coalition>,
    pub witness: WeightVector,
}

/// Checks whether a sorted MWC antichain is the MWC list of a canonical
/// weighted voting game; on success returns the desirability order, the
/// roof and ceiling lists, and a weight witness.
pub fn verify_weighted_canonical(n: u8, wmin: &[Coalition]) -> Option<VerifiedGame> {
    let order = match check_linear_canonical(n, wmin) {
        Canonicity::Canonical(order) => order,
        _ => return None,
    };
    let roofs = roofs_from_mwc_unchecked(wmin);
    let ceilings = ceilings_from_mwc_unchecked(n, wmin);
    let witness = synth_weights_compact(n, &roofs, &ceilings, &order).ok()?;
    Some(VerifiedGame { order, roofs, ceilings, witness })
}

/// Candidate extensions of a node: for every cached ceiling `C` and every
/// `0 <= i <= |C|`, the list `wmin ∪ {rtrunc(C, i)}` — skipping additions
/// that nest with an existing coalition (the result must stay an
/// antichain) and deduplicating additions that several `(C, i)` pairs
/// produce. Returns `(candidate list, added coalition)` pairs in PR-lexi
/// order of the added coalition.
pub fn extensions(
    wmin: &[Coalition],
    ceilings: &[Coalition],
) -> Vec<(Vec<Coalition>, Coalition)> {
    let mut additions: std::collections::BTreeSet<Coalition> = Default::default();
    for c in ceilings {
        for i in 0..=c.cardinality() {
            let cand = c.right_truncation(i).expect("i ranges over 0..=|C|");
            if wmin.iter().any(|m| m.is_subset_of(&cand) || cand.is_subset_of(m)) {
                continue;
            }
            additions.insert(cand);
        }
    }
    additions
        .into_iter()
        .map(|added| {
            let mut list = wmin.to_vec();
            let pos = list.binary_search(&added).expect_err("added is new");
            list.insert(pos, added);
            (list, added)
        })
        .collect()
}

/// The exactly-once filter: keep the candidate only if no coalition
/// strictly PR-lexi-before `added` can be removed to leave a canonical
/// weighted voting game. Each game is thus produced solely on the path
/// that adds its earliest removable coalition.
pub fn duplicates_check(
    candidate_wmin: &[Coalition],
    added: &Coalition,
    mut is_weighted_canonical: impl FnMut(&[Coalition]) -> bool,
) -> bool {
    for (idx, c) in candidate_wmin.iter().enumerate() {
        if c >= added {
            break;
        }
        let mut reduced = candidate_wmin.to_vec();
        reduced.remove(idx);
        if is_weighted_canonical(&reduced) {
            return false;
        }
    }
    true
}

/// Expands one breadth-first frontier into the next rank. The previous
/// frontier doubles as the duplicates-check oracle: a rank-(r-1) list is
/// weighted-and-canonical exactly when it was emitted at rank r-1.
fn expand_rank(n: u8, frontier: &[PosetNode], threads: usize) -> Vec<PosetNode> {
    let prev: HashSet<Vec<Coalition>> =
        frontier.iter().map(|node| node.wmin.clone()).collect();

    // Every (candidate, added) arrival, folded to the PR-lexi-least added
    // per candidate. BTreeMap keeps candidates in emission order.
    let mut groups: BTreeMap<Vec<Coalition>, Coalition> = BTreeMap::new();
    for node in frontier {
        for (list, added) in extensions(&node.wmin, &node.ceilings) {
            groups
                .entry(list)
                .and_modify(|m| {
                    if added < *m {
                        *m = added;
                    }
                })
                .or_insert(added);
        }
    }

    let keep = |(list, added): (&Vec<Coalition>, &Coalition)| -> Option<PosetNode> {
        if !duplicates_check(list, added, |reduced| prev.contains(reduced)) {
            return None;
        }
        verify_weighted_canonical(n, list).map(|game| PosetNode {
            wmin: list.clone(),
            ceilings: game.ceilings,
            witness: game.witness,
        })
    };

    if threads > 1 {
        let entries: Vec<(&Vec<Coalition>, &Coalition)> = groups.iter().collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| entries.par_iter().filter_map(|&e| keep(e)).collect())
    } else {
        groups.iter().filter_map(keep).collect()
    }
}

/// Breadth-first frontier walker with checkpoint support. `frontier()`
/// holds the games of the current rank; `advance` replaces it with the
/// next rank.
pub struct BreadthFirst {
    n: u8,
    rank: usize,
    frontier: Vec<PosetNode>,
    by_rank: Vec<u64>,
    threads: usize,
}

/// Serializable snapshot of a completed rank.
#[derive(Clone, Serialize, Deserialize)]
pub struct BfCheckpoint {
    pub n: u8,
    pub rank: usize,
    pub by_rank: Vec<u64>,
    pub frontier: Vec<PosetNode>,
}

impl BreadthFirst {
    pub fn new(n: u8) -> Self {
        assert!(n >= 1 && n <= 64);
        let frontier = vec![bottom(n)];
        BreadthFirst { n, rank: 0, frontier, by_rank: vec![1], threads: 1 }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn from_checkpoint(ck: BfCheckpoint) -> Self {
        BreadthFirst {
            n: ck.n,
            rank: ck.rank,
            frontier: ck.frontier,
            by_rank: ck.by_rank,
            threads: 1,
        }
    }

    pub fn checkpoint(&self) -> BfCheckpoint {
        BfCheckpoint {
            n: self.n,
            rank: self.rank,
            by_rank: self.by_rank.clone(),
            frontier: self.frontier.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn frontier(&self) -> &[PosetNode] {
        &self.frontier
    }

    pub fn by_rank(&self) -> &[u64] {
        &self.by_rank
    }

    /// Expands to the next rank; false when the poset is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.frontier.is_empty() || self.rank as u128 >= sperner_bound(self.n) {
            self.frontier.clear();
            return false;
        }
        let next = expand_rank(self.n, &self.frontier, self.threads);
        self.rank += 1;
        self.frontier = next;
        if self.frontier.is_empty() {
            false
        } else {
            self.by_rank.push(self.frontier.len() as u64);
            true
        }
    }
}

fn depth_first(
    n: u8,
    node: &PosetNode,
    visit: &mut impl FnMut(&PosetNode) -> ControlFlow<()>,
) -> ControlFlow<()> {
    visit(node)?;
    for (list, added) in extensions(&node.wmin, &node.ceilings) {
        let Some(game) = verify_weighted_canonical(n, &list) else { continue };
        let keep = duplicates_check(&list, &added, |reduced| {
            verify_weighted_canonical(n, reduced).is_some()
        });
        if keep {
            let child =
                PosetNode { wmin: list, ceilings: game.ceilings, witness: game.witness };
            depth_first(n, &child, visit)?;
        }
    }
    ControlFlow::Continue(())
}

/// Emits every n-player canonical weighted voting game exactly once,
/// starting from the all-losing game. Breadth-first emits rank by rank
/// (PR-lexi within a rank); depth-first emits in pre-order. Returns true
/// when the enumeration ran to completion, false when the visitor stopped
/// it early.
pub fn enumerate_cwvg(
    n: u8,
    order: Order,
    visit: impl FnMut(&PosetNode) -> ControlFlow<()>,
) -> bool {
    enumerate_cwvg_with(n, order, crate::env_threads(), visit)
}

/// [`enumerate_cwvg`] with an explicit worker count (breadth-first only;
/// the emission stream is identical for any count).
pub fn enumerate_cwvg_with(
    n: u8,
    order: Order,
    threads: usize,
    mut visit: impl FnMut(&PosetNode) -> ControlFlow<()>,
) -> bool {
    match order {
        Order::BreadthFirst => {
            let mut bf = BreadthFirst::new(n).with_threads(threads);
            loop {
                for node in bf.frontier() {
                    if visit(node).is_break() {
                        return false;
                    }
                }
                if !bf.advance() {
                    return true;
                }
            }
        }
        Order::DepthFirst => depth_first(n, &bottom(n), &mut visit).is_continue(),
    }
}

/// Number of canonical weighted voting games per rank.
pub fn count_by_rank(n: u8) -> Vec<u64> {
    let mut counts = Vec::new();
    enumerate_cwvg_with(n, Order::BreadthFirst, 1, |node| {
        if counts.len() <= node.rank() {
            counts.resize(node.rank() + 1, 0);
        }
        counts[node.rank()] += 1;
        ControlFlow::Continue(())
    });
    counts
}

/// Total number of canonical weighted voting games on n players.
pub fn count_cwvg(n: u8) -> u64 {
    count_by_rank(n).iter().sum()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("antichain enumeration is a brute-force oracle, refusing n = {n} > {max}")]
    TooManyPlayers { n: u8, max: u8 },
}

/// Brute-force oracle: every antichain of coalitions over `2^{1..n}`,
/// i.e. every monotonic simple game, by trying all set families. Only
/// feasible for n <= 4.
pub fn enumerate_antichains(n: u8) -> Result<Vec<Vec<Coalition>>, EnumerationError> {
    const MAX: u8 = 4;
    if n > MAX {
        return Err(EnumerationError::TooManyPlayers { n, max: MAX });
    }
    let universe: Vec<Coalition> =
        (0..1u64 << n).map(|bits| Coalition::from_bits(n, bits)).collect();
    let mut out = Vec::new();
    'family: for family in 0..1u64 << universe.len() {
        let mut members: Vec<Coalition> = Vec::new();
        for (idx, c) in universe.iter().enumerate() {
            if family >> idx & 1 == 1 {
                members.push(*c);
            }
        }
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if a.is_subset_of(b) || b.is_subset_of(a) {
                    continue 'family;
                }
            }
        }
        members.sort();
        out.push(members);
    }
    out.sort();
    Ok(out)
}
