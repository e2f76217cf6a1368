//! Representation conversion engines: shelter extraction, the
//! Hop-Skip-and-Jump walk from shelters to maximal losing coalitions,
//! direct ceiling generation from minimal winning coalitions, and exact
//! weight synthesis via margin-maximizing linear programs.

use num_rational::BigRational;
use num_traits::{One, Signed};
use std::collections::HashSet;

use crate::coalition::Coalition;
use crate::game::{wmin_eval, DesirabilityOrder, GameError, WeightVector};
use crate::simplex::{LinearProgram, LpResult, Sense};

/// Shelters of a canonical linear game: minimal winning coalitions whose
/// bottom right-shift is losing or undefined. The empty coalition never
/// appears (the all-winning game must be special-cased by callers).
pub fn shelters(n: u8, wmin: &[Coalition]) -> Vec<Coalition> {
    let _ = n;
    let mut out: Vec<Coalition> = wmin
        .iter()
        .filter(|s| !s.is_empty())
        .filter(|s| match s.bottom_right_shift() {
            None => true,
            Some(shifted) => !wmin_eval(wmin, &shifted),
        })
        .copied()
        .collect();
    out.sort();
    out
}

/// The Hop-Skip-and-Jump algorithm: walks the PR-lexi order from the empty
/// coalition, steering by the sorted shelter list, and outputs exactly the
/// maximal losing coalitions. Runs in O(n^3 t) for t shelters.
///
/// Preconditions: `shelters` is PR-lexi sorted and does not contain the
/// empty coalition. An empty shelter list means no coalition wins, so the
/// output is `{N}`.
pub fn hop_skip_jump(n: u8, shelters: &[Coalition]) -> Vec<Coalition> {
    let mut out = Vec::new();
    if shelters.is_empty() {
        out.push(Coalition::grand(n));
        return out;
    }
    debug_assert!(shelters.windows(2).all(|w| w[0] < w[1]), "shelters must be sorted");
    debug_assert!(!shelters[0].is_empty(), "empty coalition cannot be a shelter");

    let mut next_idx = 0usize;
    let mut next: Option<Coalition> = Some(shelters[0]);
    let mut current = Coalition::empty(n);
    loop {
        // Hop upward by fill-ups until we sit just below the next shelter;
        // with the list exhausted the loop runs until truncation dies out.
        loop {
            if let Some(s) = next {
                if current == s.without(s.highest_member().expect("shelter nonempty")) {
                    break;
                }
            }
            if !current.contains(n) {
                current = current.fill_up().expect("cannot be grand without player n");
            } else {
                out.push(current);
                match current.truncation().bottom_right_shift() {
                    Some(c) => current = c,
                    None => return out,
                }
            }
        }
        let s = next.expect("loop above only breaks on a live shelter");
        if !s.contains(n) {
            current = s.bottom_right_shift().expect("b(s) < n here");
        } else {
            out.push(current);
            match s.immediate_successor() {
                Some(c) => current = c,
                None => return out, // next shelter was {n}
            }
        }
        next_idx += 1;
        next = shelters.get(next_idx).copied();
    }
}

/// Validates a ceiling candidate against the game's MWC list: losing,
/// maximal (every one-player extension wins), and every direct left-shift
/// winning.
fn is_ceiling(n: u8, wmin: &[Coalition], cand: &Coalition) -> bool {
    if wmin_eval(wmin, cand) {
        return false;
    }
    for p in 1..=n {
        if !cand.contains(p) && !wmin_eval(wmin, &cand.with(p)) {
            return false;
        }
    }
    cand.direct_left_shifts().iter().all(|ls| wmin_eval(wmin, ls))
}

/// Generates the complete ceiling list of a canonical linear game directly
/// from its MWC list, without materializing the maximal losing coalitions.
///
/// Candidates come from two families per minimal winning coalition (the
/// trailing run of each ceiling points back at an MWC), plus the prefix
/// coalitions `{1..m}`, which cover every ceiling without an internal gap.
/// Each candidate is then validated against the game, so the output is
/// exact.
pub fn ceilings_from_mwc(n: u8, wmin: &[Coalition]) -> Result<Vec<Coalition>, GameError> {
    match crate::game::check_linear_canonical(n, wmin) {
        crate::game::Canonicity::Canonical(_) => Ok(ceilings_from_mwc_unchecked(n, wmin)),
        crate::game::Canonicity::NotCanonical { .. } => Err(GameError::NotCanonical),
        crate::game::Canonicity::NotLinear { players } => {
            Err(GameError::NotLinear { players })
        }
    }
}

pub(crate) fn ceilings_from_mwc_unchecked(n: u8, wmin: &[Coalition]) -> Vec<Coalition> {
    if wmin.iter().any(|s| s.is_empty()) {
        // All-winning game: nothing loses, so no ceilings.
        return Vec::new();
    }
    let mut candidates: HashSet<Coalition> = HashSet::new();
    let mut prefix = Coalition::empty(n);
    candidates.insert(prefix);
    for p in 1..=n {
        prefix = prefix.with(p);
        candidates.insert(prefix);
    }
    for s in wmin {
        let b = s.highest_member().expect("empty handled above");
        let a = s.highest_gap();
        for k in 0..=(n - b) {
            let mut fam2 = s.without(b);
            for j in 1..=k {
                fam2 = fam2.with(b + j);
            }
            candidates.insert(fam2);
            if a >= 2 && s.contains(a - 1) {
                let mut fam1 = s.without(a - 1).with(a);
                for j in 1..=k {
                    fam1 = fam1.with(b + j);
                }
                candidates.insert(fam1);
            }
        }
    }
    let mut out: Vec<Coalition> = candidates
        .into_iter()
        .filter(|cand| is_ceiling(n, wmin, cand))
        .collect();
    out.sort();
    out
}

/// Full maximal-losing list of a linear game from its minimal-winning
/// list: canonicalize if needed, extract shelters, run Hop-Skip-and-Jump,
/// and map the players back.
pub fn lmax_from_wmin(n: u8, wmin: &[Coalition]) -> Result<Vec<Coalition>, GameError> {
    if wmin.iter().any(|s| s.is_empty()) {
        return Ok(Vec::new()); // all-winning: nothing loses
    }
    match crate::game::check_linear_canonical(n, wmin) {
        crate::game::Canonicity::Canonical(_) => Ok(hop_skip_jump(n, &shelters(n, wmin))),
        crate::game::Canonicity::NotCanonical { permutation } => {
            let relabeled = crate::game::apply_permutation(wmin, &permutation);
            let lmax = lmax_from_wmin(n, &relabeled)?;
            Ok(crate::game::apply_permutation(
                &lmax,
                &crate::game::invert_permutation(&permutation),
            ))
        }
        crate::game::Canonicity::NotLinear { players } => {
            Err(GameError::NotLinear { players })
        }
    }
}

/// Minimal-winning list of a linear game from its maximal-losing list, by
/// running Hop-Skip-and-Jump on the reflected game: mapping every
/// coalition through `S -> {n+1-i : i ∉ S}` swaps winning with losing, so
/// the reflected MLCs are the Wmin of a game whose MLCs reflect back to
/// the Wmin we want.
pub fn wmin_from_lmax(n: u8, lmax: &[Coalition]) -> Result<Vec<Coalition>, GameError> {
    match crate::game::check_linear_canonical_lmax(n, lmax) {
        crate::game::Canonicity::Canonical(_) => {
            let mut reflected: Vec<Coalition> =
                lmax.iter().map(Coalition::reflected_complement).collect();
            reflected.sort();
            let reflected_lmax = lmax_from_wmin(n, &reflected)?;
            let mut wmin: Vec<Coalition> =
                reflected_lmax.iter().map(Coalition::reflected_complement).collect();
            wmin.sort();
            Ok(wmin)
        }
        crate::game::Canonicity::NotCanonical { permutation } => {
            let relabeled = crate::game::apply_permutation(lmax, &permutation);
            let wmin = wmin_from_lmax(n, &relabeled)?;
            Ok(crate::game::apply_permutation(
                &wmin,
                &crate::game::invert_permutation(&permutation),
            ))
        }
        crate::game::Canonicity::NotLinear { players } => {
            Err(GameError::NotLinear { players })
        }
    }
}

/// The margin-maximization feasibility system behind weight synthesis:
/// `w(S) >= q` for the `at_least` rows, `w(S) < q` for the `strictly_less`
/// rows, optional ordering `w_1 >= ... >= w_n`, and an optional merge of
/// equally desirable players onto one variable. The quota is fixed to 1
/// (weighted forms are invariant to scaling) and strictness is decided by
/// maximizing the margin `t` in `w(S) <= 1 - t`.
#[derive(Clone, Debug)]
pub struct FeasibilityProblem {
    n: u8,
    at_least: Vec<Coalition>,
    strictly_less: Vec<Coalition>,
    ordered: bool,
    /// Player -> variable class, non-decreasing; one LP variable per class.
    merge: Option<Vec<usize>>,
}

impl FeasibilityProblem {
    pub fn new(n: u8, at_least: Vec<Coalition>, strictly_less: Vec<Coalition>) -> Self {
        FeasibilityProblem { n, at_least, strictly_less, ordered: false, merge: None }
    }

    pub fn with_ordering(mut self) -> Self {
        self.ordered = true;
        self
    }

    pub fn with_classes(mut self, order: &DesirabilityOrder) -> Self {
        self.merge = Some(order.class_of());
        self
    }

    /// Solves the margin LP. Returns the per-player weights for quota 1
    /// when the optimal margin is strictly positive, `None` otherwise.
    pub fn solve(&self) -> Option<Vec<BigRational>> {
        let class_of: Vec<usize> = match &self.merge {
            Some(map) => map.clone(),
            None => (0..self.n as usize).collect(),
        };
        let num_classes = class_of.iter().copied().max().map_or(0, |m| m + 1);
        // Variables: one weight per class, then t+ and t- (t is free).
        let tp = num_classes;
        let tn = num_classes + 1;
        let mut lp = LinearProgram::new(num_classes + 2);
        lp.set_objective(tp, 1);
        lp.set_objective(tn, -1);

        let class_row = |s: &Coalition| {
            let mut row = vec![0i64; num_classes + 2];
            for p in s.members() {
                row[class_of[p as usize - 1]] += 1;
            }
            row
        };
        for s in &self.at_least {
            lp.add_row(class_row(s), Sense::Ge, 1);
        }
        for s in &self.strictly_less {
            let mut row = class_row(s);
            row[tp] = 1;
            row[tn] = -1;
            lp.add_row(row, Sense::Le, 1);
        }
        if self.ordered {
            for a in 0..num_classes.saturating_sub(1) {
                let mut row = vec![0i64; num_classes + 2];
                row[a] = -1;
                row[a + 1] = 1;
                lp.add_row(row, Sense::Le, 0);
            }
        }
        match lp.maximize() {
            LpResult::Optimal { value, x } if value.is_positive() => {
                let w = (0..self.n as usize).map(|p| x[class_of[p]].clone()).collect();
                Some(w)
            }
            _ => None,
        }
    }
}

fn all_zero_weights(n: u8, q: i64) -> WeightVector {
    WeightVector::from_integers(q, &vec![0i64; n as usize]).expect("static degenerate form")
}

/// Synthesizes a weighted form `[1; w]` from the minimal winning and
/// maximal losing coalition lists, or reports that no weighting exists.
/// The two degenerate games get fixed forms: `[1; 0,...,0]` when nothing
/// wins and `[0; 0,...,0]` when everything wins.
pub fn synth_weights(
    n: u8,
    wmin: &[Coalition],
    lmax: &[Coalition],
) -> Result<WeightVector, SynthesisError> {
    if wmin.is_empty() {
        return Ok(all_zero_weights(n, 1));
    }
    if wmin.iter().any(|s| s.is_empty()) {
        return Ok(all_zero_weights(n, 0));
    }
    let problem = FeasibilityProblem::new(n, wmin.to_vec(), lmax.to_vec());
    match problem.solve() {
        Some(w) => Ok(WeightVector::new(BigRational::one(), w).expect("LP weights nonnegative")),
        None => Err(SynthesisError::NotWeighted),
    }
}

/// The compact variant: constraints only on roofs and ceilings, ordering
/// rows `w_1 >= ... >= w_n`, and one variable per equal-desirability
/// class. Same contract as [`synth_weights`].
pub fn synth_weights_compact(
    n: u8,
    roofs: &[Coalition],
    ceilings: &[Coalition],
    order: &DesirabilityOrder,
) -> Result<WeightVector, SynthesisError> {
    if roofs.is_empty() {
        return Ok(all_zero_weights(n, 1));
    }
    if roofs.iter().any(|s| s.is_empty()) {
        return Ok(all_zero_weights(n, 0));
    }
    let problem = FeasibilityProblem::new(n, roofs.to_vec(), ceilings.to_vec())
        .with_ordering()
        .with_classes(order);
    match problem.solve() {
        Some(w) => Ok(WeightVector::new(BigRational::one(), w).expect("LP weights nonnegative")),
        None => Err(SynthesisError::NotWeighted),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthesisError {
    #[error("the game admits no weighted representation")]
    NotWeighted,
}
