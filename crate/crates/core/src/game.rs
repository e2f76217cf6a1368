//! The seven representation languages for simple games, game evaluation,
//! the desirability relation, linearity/canonicity checks, representation
//! filters, and the i-bit roof game fixture family.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashSet;
use std::fmt;

use crate::coalition::Coalition;

/// Exact-rational quota plus per-player weights, `[q; w_1, ..., w_n]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightVector {
    q: BigRational,
    w: Vec<BigRational>,
}

impl WeightVector {
    pub fn new(q: BigRational, w: Vec<BigRational>) -> Result<Self, GameError> {
        if w.is_empty() || w.len() > 64 {
            return Err(GameError::BadPlayerCount(w.len()));
        }
        if q.is_negative() || w.iter().any(|x| x.is_negative()) {
            return Err(GameError::NegativeWeight);
        }
        Ok(WeightVector { q, w })
    }

    pub fn from_integers(q: i64, w: &[i64]) -> Result<Self, GameError> {
        WeightVector::new(
            BigRational::from_integer(q.into()),
            w.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
        )
    }

    pub fn n(&self) -> u8 {
        self.w.len() as u8
    }

    pub fn quota(&self) -> &BigRational {
        &self.q
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.w
    }

    pub fn weight_of(&self, coalition: &Coalition) -> BigRational {
        debug_assert_eq!(coalition.n(), self.n());
        let mut total = BigRational::zero();
        for p in coalition.members() {
            total += &self.w[p as usize - 1];
        }
        total
    }

    pub fn is_winning(&self, coalition: &Coalition) -> bool {
        self.weight_of(coalition) >= self.q
    }

    /// `[λq; λw_1, ..., λw_n]` for positive `λ`.
    pub fn scaled(&self, lambda: &BigRational) -> Result<Self, GameError> {
        if !lambda.is_positive() {
            return Err(GameError::NonPositiveScale);
        }
        Ok(WeightVector {
            q: &self.q * lambda,
            w: self.w.iter().map(|x| x * lambda).collect(),
        })
    }

    /// Parses the command-line shorthand `"q;w1,w2,..."` with each number
    /// an integer or a fraction `p/q`.
    pub fn parse_shorthand(text: &str) -> Result<Self, GameError> {
        let (q_part, w_part) = text
            .split_once(';')
            .ok_or_else(|| GameError::BadShorthand(text.to_string()))?;
        let q = parse_rational(q_part.trim())?;
        let w = w_part
            .split(',')
            .map(|tok| parse_rational(tok.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        WeightVector::new(q, w)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};", rational_to_string(&self.q))?;
        for (i, x) in self.w.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, rational_to_string(x))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct WeightVectorWire {
    q: String,
    w: Vec<String>,
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WeightVectorWire {
            q: rational_to_string(&self.q),
            w: self.w.iter().map(rational_to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WeightVectorWire::deserialize(deserializer)?;
        let q = parse_rational(&wire.q).map_err(D::Error::custom)?;
        let w = wire
            .w
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        WeightVector::new(q, w).map_err(D::Error::custom)
    }
}

/// Renders an exact rational as `"p"` or `"p/q"`.
pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p"` or `"p/q"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, GameError> {
    let bad = || GameError::BadRational(text.to_string());
    match text.split_once('/') {
        None => {
            let n: BigInt = text.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
        Some((num, den)) => {
            let n: BigInt = num.parse().map_err(|_| bad())?;
            let d: BigInt = den.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Representation tag for the list-based languages.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Tag {
    W,
    L,
    Wmin,
    Lmax,
    Roof,
    Ceil,
    Weights,
}

impl Tag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::W => "w",
            Tag::L => "l",
            Tag::Wmin => "wmin",
            Tag::Lmax => "lmax",
            Tag::Roof => "roof",
            Tag::Ceil => "ceil",
            Tag::Weights => "weights",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        Some(match s {
            "w" => Tag::W,
            "l" => Tag::L,
            "wmin" => Tag::Wmin,
            "lmax" => Tag::Lmax,
            "roof" => Tag::Roof,
            "ceil" => Tag::Ceil,
            "weights" => Tag::Weights,
            _ => return None,
        })
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A simple game in one of the seven representation languages.
///
/// List forms keep their coalitions PR-lexi sorted and duplicate-free;
/// the antichain forms additionally reject lists where one member
/// contains another.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GameRep {
    Winning { n: u8, list: Vec<Coalition> },
    Losing { n: u8, list: Vec<Coalition> },
    MinimalWinning { n: u8, list: Vec<Coalition> },
    MaximalLosing { n: u8, list: Vec<Coalition> },
    Roofs { n: u8, list: Vec<Coalition> },
    Ceilings { n: u8, list: Vec<Coalition> },
    Weighted(WeightVector),
}

fn normalize_list(n: u8, mut list: Vec<Coalition>) -> Result<Vec<Coalition>, GameError> {
    if n == 0 || n > 64 {
        return Err(GameError::BadPlayerCount(n as usize));
    }
    if let Some(c) = list.iter().find(|c| c.n() != n) {
        return Err(GameError::MixedWidth { expected: n, got: c.n() });
    }
    list.sort();
    list.dedup();
    Ok(list)
}

fn require_antichain(list: &[Coalition]) -> Result<(), GameError> {
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            if a.is_subset_of(b) || b.is_subset_of(a) {
                return Err(GameError::NotAntichain { a: *a, b: *b });
            }
        }
    }
    Ok(())
}

/// `C(n, floor(n/2))`, the Sperner bound on antichain size.
pub fn sperner_bound(n: u8) -> u128 {
    let k = n / 2;
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (n as u128 - k as u128 + i) / i;
    }
    acc
}

impl GameRep {
    pub fn winning(n: u8, list: Vec<Coalition>) -> Result<Self, GameError> {
        Ok(GameRep::Winning { n, list: normalize_list(n, list)? })
    }

    pub fn losing(n: u8, list: Vec<Coalition>) -> Result<Self, GameError> {
        Ok(GameRep::Losing { n, list: normalize_list(n, list)? })
    }

    pub fn minimal_winning(n: u8, list: Vec<Coalition>) -> Result<Self, GameError> {
        let list = normalize_list(n, list)?;
        require_antichain(&list)?;
        if list.len() as u128 > sperner_bound(n) {
            return Err(GameError::SpernerBound { len: list.len(), n });
        }
        Ok(GameRep::MinimalWinning { n, list })
    }

    pub fn maximal_losing(n: u8, list: Vec<Coalition>) -> Result<Self, GameError> {
        let list = normalize_list(n, list)?;
        require_antichain(&list)?;
        if list.len() as u128 > sperner_bound(n) {
            return Err(GameError::SpernerBound { len: list.len(), n });
        }
        Ok(GameRep::MaximalLosing { n, list })
    }

    pub fn roofs(n: u8, list: Vec<Coalition>) -> Result<Self, GameError> {
        let list = normalize_list(n, list)?;
        require_antichain(&list)?;
        Ok(GameRep::Roofs { n, list })
    }

    pub fn ceilings(n: u8, list: Vec<Coalition>) -> Result<Self, GameError> {
        let list = normalize_list(n, list)?;
        require_antichain(&list)?;
        Ok(GameRep::Ceilings { n, list })
    }

    pub fn weighted(w: WeightVector) -> Self {
        GameRep::Weighted(w)
    }

    pub fn n(&self) -> u8 {
        match self {
            GameRep::Winning { n, .. }
            | GameRep::Losing { n, .. }
            | GameRep::MinimalWinning { n, .. }
            | GameRep::MaximalLosing { n, .. }
            | GameRep::Roofs { n, .. }
            | GameRep::Ceilings { n, .. } => *n,
            GameRep::Weighted(w) => w.n(),
        }
    }

    pub fn tag(&self) -> Tag {
        match self {
            GameRep::Winning { .. } => Tag::W,
            GameRep::Losing { .. } => Tag::L,
            GameRep::MinimalWinning { .. } => Tag::Wmin,
            GameRep::MaximalLosing { .. } => Tag::Lmax,
            GameRep::Roofs { .. } => Tag::Roof,
            GameRep::Ceilings { .. } => Tag::Ceil,
            GameRep::Weighted(_) => Tag::Weights,
        }
    }

    pub fn list(&self) -> Option<&[Coalition]> {
        match self {
            GameRep::Winning { list, .. }
            | GameRep::Losing { list, .. }
            | GameRep::MinimalWinning { list, .. }
            | GameRep::MaximalLosing { list, .. }
            | GameRep::Roofs { list, .. }
            | GameRep::Ceilings { list, .. } => Some(list),
            GameRep::Weighted(_) => None,
        }
    }

    pub fn as_weights(&self) -> Option<&WeightVector> {
        match self {
            GameRep::Weighted(w) => Some(w),
            _ => None,
        }
    }

    /// Is `coalition` winning in this game?
    pub fn eval(&self, coalition: &Coalition) -> bool {
        debug_assert_eq!(coalition.n(), self.n());
        match self {
            GameRep::Winning { list, .. } => list.binary_search(coalition).is_ok(),
            GameRep::Losing { list, .. } => list.binary_search(coalition).is_err(),
            GameRep::MinimalWinning { list, .. } => wmin_eval(list, coalition),
            GameRep::MaximalLosing { list, .. } => lmax_eval(list, coalition),
            GameRep::Roofs { list, .. } => {
                list.iter().any(|r| coalition.contains_left_shift_of(r))
            }
            GameRep::Ceilings { list, .. } => {
                !list.iter().any(|c| coalition.within_right_shift_of(c))
            }
            GameRep::Weighted(w) => w.is_winning(coalition),
        }
    }
}

/// Winning test against a minimal-winning-coalition list.
pub fn wmin_eval(wmin: &[Coalition], coalition: &Coalition) -> bool {
    wmin.iter().any(|m| m.is_subset_of(coalition))
}

/// Winning test against a maximal-losing-coalition list.
pub fn lmax_eval(lmax: &[Coalition], coalition: &Coalition) -> bool {
    !lmax.iter().any(|m| coalition.is_subset_of(m))
}

/// Outcome of comparing two players under the desirability relation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Desirability {
    More,
    Equal,
    Less,
    Incomparable,
}

/// Swap test on a MWC list: `i ⪰ j` iff every minimal winning coalition
/// containing `j` but not `i` stays winning after swapping `j` for `i`.
fn swap_at_least(wmin: &[Coalition], i: u8, j: u8) -> bool {
    wmin.iter()
        .filter(|s| s.contains(j) && !s.contains(i))
        .all(|s| wmin_eval(wmin, &s.without(j).with(i)))
}

/// Desirability of player `i` relative to player `j` in the monotonic game
/// given by its MWC list.
pub fn desirability_compare(wmin: &[Coalition], i: u8, j: u8) -> Desirability {
    match (swap_at_least(wmin, i, j), swap_at_least(wmin, j, i)) {
        (true, true) => Desirability::Equal,
        (true, false) => Desirability::More,
        (false, true) => Desirability::Less,
        (false, false) => Desirability::Incomparable,
    }
}

/// Dual swap test on a MLC list: `i ⪰ j` iff every maximal losing coalition
/// containing `i` but not `j` stays losing after swapping `i` for `j`.
fn swap_at_least_lmax(lmax: &[Coalition], i: u8, j: u8) -> bool {
    lmax.iter()
        .filter(|s| s.contains(i) && !s.contains(j))
        .all(|s| !lmax_eval(lmax, &s.without(i).with(j)))
}

/// Desirability from a MLC listing.
pub fn desirability_compare_lmax(lmax: &[Coalition], i: u8, j: u8) -> Desirability {
    match (swap_at_least_lmax(lmax, i, j), swap_at_least_lmax(lmax, j, i)) {
        (true, true) => Desirability::Equal,
        (true, false) => Desirability::More,
        (false, true) => Desirability::Less,
        (false, false) => Desirability::Incomparable,
    }
}

/// A strict desirability order: an ordered partition of the players into
/// equal-desirability classes, strictly decreasing between classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DesirabilityOrder {
    classes: Vec<Vec<u8>>,
}

impl DesirabilityOrder {
    pub fn classes(&self) -> &[Vec<u8>] {
        &self.classes
    }

    /// 0-based class index per player, most desirable class first.
    pub fn class_of(&self) -> Vec<usize> {
        let n: usize = self.classes.iter().map(Vec::len).sum();
        let mut idx = vec![0usize; n];
        for (k, class) in self.classes.iter().enumerate() {
            for &p in class {
                idx[p as usize - 1] = k;
            }
        }
        idx
    }
}

/// Result of the linearity/canonicity check on a MWC list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Canonicity {
    /// Linear and already ordered `1 ⪰ 2 ⪰ ... ⪰ n`.
    Canonical(DesirabilityOrder),
    /// Linear, but needs relabeling: `permutation[p - 1]` is the new
    /// number of old player `p`.
    NotCanonical { permutation: Vec<u8> },
    /// Some pair of players is incomparable.
    NotLinear { players: (u8, u8) },
}

/// Checks whether the monotonic game given by its MWC list is linear, and
/// if so whether it is canonical.
pub fn check_linear_canonical(n: u8, wmin: &[Coalition]) -> Canonicity {
    check_linear_canonical_by(n, |i, j| desirability_compare(wmin, i, j))
}

/// Same check driven by a MLC list.
pub fn check_linear_canonical_lmax(n: u8, lmax: &[Coalition]) -> Canonicity {
    check_linear_canonical_by(n, |i, j| desirability_compare_lmax(lmax, i, j))
}

fn check_linear_canonical_by(
    n: u8,
    compare: impl Fn(u8, u8) -> Desirability,
) -> Canonicity {
    // Fast path: if i ⪰ i+1 holds for every adjacent pair, transitivity
    // makes the game canonical and the classes are consecutive runs.
    let adjacent: Vec<Desirability> = (1..n).map(|i| compare(i, i + 1)).collect();
    if adjacent.iter().all(|d| matches!(d, Desirability::More | Desirability::Equal)) {
        let mut classes = vec![vec![1u8]];
        for (i, d) in adjacent.iter().enumerate() {
            let p = i as u8 + 2;
            match d {
                Desirability::Equal => classes.last_mut().unwrap().push(p),
                _ => classes.push(vec![p]),
            }
        }
        return Canonicity::Canonical(DesirabilityOrder { classes });
    }

    // Slow path: full pairwise matrix to distinguish non-linear from
    // merely non-canonical.
    let mut rel = vec![vec![Desirability::Equal; n as usize + 1]; n as usize + 1];
    for i in 1..=n {
        for j in i + 1..=n {
            match compare(i, j) {
                Desirability::Incomparable => {
                    return Canonicity::NotLinear { players: (i, j) }
                }
                d => {
                    rel[i as usize][j as usize] = d;
                    rel[j as usize][i as usize] = match d {
                        Desirability::More => Desirability::Less,
                        Desirability::Less => Desirability::More,
                        other => other,
                    };
                }
            }
        }
    }
    let mut players: Vec<u8> = (1..=n).collect();
    players.sort_by(|&a, &b| match rel[a as usize][b as usize] {
        Desirability::More => std::cmp::Ordering::Less,
        Desirability::Less => std::cmp::Ordering::Greater,
        _ => a.cmp(&b),
    });
    let mut permutation = vec![0u8; n as usize];
    for (pos, &p) in players.iter().enumerate() {
        permutation[p as usize - 1] = pos as u8 + 1;
    }
    Canonicity::NotCanonical { permutation }
}

/// Filters the minimal members out of a complete winning-coalition listing.
/// Fails when the listing is not closed under supersets.
pub fn mwc_from_w(n: u8, w: &[Coalition]) -> Result<Vec<Coalition>, GameError> {
    let set: HashSet<Coalition> = w.iter().copied().collect();
    for s in &set {
        for p in 1..=n {
            if !s.contains(p) && !set.contains(&s.with(p)) {
                return Err(GameError::NotMonotone { witness: *s });
            }
        }
    }
    let mut out: Vec<Coalition> = set
        .iter()
        .filter(|s| s.members().all(|p| !set.contains(&s.without(p))))
        .copied()
        .collect();
    out.sort();
    Ok(out)
}

/// Maximal losing coalitions straight from a complete winning-coalition
/// listing, without materializing the losing set: every MLC is either `N`
/// or some winning coalition minus one player.
pub fn mlc_from_w(n: u8, w: &[Coalition]) -> Result<Vec<Coalition>, GameError> {
    let set: HashSet<Coalition> = w.iter().copied().collect();
    for s in &set {
        for p in 1..=n {
            if !s.contains(p) && !set.contains(&s.with(p)) {
                return Err(GameError::NotMonotone { witness: *s });
            }
        }
    }
    let mut candidates: HashSet<Coalition> = HashSet::new();
    candidates.insert(Coalition::grand(n));
    for s in &set {
        for p in s.members() {
            candidates.insert(s.without(p));
        }
    }
    let mut out: Vec<Coalition> = candidates
        .into_iter()
        .filter(|s| {
            !set.contains(s) && (1..=n).all(|p| s.contains(p) || set.contains(&s.with(p)))
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Minimal winning coalitions straight from a complete losing-coalition
/// listing: every MWC is either the empty coalition or some losing
/// coalition plus one player.
pub fn mwc_from_l(n: u8, l: &[Coalition]) -> Result<Vec<Coalition>, GameError> {
    let set: HashSet<Coalition> = l.iter().copied().collect();
    for s in &set {
        for p in s.members() {
            if !set.contains(&s.without(p)) {
                return Err(GameError::NotMonotone { witness: *s });
            }
        }
    }
    let mut candidates: HashSet<Coalition> = HashSet::new();
    candidates.insert(Coalition::empty(n));
    for s in &set {
        for p in 1..=n {
            if !s.contains(p) {
                candidates.insert(s.with(p));
            }
        }
    }
    let mut out: Vec<Coalition> = candidates
        .into_iter()
        .filter(|s| !set.contains(s) && s.members().all(|p| set.contains(&s.without(p))))
        .collect();
    out.sort();
    Ok(out)
}

/// Relabels every coalition member through `permutation[old - 1] = new`.
pub fn apply_permutation(list: &[Coalition], permutation: &[u8]) -> Vec<Coalition> {
    let mut out: Vec<Coalition> = list
        .iter()
        .map(|s| {
            let members: Vec<u8> =
                s.members().map(|p| permutation[p as usize - 1]).collect();
            Coalition::from_members(s.n(), &members)
        })
        .collect();
    out.sort();
    out
}

/// Inverse of a player relabeling.
pub fn invert_permutation(permutation: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; permutation.len()];
    for (old, &new) in permutation.iter().enumerate() {
        inv[new as usize - 1] = old as u8 + 1;
    }
    inv
}

/// Filters the maximal members out of a complete losing-coalition listing.
/// Fails when the listing is not closed under subsets.
pub fn mlc_from_l(n: u8, l: &[Coalition]) -> Result<Vec<Coalition>, GameError> {
    let set: HashSet<Coalition> = l.iter().copied().collect();
    for s in &set {
        for p in s.members() {
            if !set.contains(&s.without(p)) {
                return Err(GameError::NotMonotone { witness: *s });
            }
        }
    }
    let mut out: Vec<Coalition> = set
        .iter()
        .filter(|s| (1..=n).all(|p| s.contains(p) || !set.contains(&s.with(p))))
        .copied()
        .collect();
    out.sort();
    Ok(out)
}

/// Roofs of a canonical linear game: the minimal winning coalitions all of
/// whose direct right-shifts are losing.
pub fn roofs_from_mwc(n: u8, wmin: &[Coalition]) -> Result<Vec<Coalition>, GameError> {
    match check_linear_canonical(n, wmin) {
        Canonicity::Canonical(_) => Ok(roofs_from_mwc_unchecked(wmin)),
        Canonicity::NotCanonical { .. } => Err(GameError::NotCanonical),
        Canonicity::NotLinear { players } => Err(GameError::NotLinear { players }),
    }
}

pub(crate) fn roofs_from_mwc_unchecked(wmin: &[Coalition]) -> Vec<Coalition> {
    wmin.iter()
        .filter(|s| s.direct_right_shifts().iter().all(|rs| !wmin_eval(wmin, rs)))
        .copied()
        .collect()
}

/// Ceilings of a canonical linear game: the maximal losing coalitions all
/// of whose direct left-shifts are winning.
pub fn ceilings_from_mlc(n: u8, lmax: &[Coalition]) -> Result<Vec<Coalition>, GameError> {
    match check_linear_canonical_lmax(n, lmax) {
        Canonicity::Canonical(_) => Ok(ceilings_from_mlc_unchecked(lmax)),
        Canonicity::NotCanonical { .. } => Err(GameError::NotCanonical),
        Canonicity::NotLinear { players } => Err(GameError::NotLinear { players }),
    }
}

pub(crate) fn ceilings_from_mlc_unchecked(lmax: &[Coalition]) -> Vec<Coalition> {
    lmax.iter()
        .filter(|s| s.direct_left_shifts().iter().all(|ls| lmax_eval(lmax, ls)))
        .copied()
        .collect()
}

/// The `(k,i)`-encoding coalition on `n = 4i` players: block `j` holds
/// `{4(j-1)+2, 4(j-1)+3}` when the `j`-th most significant of the `i` bits
/// of `k` is 0, and `{4(j-1)+1, 4(j-1)+4}` when it is 1.
pub fn encoding_coalition(k: u64, i: u8) -> Coalition {
    assert!(i >= 1 && 4 * i as u16 <= 64, "need 1 <= i and 4i <= 64");
    assert!(k < 1u64 << i, "k must have at most i bits");
    let n = 4 * i;
    let mut members = Vec::with_capacity(2 * i as usize);
    for j in 1..=i {
        let base = 4 * (j - 1);
        if k >> (i - j) & 1 == 0 {
            members.push(base + 2);
            members.push(base + 3);
        } else {
            members.push(base + 1);
            members.push(base + 4);
        }
    }
    Coalition::from_members(n, &members)
}

/// The `i`-bit roof game on `4i` players, in roof form: one roof per
/// `i`-bit number. Used as a fixture with exponentially more roofs than
/// ceilings.
pub fn ibit_roof_game(i: u8) -> GameRep {
    assert!(i >= 1 && 4 * i as u16 <= 64, "need 1 <= i and 4i <= 64");
    let roofs: Vec<Coalition> = (0..1u64 << i).map(|k| encoding_coalition(k, i)).collect();
    GameRep::roofs(4 * i, roofs).expect("encoding coalitions form an antichain")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("player count must be between 1 and 64, got {0}")]
    BadPlayerCount(usize),
    #[error("coalition width {got} does not match game width {expected}")]
    MixedWidth { expected: u8, got: u8 },
    #[error("list is not an antichain: {a:?} and {b:?} are nested")]
    NotAntichain { a: Coalition, b: Coalition },
    #[error("list of length {len} exceeds the Sperner bound for n = {n}")]
    SpernerBound { len: usize, n: u8 },
    #[error("weights and quota must be nonnegative")]
    NegativeWeight,
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("input listing is not monotone (witness {witness:?})")]
    NotMonotone { witness: Coalition },
    #[error("game is linear but not canonical")]
    NotCanonical,
    #[error("players {players:?} are incomparable; game is not linear")]
    NotLinear { players: (u8, u8) },
    #[error("cannot parse rational number {0:?}")]
    BadRational(String),
    #[error("cannot parse weighted shorthand {0:?}; expected \"q;w1,w2,...\"")]
    BadShorthand(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalition::all_coalitions_sorted;

    fn c(n: u8, members: &[u8]) -> Coalition {
        Coalition::from_members(n, members)
    }

    fn game_4_3221() -> WeightVector {
        WeightVector::from_integers(4, &[3, 2, 2, 1]).unwrap()
    }

    /// MWCs of [4; 3,2,2,1], as used throughout the examples.
    fn wmin_4_3221() -> Vec<Coalition> {
        vec![c(4, &[1, 2]), c(4, &[1, 3]), c(4, &[1, 4]), c(4, &[2, 3])]
    }

    #[test]
    fn eval_examples() {
        let g = GameRep::weighted(game_4_3221());
        assert!(g.eval(&c(4, &[2, 3])));
        assert!(!g.eval(&c(4, &[4])));
        let dictator = GameRep::minimal_winning(3, vec![c(3, &[1])]).unwrap();
        assert!(!dictator.eval(&c(3, &[2, 3])));
    }

    #[test]
    fn wmin_of_shorthand_matches_brute_force() {
        // Oracle: filter all 2^4 evaluations of [4;3,2,2,1] down to the
        // minimal winning ones.
        let w = game_4_3221();
        let mut expect = Vec::new();
        for s in all_coalitions_sorted(4) {
            if w.is_winning(&s) && s.members().all(|p| !w.is_winning(&s.without(p))) {
                expect.push(s);
            }
        }
        let mut got = wmin_4_3221();
        got.sort();
        assert_eq!(got, expect);
    }

    /// Full-definition desirability oracle: compare v(S ∪ {i}) with
    /// v(S ∪ {j}) over every S ⊆ N \ {i,j}.
    fn desirability_oracle(
        game: &GameRep,
        i: u8,
        j: u8,
    ) -> Desirability {
        let n = game.n();
        let mut ge = true;
        let mut le = true;
        for s in all_coalitions_sorted(n) {
            if s.contains(i) || s.contains(j) {
                continue;
            }
            let vi = game.eval(&s.with(i));
            let vj = game.eval(&s.with(j));
            if vi < vj {
                ge = false;
            }
            if vi > vj {
                le = false;
            }
        }
        match (ge, le) {
            (true, true) => Desirability::Equal,
            (true, false) => Desirability::More,
            (false, true) => Desirability::Less,
            (false, false) => Desirability::Incomparable,
        }
    }

    #[test]
    fn desirability_examples() {
        let wmin = wmin_4_3221();
        assert_eq!(desirability_compare(&wmin, 2, 3), Desirability::Equal);
        assert_eq!(desirability_compare(&wmin, 1, 4), Desirability::More);
        assert_eq!(desirability_compare(&wmin, 3, 3), Desirability::Equal);
    }

    #[test]
    fn desirability_matches_oracle_on_all_small_wmin_games() {
        // Every antichain over 2^{1..4} is a monotonic game; the swap test
        // must agree with the definition on each of them.
        for n in 1..=4u8 {
            for wmin in crate::enumeration::enumerate_antichains(n).unwrap() {
                let game = GameRep::minimal_winning(n, wmin.clone()).unwrap();
                for i in 1..=n {
                    for j in 1..=n {
                        assert_eq!(
                            desirability_compare(&wmin, i, j),
                            desirability_oracle(&game, i, j),
                            "n={n} wmin={wmin:?} i={i} j={j}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn lmax_desirability_agrees_with_wmin_desirability() {
        for n in 1..=4u8 {
            for wmin in crate::enumeration::enumerate_antichains(n).unwrap() {
                let game = GameRep::minimal_winning(n, wmin.clone()).unwrap();
                let losing: Vec<Coalition> = all_coalitions_sorted(n)
                    .into_iter()
                    .filter(|s| !game.eval(s))
                    .collect();
                let lmax = mlc_from_l(n, &losing).unwrap();
                for i in 1..=n {
                    for j in 1..=n {
                        assert_eq!(
                            desirability_compare_lmax(&lmax, i, j),
                            desirability_compare(&wmin, i, j),
                            "n={n} wmin={wmin:?} i={i} j={j}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn canonicity_examples() {
        let wmin = vec![c(4, &[1, 2]), c(4, &[1, 3]), c(4, &[2, 3]), c(4, &[1, 4])];
        match check_linear_canonical(4, &wmin) {
            Canonicity::Canonical(order) => {
                assert_eq!(order.classes(), &[vec![1], vec![2, 3], vec![4]]);
            }
            other => panic!("expected canonical, got {other:?}"),
        }

        let split = vec![c(4, &[1, 2]), c(4, &[3, 4])];
        match check_linear_canonical(4, &split) {
            Canonicity::NotLinear { players } => assert_eq!(players, (1, 3)),
            other => panic!("expected not linear, got {other:?}"),
        }

        match check_linear_canonical(4, &[]) {
            Canonicity::Canonical(order) => {
                assert_eq!(order.classes(), &[vec![1, 2, 3, 4]]);
            }
            other => panic!("expected canonical, got {other:?}"),
        }
    }

    #[test]
    fn non_canonical_permutation_round_trips() {
        // Reversed dictator: player 3 rules. Permutation must relabel the
        // game into a canonical one.
        let wmin = vec![c(3, &[3])];
        match check_linear_canonical(3, &wmin) {
            Canonicity::NotCanonical { permutation } => {
                let relabeled: Vec<Coalition> = wmin
                    .iter()
                    .map(|s| {
                        let members: Vec<u8> =
                            s.members().map(|p| permutation[p as usize - 1]).collect();
                        Coalition::from_members(3, &members)
                    })
                    .collect();
                assert!(matches!(
                    check_linear_canonical(3, &relabeled),
                    Canonicity::Canonical(_)
                ));
            }
            other => panic!("expected not canonical, got {other:?}"),
        }
    }

    #[test]
    fn mwc_from_w_examples() {
        let n = 3;
        let w: Vec<Coalition> = all_coalitions_sorted(n)
            .into_iter()
            .filter(|s| s.contains(1))
            .collect();
        assert_eq!(mwc_from_w(n, &w).unwrap(), vec![c(3, &[1])]);

        assert_eq!(
            mlc_from_l(1, &[Coalition::empty(1)]).unwrap(),
            vec![Coalition::empty(1)]
        );

        let two_of_three = WeightVector::from_integers(2, &[1, 1, 1]).unwrap();
        let w: Vec<Coalition> = all_coalitions_sorted(3)
            .into_iter()
            .filter(|s| two_of_three.is_winning(s))
            .collect();
        assert_eq!(
            mwc_from_w(3, &w).unwrap(),
            vec![c(3, &[1, 2]), c(3, &[1, 3]), c(3, &[2, 3])]
        );

        // Dropping a superset breaks monotone closure.
        let mut broken = w;
        broken.retain(|s| *s != Coalition::grand(3));
        assert!(matches!(
            mwc_from_w(3, &broken),
            Err(GameError::NotMonotone { .. })
        ));
    }

    #[test]
    fn w_and_l_listings_to_max_min_forms() {
        // Checked against the definitional filters on both sides.
        let reference = game_4_3221();
        let winning: Vec<Coalition> = all_coalitions_sorted(4)
            .into_iter()
            .filter(|s| reference.is_winning(s))
            .collect();
        let losing: Vec<Coalition> = all_coalitions_sorted(4)
            .into_iter()
            .filter(|s| !reference.is_winning(s))
            .collect();
        assert_eq!(mlc_from_w(4, &winning).unwrap(), mlc_from_l(4, &losing).unwrap());
        assert_eq!(mwc_from_l(4, &losing).unwrap(), mwc_from_w(4, &winning).unwrap());
        assert_eq!(
            mlc_from_w(4, &winning).unwrap(),
            vec![c(4, &[1]), c(4, &[2, 4]), c(4, &[3, 4])]
        );
    }

    #[test]
    fn permutation_helpers_round_trip() {
        let perm = vec![3u8, 1, 2];
        let list = vec![c(3, &[1, 2]), c(3, &[3])];
        let relabeled = apply_permutation(&list, &perm);
        assert_eq!(relabeled, vec![c(3, &[1, 3]), c(3, &[2])]);
        let back = apply_permutation(&relabeled, &invert_permutation(&perm));
        assert_eq!(back, list);
    }

    #[test]
    fn roof_and_ceiling_filter_examples() {
        let wmin = wmin_4_3221();
        assert_eq!(
            roofs_from_mwc(4, &wmin).unwrap(),
            vec![c(4, &[1, 4]), c(4, &[2, 3])]
        );
        // MLCs of [4;3,2,2,1] are {1},{2,4},{3,4}; {3,4} has the losing
        // direct left-shift {2,4}.
        let lmax = vec![c(4, &[1]), c(4, &[2, 4]), c(4, &[3, 4])];
        assert_eq!(
            ceilings_from_mlc(4, &lmax).unwrap(),
            vec![c(4, &[1]), c(4, &[2, 4])]
        );
        assert_eq!(roofs_from_mwc(4, &[]).unwrap(), Vec::<Coalition>::new());
    }

    #[test]
    fn encoding_coalition_examples() {
        assert_eq!(encoding_coalition(2, 2), c(8, &[1, 4, 6, 7]));
        assert_eq!(encoding_coalition(5, 3), c(12, &[1, 4, 6, 7, 9, 12]));
    }

    #[test]
    fn two_bit_game_roofs() {
        let g = ibit_roof_game(2);
        let mut expect = vec![
            c(8, &[2, 3, 6, 7]),
            c(8, &[2, 3, 5, 8]),
            c(8, &[1, 4, 6, 7]),
            c(8, &[1, 4, 5, 8]),
        ];
        expect.sort();
        assert_eq!(g.list().unwrap(), &expect[..]);
        // No roof is a left-shift of another, so the family is well formed.
        let roofs = g.list().unwrap();
        for a in roofs {
            for b in roofs {
                assert!(a == b || !a.is_left_shift_of(b) || !b.is_left_shift_of(a));
            }
        }
    }

    #[test]
    fn weight_vector_shorthand() {
        let w = WeightVector::parse_shorthand("4;3,2,2,1").unwrap();
        assert_eq!(w, game_4_3221());
        let w = WeightVector::parse_shorthand("1/2; 1/4, 1/4").unwrap();
        assert_eq!(w.to_string(), "[1/2; 1/4, 1/4]");
        assert!(WeightVector::parse_shorthand("nope").is_err());
        assert!(WeightVector::parse_shorthand("1;-1,2").is_err());
    }

    #[test]
    fn sperner_bound_values() {
        assert_eq!(sperner_bound(1), 1);
        assert_eq!(sperner_bound(4), 6);
        assert_eq!(sperner_bound(7), 35);
        assert_eq!(sperner_bound(8), 70);
    }
}
