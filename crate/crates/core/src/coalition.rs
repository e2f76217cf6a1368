//! Bit-level coalitions over players `1..=n` and the coalition operations
//! used throughout the crate: positional representations, the PR-lexi
//! order, fill-ups, shifts, truncations and successors.
//!
//! A coalition is stored as one machine word: bit `i - 1` is set exactly
//! when player `i` is a member, so `n` is capped at 64. The textual form
//! is a bitstring whose *leftmost* character is player 1 (`"1100"` is
//! `{1,2}` at `n = 4`).

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Maximum number of players a coalition can hold.
pub const MAX_PLAYERS: u8 = 64;

/// A coalition of players drawn from `{1, ..., n}`, `1 <= n <= 64`.
///
/// `Ord` is the PR-lexi order (coalitions of different `n` sort by `n`
/// first, but mixing widths is a caller bug).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coalition {
    bits: u64,
    n: u8,
}

/// Positional representation of a coalition: entry `i - 1` holds the
/// `i`-th smallest member, or 0 once the members run out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionalRep(pub Vec<u8>);

impl PositionalRep {
    /// Plain lexicographic comparison of the underlying vectors. This is
    /// the defining route for the PR-lexi order; `Coalition::cmp` is the
    /// word-level shortcut checked against it in tests.
    pub fn lexi_cmp(&self, other: &PositionalRep) -> Ordering {
        self.0.cmp(&other.0)
    }
}

#[inline]
fn mask(n: u8) -> u64 {
    debug_assert!(n >= 1 && n <= MAX_PLAYERS);
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Coalition {
    /// The empty coalition on `n` players.
    pub fn empty(n: u8) -> Self {
        assert!(n >= 1 && n <= MAX_PLAYERS, "player count must be in 1..=64");
        Coalition { bits: 0, n }
    }

    /// The grand coalition `{1, ..., n}`.
    pub fn grand(n: u8) -> Self {
        assert!(n >= 1 && n <= MAX_PLAYERS, "player count must be in 1..=64");
        Coalition { bits: mask(n), n }
    }

    /// Builds a coalition from raw bits (bit `i - 1` = player `i`).
    /// Bits beyond position `n` must be zero.
    pub fn from_bits(n: u8, bits: u64) -> Self {
        assert!(n >= 1 && n <= MAX_PLAYERS, "player count must be in 1..=64");
        assert_eq!(bits & !mask(n), 0, "bits beyond player {n} must be zero");
        Coalition { bits, n }
    }

    /// Builds a coalition from a member list.
    pub fn from_members(n: u8, members: &[u8]) -> Self {
        let mut bits = 0u64;
        for &p in members {
            assert!(p >= 1 && p <= n, "player {p} out of range 1..={n}");
            bits |= 1u64 << (p - 1);
        }
        Coalition::from_bits(n, bits)
    }

    /// Parses the bitstring form, leftmost character = player 1.
    pub fn parse(text: &str) -> Result<Self, CoalitionParseError> {
        let n = text.len();
        if n == 0 || n > MAX_PLAYERS as usize {
            return Err(CoalitionParseError::BadLength(n));
        }
        let mut bits = 0u64;
        for (idx, ch) in text.chars().enumerate() {
            match ch {
                '1' => bits |= 1u64 << idx,
                '0' => {}
                other => return Err(CoalitionParseError::BadChar(other)),
            }
        }
        Ok(Coalition { bits, n: n as u8 })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Number of members, `|S|`.
    pub fn cardinality(&self) -> u8 {
        self.bits.count_ones() as u8
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_grand(&self) -> bool {
        self.bits == mask(self.n)
    }

    pub fn contains(&self, player: u8) -> bool {
        player >= 1 && player <= self.n && self.bits >> (player - 1) & 1 == 1
    }

    pub fn with(&self, player: u8) -> Self {
        debug_assert!(player >= 1 && player <= self.n);
        Coalition { bits: self.bits | 1u64 << (player - 1), n: self.n }
    }

    pub fn without(&self, player: u8) -> Self {
        debug_assert!(player >= 1 && player <= self.n);
        Coalition { bits: self.bits & !(1u64 << (player - 1)), n: self.n }
    }

    pub fn is_subset_of(&self, other: &Coalition) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.bits & !other.bits == 0
    }

    pub fn is_superset_of(&self, other: &Coalition) -> bool {
        other.is_subset_of(self)
    }

    /// `N \ S`.
    pub fn complement(&self) -> Self {
        Coalition { bits: !self.bits & mask(self.n), n: self.n }
    }

    /// `{n+1-i : i ∉ S}`: complement, then reverse the player numbering.
    /// An involution that exchanges the roles of winning and losing sets
    /// between a game and its reflected game.
    pub fn reflected_complement(&self) -> Self {
        let comp = !self.bits & mask(self.n);
        Coalition { bits: comp.reverse_bits() >> (64 - self.n as u32), n: self.n }
    }

    /// Members in ascending player order.
    pub fn members(&self) -> impl Iterator<Item = u8> + '_ {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let p = rest.trailing_zeros() as u8 + 1;
                rest &= rest - 1;
                Some(p)
            }
        })
    }

    /// The characteristic vector `(chi(1,S), ..., chi(n,S))`.
    pub fn characteristic_vector(&self) -> Vec<u8> {
        (1..=self.n).map(|p| u8::from(self.contains(p))).collect()
    }

    /// The positional representation `(p'(1,S), ..., p'(n,S))`.
    pub fn positional_rep(&self) -> PositionalRep {
        let mut v = vec![0u8; self.n as usize];
        for (slot, p) in self.members().enumerate() {
            v[slot] = p;
        }
        PositionalRep(v)
    }

    /// `b(S)`: the largest member, or `None` for the empty coalition.
    pub fn highest_member(&self) -> Option<u8> {
        if self.bits == 0 {
            None
        } else {
            Some(64 - self.bits.leading_zeros() as u8)
        }
    }

    /// `a(S)`: the largest `j` with `j` absent and `j + 1` present; 0 when
    /// no such `j` exists.
    pub fn highest_gap(&self) -> u8 {
        // j absent, j+1 present  <=>  bit j set in (bits >> 1) & !bits.
        let gaps = (self.bits >> 1) & !self.bits;
        if gaps == 0 {
            0
        } else {
            64 - gaps.leading_zeros() as u8
        }
    }

    /// Fill-up: `S ∪ {b(S) + 1}`. `None` when the player to add does not
    /// exist, i.e. when `b(S) = n` (which covers `S = N`).
    pub fn fill_up(&self) -> Option<Self> {
        let b = self.highest_member().unwrap_or(0);
        if b == self.n {
            return None;
        }
        Some(self.with(b + 1))
    }

    /// Bottom right-shift: `S ∪ {b(S) + 1} \ {b(S)}`. `None` when `S` is
    /// empty or `b(S) = n`.
    pub fn bottom_right_shift(&self) -> Option<Self> {
        let b = self.highest_member()?;
        if b == self.n {
            return None;
        }
        Some(self.without(b).with(b + 1))
    }

    /// Truncation: `S \ {a(S) + 1, ..., n}` (drops the trailing run).
    pub fn truncation(&self) -> Self {
        let a = self.highest_gap();
        let keep = if a == 0 { 0 } else { mask(a) };
        Coalition { bits: self.bits & keep, n: self.n }
    }

    /// Immediate successor in the PR-lexi order. `None` for the greatest
    /// coalition `{n}`.
    pub fn immediate_successor(&self) -> Option<Self> {
        if self.contains(self.n) {
            self.without(self.n).bottom_right_shift()
        } else {
            self.fill_up()
        }
    }

    /// `i`-th right-truncation: the `i` highest-numbered members removed.
    /// `None` when `i > |S|`.
    pub fn right_truncation(&self, i: u8) -> Option<Self> {
        if i > self.cardinality() {
            return None;
        }
        let mut out = *self;
        for _ in 0..i {
            let b = out.highest_member().expect("cardinality checked");
            out = out.without(b);
        }
        Some(out)
    }

    /// All coalitions one direct left-shift away: some member `i` moves to
    /// the free seat `i - 1`.
    pub fn direct_left_shifts(&self) -> Vec<Coalition> {
        let mut out = Vec::new();
        for i in self.members() {
            if i >= 2 && !self.contains(i - 1) {
                out.push(self.without(i).with(i - 1));
            }
        }
        out
    }

    /// All coalitions one direct right-shift away: some member `i` moves to
    /// the free seat `i + 1`.
    pub fn direct_right_shifts(&self) -> Vec<Coalition> {
        let mut out = Vec::new();
        for i in self.members() {
            if i < self.n && !self.contains(i + 1) {
                out.push(self.without(i).with(i + 1));
            }
        }
        out
    }

    /// Reflexive left-shift test: same cardinality and the `j`-th smallest
    /// member of `self` is `<=` the `j`-th smallest member of `other` for
    /// every `j`. Equivalent to reachability by direct left-shifts.
    pub fn is_left_shift_of(&self, other: &Coalition) -> bool {
        debug_assert_eq!(self.n, other.n);
        if self.cardinality() != other.cardinality() {
            return false;
        }
        self.members().zip(other.members()).all(|(s, o)| s <= o)
    }

    /// Proper variant: excludes `other` itself.
    pub fn is_proper_left_shift_of(&self, other: &Coalition) -> bool {
        self != other && self.is_left_shift_of(other)
    }

    /// Whether `self` contains a (possibly improper) left-shift of `roof`,
    /// i.e. whether `self` wins in a canonical linear game with that roof.
    pub fn contains_left_shift_of(&self, roof: &Coalition) -> bool {
        debug_assert_eq!(self.n, roof.n);
        if self.cardinality() < roof.cardinality() {
            return false;
        }
        // The |roof| smallest members of self are the componentwise-least
        // candidate subset.
        self.members().zip(roof.members()).all(|(s, r)| s <= r)
    }

    /// Whether `self` is a subset of a (possibly improper) right-shift of
    /// `ceiling`, i.e. whether `self` loses in a canonical linear game with
    /// that ceiling. Complementation turns this into the roof test.
    pub fn within_right_shift_of(&self, ceiling: &Coalition) -> bool {
        self.complement().contains_left_shift_of(&ceiling.complement())
    }
}

/// PR-lexi comparison without materializing positional representations.
///
/// Let `d` be the smallest player on which the two coalitions differ, say
/// `d ∈ S`. The member lists agree below `d`; `S`'s next entry is `d`,
/// while `T`'s next entry is either a larger player (then `S < T`) or
/// nothing at all (then `T` is a strict prefix of `S`, so `T < S`).
impl Ord for Coalition {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.n, other.n, "comparing coalitions of different width");
        if self.n != other.n {
            return self.n.cmp(&other.n);
        }
        if self.bits == other.bits {
            return Ordering::Equal;
        }
        let d = (self.bits ^ other.bits).trailing_zeros();
        let above = (!0u64).checked_shl(d + 1).unwrap_or(0);
        if self.bits >> d & 1 == 1 {
            if other.bits & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.bits & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The [OP]-style comparison entry point; same as `S.cmp(&T)`.
pub fn pr_lexi_compare(s: &Coalition, t: &Coalition) -> Ordering {
    s.cmp(t)
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.n {
            f.write_str(if self.contains(p) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.members().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}@{}", self.n)
    }
}

impl Serialize for Coalition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coalition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Coalition::parse(&text).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoalitionParseError {
    #[error("coalition bitstring must have between 1 and 64 characters, got {0}")]
    BadLength(usize),
    #[error("coalition bitstring may contain only '0' and '1', got {0:?}")]
    BadChar(char),
}

/// All `2^n` coalitions in ascending PR-lexi order (test and oracle use).
pub fn all_coalitions_sorted(n: u8) -> Vec<Coalition> {
    let mut all: Vec<Coalition> =
        (0..=mask(n)).map(|bits| Coalition::from_bits(n, bits)).collect();
    all.sort();
    all
}
