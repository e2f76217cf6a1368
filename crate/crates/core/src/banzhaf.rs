//! Raw and normalized Banzhaf indices by exhaustive swing counting, plus
//! the Euclidean error against a target index.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::coalition::Coalition;
use crate::game::GameRep;

/// Exact Banzhaf index of a monotonic simple game. `raw[i-1]` counts the
/// coalitions `S ⊆ N \ {i}` that lose without player `i` and win with it;
/// `normalized` divides by the total swing count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BanzhafIndex {
    pub raw: Vec<u64>,
    pub normalized: Vec<BigRational>,
    /// True for the two games with no swings at all (all-winning and
    /// all-losing); `normalized` is then the uniform vector by convention.
    pub degenerate: bool,
}

impl BanzhafIndex {
    pub fn n(&self) -> u8 {
        self.raw.len() as u8
    }

    pub fn normalized_f64(&self) -> Vec<f64> {
        self.normalized.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BanzhafError {
    #[error("swing counting sweeps all 2^n coalitions; n = {0} is past the n <= 30 cap")]
    TooManyPlayers(u8),
}

/// Packed winning bitmap over all `2^n` coalitions of a game.
fn winning_bitmap(game: &GameRep) -> Vec<u64> {
    let n = game.n();
    let total: u64 = 1u64 << n;
    let mut bitmap = vec![0u64; total.div_ceil(64) as usize];
    for bits in 0..total {
        let coalition = Coalition::from_bits(n, bits);
        if game.eval(&coalition) {
            bitmap[(bits / 64) as usize] |= 1u64 << (bits % 64);
        }
    }
    bitmap
}

#[inline]
fn wins(bitmap: &[u64], bits: u64) -> bool {
    bitmap[(bits / 64) as usize] >> (bits % 64) & 1 == 1
}

/// Computes the Banzhaf index with a single pass over all `2^n`
/// coalitions.
pub fn banzhaf(game: &GameRep) -> Result<BanzhafIndex, BanzhafError> {
    let n = game.n();
    if n > 30 {
        return Err(BanzhafError::TooManyPlayers(n));
    }
    let bitmap = winning_bitmap(game);
    let mut raw = vec![0u64; n as usize];
    for bits in 0..1u64 << n {
        if !wins(&bitmap, bits) {
            continue;
        }
        for i in 0..n {
            let without = bits & !(1u64 << i);
            if without != bits && !wins(&bitmap, without) {
                raw[i as usize] += 1;
            }
        }
    }
    let total: u64 = raw.iter().sum();
    let (normalized, degenerate) = if total == 0 {
        let share = BigRational::new(BigInt::from(1), BigInt::from(n));
        (vec![share; n as usize], true)
    } else {
        let denom = BigInt::from(total);
        (
            raw.iter()
                .map(|&r| BigRational::new(BigInt::from(r), denom.clone()))
                .collect(),
            false,
        )
    };
    Ok(BanzhafIndex { raw, normalized, degenerate })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("index has {index} entries but target has {target}")]
pub struct LengthMismatch {
    pub index: usize,
    pub target: usize,
}

/// Euclidean distance between a power index and a target vector. Floating
/// point is fine here: the value is for reporting and comparison only and
/// never feeds a weightedness decision.
pub fn euclidean_error(index: &[BigRational], target: &[f64]) -> Result<f64, LengthMismatch> {
    if index.len() != target.len() {
        return Err(LengthMismatch { index: index.len(), target: target.len() });
    }
    let sum: f64 = index
        .iter()
        .zip(target)
        .map(|(x, t)| {
            let d = x.to_f64().unwrap_or(f64::NAN) - t;
            d * d
        })
        .sum();
    Ok(sum.sqrt())
}

/// Euclidean distance between two plain vectors.
pub fn euclidean_error_f64(index: &[f64], target: &[f64]) -> Result<f64, LengthMismatch> {
    if index.len() != target.len() {
        return Err(LengthMismatch { index: index.len(), target: target.len() });
    }
    let sum: f64 = index.iter().zip(target).map(|(x, t)| (x - t) * (x - t)).sum();
    Ok(sum.sqrt())
}
