//! Any-to-any representation conversion with the complexity policy:
//! polynomial routes run unconditionally, conversions with exponential
//! output blow-up require `--allow-exponential`, and the routes with
//! unknown complexity are gated the same way.

use serde::Serialize;
use thiserror::Error;

use wvg_core::coalition::Coalition;
use wvg_core::game::{
    self, check_linear_canonical, check_linear_canonical_lmax, mlc_from_l, mlc_from_w,
    mwc_from_l, mwc_from_w, Canonicity, GameError, GameRep, Tag,
};
use wvg_core::synthesis::{self, lmax_from_wmin, synth_weights, wmin_from_lmax};

/// Brute-force reconstruction walks all 2^n coalitions; refuse past this.
const BRUTE_FORCE_CAP: u8 = 20;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Route {
    Identity,
    Poly,
    /// Polynomial for linear games, exponential otherwise.
    PolyIfLinear,
    /// Output can be exponentially larger than the input.
    Exponential,
    /// No polynomial algorithm is known either way.
    Unknown,
}

/// The complexity table over (input, output) representation languages.
pub fn classify(from: Tag, to: Tag) -> Route {
    use Tag::*;
    if from == to {
        return Route::Identity;
    }
    match (from, to) {
        (W, L) | (L, W) => Route::Exponential,
        (W, _) | (L, _) => Route::Poly,
        (Wmin, Lmax) | (Lmax, Wmin) => Route::PolyIfLinear,
        (Wmin, Roof) | (Wmin, Ceil) | (Wmin, Weights) => Route::Poly,
        (Lmax, Roof) | (Lmax, Ceil) | (Lmax, Weights) => Route::Poly,
        (Wmin, _) | (Lmax, _) => Route::Exponential,
        (Roof, Weights) | (Ceil, Weights) | (Weights, Ceil) => Route::Unknown,
        (Roof, _) | (Ceil, _) | (Weights, _) => Route::Exponential,
    }
}

/// Structured conversion outcome; everything but `Game` is a domain
/// failure the caller reports without crashing.
#[derive(Clone, Debug)]
pub enum Outcome {
    Game(GameRep),
    NotWeighted,
    NotLinear { players: (u8, u8) },
    NotCanonical { permutation: Vec<u8> },
}

#[derive(Serialize)]
struct OutcomeJson<'a> {
    result: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    game: Option<wvg_core::encoding::GameJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    players: Option<(u8, u8)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    permutation: Option<Vec<u8>>,
}

impl Outcome {
    pub fn to_json_line(&self) -> String {
        let json = match self {
            Outcome::Game(game) => OutcomeJson {
                result: "ok",
                game: Some(wvg_core::encoding::game_to_json(game)),
                players: None,
                permutation: None,
            },
            Outcome::NotWeighted => OutcomeJson {
                result: "not_weighted",
                game: None,
                players: None,
                permutation: None,
            },
            Outcome::NotLinear { players } => OutcomeJson {
                result: "not_linear",
                game: None,
                players: Some(*players),
                permutation: None,
            },
            Outcome::NotCanonical { permutation } => OutcomeJson {
                result: "not_canonical",
                game: None,
                players: None,
                permutation: Some(permutation.clone()),
            },
        };
        serde_json::to_string(&json).expect("static shape")
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, Outcome::Game(_))
    }
}

#[derive(Debug, Error)]
pub enum ConvertError {
    #[error("conversion {from} -> {to} can blow up exponentially; pass --allow-exponential to run it anyway")]
    NeedsFlag { from: Tag, to: Tag },
    #[error("conversion {from} -> {to} is polynomial only for linear games and this input is not linear (players {players:?} are incomparable); pass --allow-exponential to brute-force it")]
    NeedsFlagNotLinear { from: Tag, to: Tag, players: (u8, u8) },
    #[error("the target language must be one of wmin, lmax, roof, ceil, weights")]
    BadTarget,
    #[error("brute-force reconstruction over 2^n coalitions is capped at n = {cap}, got n = {n}")]
    BruteForceCap { n: u8, cap: u8 },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Synthesis(#[from] synthesis::SynthesisError),
}

/// Minimal winning coalitions by full 2^n evaluation of any game form.
fn brute_force_wmin(game: &GameRep) -> Result<Vec<Coalition>, ConvertError> {
    let n = game.n();
    if n > BRUTE_FORCE_CAP {
        return Err(ConvertError::BruteForceCap { n, cap: BRUTE_FORCE_CAP });
    }
    let mut out = Vec::new();
    for bits in 0..1u64 << n {
        let s = Coalition::from_bits(n, bits);
        if game.eval(&s) && s.members().all(|p| !game.eval(&s.without(p))) {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

/// Weighted synthesis via the four-step pipeline (canonicity check,
/// shelters, Hop-Skip-and-Jump, margin LP), relabeling players in and out
/// of canonical form when necessary.
fn to_weights(n: u8, wmin: &[Coalition]) -> Result<Outcome, ConvertError> {
    match check_linear_canonical(n, wmin) {
        Canonicity::NotLinear { .. } => Ok(Outcome::NotWeighted),
        Canonicity::NotCanonical { permutation } => {
            let relabeled = game::apply_permutation(wmin, &permutation);
            match to_weights(n, &relabeled)? {
                Outcome::Game(GameRep::Weighted(canonical)) => {
                    let weights: Vec<_> = (1..=n)
                        .map(|p| {
                            canonical.weights()[permutation[p as usize - 1] as usize - 1]
                                .clone()
                        })
                        .collect();
                    let restored =
                        wvg_core::WeightVector::new(canonical.quota().clone(), weights)?;
                    Ok(Outcome::Game(GameRep::weighted(restored)))
                }
                other => Ok(other),
            }
        }
        Canonicity::Canonical(_) => {
            if wmin.is_empty() || wmin.iter().any(|s| s.is_empty()) {
                // Degenerate games have fixed forms.
                return Ok(Outcome::Game(GameRep::weighted(synth_weights(n, wmin, &[])?)));
            }
            let lmax = synthesis::hop_skip_jump(n, &synthesis::shelters(n, wmin));
            match synth_weights(n, wmin, &lmax) {
                Ok(w) => Ok(Outcome::Game(GameRep::weighted(w))),
                Err(synthesis::SynthesisError::NotWeighted) => Ok(Outcome::NotWeighted),
            }
        }
    }
}

pub fn convert(
    game: &GameRep,
    to: Tag,
    allow_exponential: bool,
) -> Result<Outcome, ConvertError> {
    if matches!(to, Tag::W | Tag::L) {
        return Err(ConvertError::BadTarget);
    }
    let from = game.tag();
    match classify(from, to) {
        Route::Identity => return Ok(Outcome::Game(game.clone())),
        Route::Poly | Route::PolyIfLinear => {}
        Route::Exponential | Route::Unknown => {
            if !allow_exponential {
                return Err(ConvertError::NeedsFlag { from, to });
            }
        }
    }
    let n = game.n();

    // Direct polynomial filters that skip the Wmin detour.
    match (game, to) {
        (GameRep::Winning { list, .. }, Tag::Lmax) => {
            return Ok(Outcome::Game(GameRep::maximal_losing(n, mlc_from_w(n, list)?)?));
        }
        (GameRep::Losing { list, .. }, Tag::Lmax) => {
            return Ok(Outcome::Game(GameRep::maximal_losing(n, mlc_from_l(n, list)?)?));
        }
        (GameRep::MaximalLosing { list, .. }, Tag::Ceil) => {
            return match check_linear_canonical_lmax(n, list) {
                Canonicity::Canonical(_) => Ok(Outcome::Game(GameRep::ceilings(
                    n,
                    game::ceilings_from_mlc(n, list)?,
                )?)),
                Canonicity::NotCanonical { permutation } => {
                    Ok(Outcome::NotCanonical { permutation })
                }
                Canonicity::NotLinear { players } => Ok(Outcome::NotLinear { players }),
            };
        }
        (GameRep::MinimalWinning { list, .. }, Tag::Lmax) => {
            return match lmax_from_wmin(n, list) {
                Ok(lmax) => Ok(Outcome::Game(GameRep::maximal_losing(n, lmax)?)),
                Err(GameError::NotLinear { players }) => {
                    if !allow_exponential {
                        return Err(ConvertError::NeedsFlagNotLinear { from, to, players });
                    }
                    if n > BRUTE_FORCE_CAP {
                        return Err(ConvertError::BruteForceCap { n, cap: BRUTE_FORCE_CAP });
                    }
                    let losing: Vec<Coalition> = (0..1u64 << n)
                        .map(|bits| Coalition::from_bits(n, bits))
                        .filter(|s| !game.eval(s))
                        .collect();
                    Ok(Outcome::Game(GameRep::maximal_losing(n, mlc_from_l(n, &losing)?)?))
                }
                Err(other) => Err(other.into()),
            };
        }
        _ => {}
    }

    // Everything else goes through a minimal-winning list.
    let wmin = match game {
        GameRep::MinimalWinning { list, .. } => list.clone(),
        GameRep::Winning { list, .. } => mwc_from_w(n, list)?,
        GameRep::Losing { list, .. } => mwc_from_l(n, list)?,
        GameRep::MaximalLosing { list, .. } => match wmin_from_lmax(n, list) {
            Ok(wmin) => wmin,
            Err(GameError::NotLinear { players }) => {
                if !allow_exponential {
                    return Err(ConvertError::NeedsFlagNotLinear { from, to, players });
                }
                brute_force_wmin(game)?
            }
            Err(other) => return Err(other.into()),
        },
        GameRep::Roofs { .. } | GameRep::Ceilings { .. } | GameRep::Weighted(_) => {
            brute_force_wmin(game)?
        }
    };

    match to {
        Tag::Wmin => Ok(Outcome::Game(GameRep::minimal_winning(n, wmin)?)),
        Tag::Lmax => match lmax_from_wmin(n, &wmin) {
            Ok(lmax) => Ok(Outcome::Game(GameRep::maximal_losing(n, lmax)?)),
            Err(GameError::NotLinear { players }) => Ok(Outcome::NotLinear { players }),
            Err(other) => Err(other.into()),
        },
        Tag::Roof => match check_linear_canonical(n, &wmin) {
            Canonicity::Canonical(_) => {
                Ok(Outcome::Game(GameRep::roofs(n, game::roofs_from_mwc(n, &wmin)?)?))
            }
            Canonicity::NotCanonical { permutation } => {
                Ok(Outcome::NotCanonical { permutation })
            }
            Canonicity::NotLinear { players } => Ok(Outcome::NotLinear { players }),
        },
        Tag::Ceil => match check_linear_canonical(n, &wmin) {
            Canonicity::Canonical(_) => Ok(Outcome::Game(GameRep::ceilings(
                n,
                synthesis::ceilings_from_mwc(n, &wmin)?,
            )?)),
            Canonicity::NotCanonical { permutation } => {
                Ok(Outcome::NotCanonical { permutation })
            }
            Canonicity::NotLinear { players } => Ok(Outcome::NotLinear { players }),
        },
        Tag::Weights => to_weights(n, &wmin),
        Tag::W | Tag::L => Err(ConvertError::BadTarget),
    }
}
