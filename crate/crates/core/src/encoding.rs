//! JSON wire formats: the game-file schema, the enumeration JSONL stream,
//! and target-vector parsing. Coalitions travel as bitstrings (leftmost
//! character is player 1) and rationals as exact `p/q` strings.

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::game::{parse_rational, rational_to_string, GameRep, Tag, WeightVector};

/// File form of a [`GameRep`]:
/// `{"n": 4, "tag": "wmin", "coalitions": ["1100", ...]}` for list forms,
/// `{"n": 4, "tag": "weights", "q": "4", "w": ["3","2","2","1"]}` for the
/// weighted form. A maximal-losing listing always carries `all_winning`,
/// making the empty-list case explicit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameJson {
    pub n: u8,
    pub tag: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coalitions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_winning: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EncodeError {
    #[error("unknown representation tag {0:?}")]
    UnknownTag(String),
    #[error("tag {0} needs a \"coalitions\" array")]
    MissingCoalitions(String),
    #[error("weights form needs \"q\" and \"w\" fields")]
    MissingWeights,
    #[error("an empty \"lmax\" list means the all-winning game; \"all_winning\": false contradicts it")]
    ContradictoryAllWinning,
    #[error(transparent)]
    Coalition(#[from] crate::coalition::CoalitionParseError),
    #[error(transparent)]
    Game(#[from] crate::game::GameError),
}

pub fn game_to_json(game: &GameRep) -> GameJson {
    let mut out = GameJson {
        n: game.n(),
        tag: game.tag().as_str().to_string(),
        coalitions: None,
        q: None,
        w: None,
        all_winning: None,
    };
    match game {
        GameRep::Weighted(wv) => {
            out.q = Some(rational_to_string(wv.quota()));
            out.w = Some(wv.weights().iter().map(rational_to_string).collect());
        }
        _ => {
            let list = game.list().expect("list form");
            out.coalitions = Some(list.iter().map(Coalition::to_string).collect());
            if game.tag() == Tag::Lmax {
                out.all_winning = Some(list.is_empty());
            }
        }
    }
    out
}

pub fn game_from_json(json: &GameJson) -> Result<GameRep, EncodeError> {
    let tag = Tag::parse(&json.tag).ok_or_else(|| EncodeError::UnknownTag(json.tag.clone()))?;
    if tag == Tag::Weights {
        let (q, w) = match (&json.q, &json.w) {
            (Some(q), Some(w)) => (q, w),
            _ => return Err(EncodeError::MissingWeights),
        };
        let q = parse_rational(q)?;
        let w = w.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
        return Ok(GameRep::weighted(WeightVector::new(q, w)?));
    }
    let texts = json
        .coalitions
        .as_ref()
        .ok_or_else(|| EncodeError::MissingCoalitions(json.tag.clone()))?;
    let list = texts
        .iter()
        .map(|t| Coalition::parse(t))
        .collect::<Result<Vec<_>, _>>()?;
    match tag {
        Tag::W => Ok(GameRep::winning(json.n, list)?),
        Tag::L => Ok(GameRep::losing(json.n, list)?),
        Tag::Wmin => Ok(GameRep::minimal_winning(json.n, list)?),
        Tag::Lmax => {
            if list.is_empty() && json.all_winning == Some(false) {
                return Err(EncodeError::ContradictoryAllWinning);
            }
            Ok(GameRep::maximal_losing(json.n, list)?)
        }
        Tag::Roof => Ok(GameRep::roofs(json.n, list)?),
        Tag::Ceil => Ok(GameRep::ceilings(json.n, list)?),
        Tag::Weights => unreachable!("handled above"),
    }
}

/// One enumerated game on the JSONL stream.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameLine {
    pub rank: usize,
    pub wmin: Vec<Coalition>,
    pub weights: WeightVector,
}

/// Stream trailer: totals and the per-rank histogram.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SummaryLine {
    pub summary: bool,
    pub n: u8,
    pub total: u64,
    pub by_rank: Vec<u64>,
}

/// Parses a target vector from either a JSON array (`[0.5, 0.3, 0.2]`) or
/// comma/whitespace-separated floats.
pub fn parse_target_text(text: &str) -> Result<Vec<f64>, String> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str::<Vec<f64>>(trimmed)
            .map_err(|e| format!("bad JSON target: {e}"));
    }
    let mut out = Vec::new();
    for tok in trimmed.split(|c: char| c == ',' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        out.push(tok.parse::<f64>().map_err(|e| format!("bad number {tok:?}: {e}"))?);
    }
    if out.is_empty() {
        return Err("target vector is empty".to_string());
    }
    Ok(out)
}
