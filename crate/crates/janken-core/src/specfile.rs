//! Reading and writing game-spec JSON files.
//!
//! The file names a family and its parameters; probabilities are rational
//! strings and default to uniform when omitted. `kind` selects how the hand
//! relation is given: a family constructor (`ctls`, `acyclic_clique`,
//! `regular_tournament`, `circulant`), an edge list (`graph`), or raw WOD
//! sets (`explicit`). Serialization always writes the explicit form, sorted
//! by support, which doubles as the canonical text for spec digests.

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::SpecError;
use crate::families::{acyclic_clique, circulant_payoff, ctls, regular_tournament};
use crate::game::{GameSpec, WodSet};
use crate::graph::DominanceGraph;
use crate::hands::HandSet;

#[derive(Debug, Serialize, Deserialize)]
struct FileFamily {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FileWod {
    support: Vec<usize>,
    winners: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    probs: Option<Vec<String>>,
    family: FileFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wod_sets: Option<Vec<FileWod>>,
}

fn parse_rational(text: &str) -> Result<BigRational, SpecError> {
    text.trim()
        .parse()
        .map_err(|_| SpecError::BadSpecFile(format!("'{text}' is not a rational like 1/3")))
}

fn parse_probs(probs: &Option<Vec<String>>) -> Result<Option<Vec<BigRational>>, SpecError> {
    match probs {
        None => Ok(None),
        Some(list) => list.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>().map(Some),
    }
}

fn require_m(file: &SpecFile) -> Result<usize, SpecError> {
    file.family
        .m
        .or(file.m)
        .ok_or_else(|| SpecError::BadSpecFile(format!("family '{}' needs m", file.family.kind)))
}

/// Parse a game-spec JSON document and validate the result.
pub fn game_from_json(text: &str) -> Result<GameSpec, SpecError> {
    let file: SpecFile =
        serde_json::from_str(text).map_err(|e| SpecError::BadSpecFile(e.to_string()))?;
    let probs = parse_probs(&file.probs)?;
    let spec = match file.family.kind.as_str() {
        "ctls" => {
            if probs.is_some() {
                return Err(SpecError::BadSpecFile(
                    "ctls takes family.p, not a probs list".into(),
                ));
            }
            let p = match &file.family.p {
                Some(text) => parse_rational(text)?,
                None => BigRational::new(1.into(), 2.into()),
            };
            ctls(p)?
        }
        "acyclic_clique" => acyclic_clique(require_m(&file)?, probs)?,
        "regular_tournament" => regular_tournament(require_m(&file)?, probs)?,
        "circulant" => circulant_payoff(require_m(&file)?, probs)?,
        "graph" => {
            let m = file.m.ok_or_else(|| SpecError::BadSpecFile("graph needs top-level m".into()))?;
            let edges = file
                .edges
                .as_ref()
                .ok_or_else(|| SpecError::BadSpecFile("graph needs an edges list".into()))?;
            let graph = DominanceGraph::new(m, edges.iter().copied())?;
            GameSpec::from_dominance_graph(&graph, probs.unwrap_or_else(|| GameSpec::uniform_probs(m)))?
        }
        "explicit" => {
            let m = file.m.ok_or_else(|| SpecError::BadSpecFile("explicit needs top-level m".into()))?;
            let wods = file
                .wod_sets
                .as_ref()
                .ok_or_else(|| SpecError::BadSpecFile("explicit needs a wod_sets list".into()))?;
            let wod_sets = wods
                .iter()
                .map(|w| {
                    WodSet::new(
                        HandSet::from_hands(w.support.iter().copied()),
                        HandSet::from_hands(w.winners.iter().copied()),
                    )
                })
                .collect();
            let spec =
                GameSpec::new(m, probs.unwrap_or_else(|| GameSpec::uniform_probs(m)), wod_sets);
            spec.validate()?;
            spec
        }
        other => return Err(SpecError::BadSpecFile(format!("unknown family kind '{other}'"))),
    };
    Ok(spec)
}

/// Serialize a game in canonical explicit form: probs as rational strings,
/// WOD sets sorted by support. Equal games produce identical text, so this
/// is also the digest input.
pub fn game_to_json(spec: &GameSpec) -> String {
    let mut wods: Vec<&WodSet> = spec.wod_sets.iter().collect();
    wods.sort_by_key(|w| w.support.mask());
    let file = SpecFile {
        m: Some(spec.m),
        probs: Some(spec.probs.iter().map(|p| p.to_string()).collect()),
        family: FileFamily { kind: "explicit".into(), p: None, m: None },
        edges: None,
        wod_sets: Some(
            wods.iter()
                .map(|w| FileWod { support: w.support.to_vec(), winners: w.winners.to_vec() })
                .collect(),
        ),
    };
    serde_json::to_string_pretty(&file).expect("spec file serializes")
}
