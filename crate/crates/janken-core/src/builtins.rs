//! Named builtin games.
//!
//! Builtins cover the worked examples: the coin game, the three-hand cycle,
//! the five small graph games, the parametric families, the three real-world
//! variants, and the semicircle pointing game (which has no hand set and is
//! handled by the simulator only). Names take optional `?key=value`
//! parameters, e.g. `ctls?p=1/3` or `tournament?m=2`.

use num::BigRational;

use crate::error::SpecError;
use crate::families::{acyclic_clique, circulant_payoff, ctls, regular_tournament};
use crate::game::GameSpec;
use crate::graph::DominanceGraph;

/// A named builtin: either a full game description or the semicircle game.
#[derive(Debug, Clone)]
pub enum Builtin {
    Game(GameSpec),
    Semicircle,
}

/// Every recognized builtin name.
pub const BUILTIN_NAMES: &[&str] = &[
    "ctls",
    "rpsls",
    "graph1",
    "graph2",
    "graph3",
    "graph4",
    "graph5",
    "clique",
    "tournament",
    "circulant",
    "world-germany",
    "world-malaysia",
    "world-china",
    "semicircle",
];

struct Params {
    p: Option<BigRational>,
    m: Option<usize>,
}

fn parse_params(name: &str, query: Option<&str>) -> Result<Params, SpecError> {
    let mut out = Params { p: None, m: None };
    let Some(query) = query else { return Ok(out) };
    for pair in query.split('&') {
        let Some((key, value)) = pair.split_once('=') else {
            return Err(SpecError::BadBuiltinParam(format!("'{pair}' is not key=value")));
        };
        match key {
            "p" => {
                let parsed: BigRational = value
                    .parse()
                    .map_err(|_| SpecError::BadBuiltinParam(format!("p='{value}' is not a rational like 1/3")))?;
                out.p = Some(parsed);
            }
            "m" => {
                let parsed: usize = value
                    .parse()
                    .map_err(|_| SpecError::BadBuiltinParam(format!("m='{value}' is not a positive integer")))?;
                out.m = Some(parsed);
            }
            other => {
                return Err(SpecError::BadBuiltinParam(format!("unknown parameter '{other}' for '{name}'")));
            }
        }
    }
    Ok(out)
}

fn graph_game(m: usize, edges: &[(usize, usize)]) -> Result<GameSpec, SpecError> {
    let graph = DominanceGraph::new(m, edges.iter().copied())?;
    GameSpec::from_dominance_graph(&graph, GameSpec::uniform_probs(m))
}

/// Look up a builtin by name, parameters included.
pub fn builtin(spec: &str) -> Result<Builtin, SpecError> {
    let (name, query) = match spec.split_once('?') {
        Some((n, q)) => (n, Some(q)),
        None => (spec, None),
    };
    let params = parse_params(name, query)?;
    let game = match name {
        "ctls" => {
            let p = params.p.unwrap_or_else(|| BigRational::new(1.into(), 2.into()));
            ctls(p)?
        }
        "rpsls" | "graph1" => regular_tournament(1, None)?,
        // Transitive triple: 0 beats 1 and 2, 1 beats 2.
        "graph2" => graph_game(3, &[(0, 1), (0, 2), (1, 2)])?,
        // The middle hand beats both outer hands.
        "graph3" => graph_game(3, &[(1, 0), (1, 2)])?,
        // Both outer hands beat the middle one.
        "graph4" => graph_game(3, &[(0, 1), (2, 1)])?,
        // A chain: 0 beats 1, 1 beats 2, no edge between 0 and 2.
        "graph5" => graph_game(3, &[(0, 1), (1, 2)])?,
        "clique" => acyclic_clique(params.m.unwrap_or(3), None)?,
        "tournament" => regular_tournament(params.m.unwrap_or(2), None)?,
        "circulant" => circulant_payoff(params.m.unwrap_or(2), None)?,
        // Rock, paper, scissors, well: well beats rock and scissors, paper
        // beats rock and well.
        "world-germany" => graph_game(4, &[(0, 2), (1, 0), (1, 3), (2, 1), (3, 0), (3, 2)])?,
        // Bird, stone, pistol, plank, water.
        "world-malaysia" => graph_game(
            5,
            &[(0, 4), (1, 0), (1, 3), (2, 0), (2, 1), (2, 3), (3, 0), (3, 4), (4, 1), (4, 2)],
        )?,
        // Gun, chicken, bug, stick, fox.
        "world-china" => graph_game(5, &[(0, 1), (0, 2), (1, 3), (2, 1), (2, 4), (3, 0), (4, 1)])?,
        "semicircle" => return Ok(Builtin::Semicircle),
        other => return Err(SpecError::UnknownBuiltin(other.to_string())),
    };
    Ok(Builtin::Game(game))
}

/// Like `builtin`, erroring for names without a hand set.
pub fn builtin_game(spec: &str) -> Result<GameSpec, SpecError> {
    match builtin(spec)? {
        Builtin::Game(g) => Ok(g),
        Builtin::Semicircle => Err(SpecError::BadBuiltinParam(
            "semicircle has no hand set; only the simulator accepts it".into(),
        )),
    }
}
