//! Parametric game families.
//!
//! Four constructions recur throughout the analysis: the two-hand coin game
//! (every round is conclusive), transitive cliques (log games whose winner
//! is the unique source), regular tournaments on 2m+1 hands (the odd cycles
//! generalizing the three-hand game), and the circulant payoff games where a
//! support is conclusive exactly when the gain-maximizing hands are a proper
//! subset. Tournaments go through the dominance-graph derivation; circulant
//! games build their WOD sets from the payoff matrix directly.

use num::{BigRational, One, Signed};

use crate::error::SpecError;
use crate::game::{GameSpec, WodSet};
use crate::graph::{DominanceGraph, DEFAULT_HAND_CAP};
use crate::hands::HandSet;

fn resolve_probs(m: usize, probs: Option<Vec<BigRational>>) -> Vec<BigRational> {
    probs.unwrap_or_else(|| GameSpec::uniform_probs(m))
}

/// Coin-toss leader selection: hand 0 ("heads", probability p) beats hand 1.
/// Every round with both hands present is conclusive, so the game is log
/// with alpha = p.
pub fn ctls(p: BigRational) -> Result<GameSpec, SpecError> {
    if !p.is_positive() || p >= BigRational::one() {
        return Err(SpecError::InvalidProbability { p: p.to_string() });
    }
    let q = BigRational::one() - p.clone();
    let spec = GameSpec::new(2, vec![p, q], vec![WodSet::from_indices(&[0, 1], &[0])]);
    spec.validate()?;
    Ok(spec)
}

/// Transitive clique: hand i beats hand j whenever i < j. Every support is
/// conclusive with the lowest index winning, so the full set is a WOD set
/// and the game is log.
pub fn acyclic_clique(m: usize, probs: Option<Vec<BigRational>>) -> Result<GameSpec, SpecError> {
    let mut edges = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            edges.push((i, j));
        }
    }
    let graph = DominanceGraph::new(m, edges)?;
    GameSpec::from_dominance_graph(&graph, resolve_probs(m, probs))
}

/// Regular tournament on 2m+1 hands: i beats j exactly when (j - i) falls in
/// 1..=m modulo 2m+1. Conclusive supports are those whose induced
/// subtournament is transitive; with uniform probabilities rho = (m+1)/(2m+1)
/// attained by the 2m+1 rotations of {i, i+1, ..., i+m}.
pub fn regular_tournament(m: usize, probs: Option<Vec<BigRational>>) -> Result<GameSpec, SpecError> {
    if m == 0 {
        return Err(SpecError::BadBuiltinParam("regular tournament needs m >= 1".into()));
    }
    let hands = 2 * m + 1;
    if hands > DEFAULT_HAND_CAP {
        return Err(SpecError::TooManyHands { m: hands, cap: DEFAULT_HAND_CAP });
    }
    let mut edges = Vec::new();
    for i in 0..hands {
        for d in 1..=m {
            edges.push((i, (i + d) % hands));
        }
    }
    let graph = DominanceGraph::new(hands, edges)?;
    GameSpec::from_dominance_graph(&graph, resolve_probs(hands, probs))
}

/// Circulant payoff game on 2m+1 hands. Hand i collects 2^(m+g) from hand j
/// where g is the symmetric residue of (j - i) modulo 2m+1 in [-m, m]; on a
/// support S the hands maximizing the total collected gain survive, and the
/// round is conclusive exactly when they are a proper subset of S. The full
/// set always ties, so the game is exp with rho = 2m/(2m+1), attained by the
/// 2m+1 complements of a single hand.
pub fn circulant_payoff(m: usize, probs: Option<Vec<BigRational>>) -> Result<GameSpec, SpecError> {
    if m == 0 {
        return Err(SpecError::BadBuiltinParam("circulant payoff needs m >= 1".into()));
    }
    let hands = 2 * m + 1;
    if hands > DEFAULT_HAND_CAP {
        return Err(SpecError::TooManyHands { m: hands, cap: DEFAULT_HAND_CAP });
    }
    let gain = |i: usize, j: usize| -> u64 {
        let r = (j + hands - i) % hands;
        let g = if r <= m { r as i64 } else { r as i64 - hands as i64 };
        1u64 << (m as i64 + g) as u32
    };
    let mut wods = Vec::new();
    for mask in 1..=HandSet::full(hands).mask() {
        let support = HandSet::from_mask(mask);
        if support.len() < 2 {
            continue;
        }
        let nodes: Vec<usize> = support.iter().collect();
        let totals: Vec<u64> =
            nodes.iter().map(|&i| nodes.iter().map(|&j| gain(i, j)).sum()).collect();
        let best = *totals.iter().max().expect("nonempty support");
        let winners: HandSet = nodes
            .iter()
            .zip(&totals)
            .filter(|&(_, &t)| t == best)
            .map(|(&i, _)| i)
            .collect();
        if winners.len() < support.len() {
            wods.push(WodSet::new(support, winners));
        }
    }
    let spec = GameSpec::new(hands, resolve_probs(hands, probs), wods);
    spec.validate()?;
    Ok(spec)
}

/// Detects games sharing the transitive clique's survivor-count law: uniform
/// hand probabilities and every support of two or more hands conclusive with
/// a single winner. Uniformity makes the hands exchangeable, so which hand
/// wins a support never matters and the count chain coincides with the
/// clique's; the fair coin game is the two-hand case. Returns the hand count.
pub fn uniform_clique_law(spec: &GameSpec) -> Option<usize> {
    if spec.probs != GameSpec::uniform_probs(spec.m) {
        return None;
    }
    let supports: std::collections::BTreeSet<u32> = spec
        .wod_sets
        .iter()
        .filter(|w| w.support.len() >= 2 && w.winners.len() == 1)
        .map(|w| w.support.mask())
        .collect();
    let multi = (1usize << spec.m) - 1 - spec.m;
    (supports.len() == multi && spec.wod_sets.len() == multi).then_some(spec.m)
}
