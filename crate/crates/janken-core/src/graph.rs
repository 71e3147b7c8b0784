//! Dominance graphs and WOD-set derivation.
//!
//! A dominance graph records which hand beats which. Each support of two or
//! more hands becomes a WOD set or a tie by looking at the induced subgraph:
//! no edges at all means nobody is eliminated (tie); a directed cycle
//! anywhere inside the support keeps the cycling hands alive against each
//! other and poisons the whole support (tie); otherwise the winners are the
//! hands with no incoming edge inside the support (sources and isolated
//! hands) and every other hand is eliminated.

use num::BigRational;

use crate::error::SpecError;
use crate::game::{GameSpec, WodSet};
use crate::hands::HandSet;

/// Supports are enumerated for every subset of hands; the cap keeps that
/// 2^m loop tractable.
pub const DEFAULT_HAND_CAP: usize = 16;

/// A directed "beats" relation on m hands, with no self-loops and at most
/// one direction per pair.
#[derive(Debug, Clone)]
pub struct DominanceGraph {
    m: usize,
    beats: Vec<u32>,
}

impl DominanceGraph {
    /// Build from an edge list `(winner, loser)`. Rejects out-of-range
    /// indices, self-loops, and a pair given in both directions.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(m: usize, edges: I) -> Result<DominanceGraph, SpecError> {
        if m < 2 {
            return Err(SpecError::TooFewHands { m });
        }
        let mut beats = vec![0u32; m];
        for (i, j) in edges {
            if i >= m {
                return Err(SpecError::HandOutOfRange { hand: i, m });
            }
            if j >= m {
                return Err(SpecError::HandOutOfRange { hand: j, m });
            }
            if i == j || beats[j] & (1 << i) != 0 || beats[i] & (1 << j) != 0 {
                return Err(SpecError::BadEdge { i, j });
            }
            beats[i] |= 1 << j;
        }
        Ok(DominanceGraph { m, beats })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn beats(&self, i: usize, j: usize) -> bool {
        i < self.m && j < self.m && self.beats[i] & (1 << j) != 0
    }

    /// All edges `(winner, loser)`, lexicographically sorted.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in 0..self.m {
                if self.beats[i] & (1 << j) != 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Outcome of one support: `Some(winners)` if conclusive, `None` if the
    /// support ties.
    pub fn support_outcome(&self, support: HandSet) -> Option<HandSet> {
        let mask = support.mask();
        let nodes: Vec<usize> = support.iter().collect();
        let mut indeg = vec![0usize; nodes.len()];
        let mut any_edge = false;
        for (a, &i) in nodes.iter().enumerate() {
            for (b, &j) in nodes.iter().enumerate() {
                if a != b && self.beats[j] & (1 << i) != 0 {
                    indeg[a] += 1;
                    any_edge = true;
                }
            }
        }
        let _ = mask;
        if !any_edge {
            return None;
        }
        // Kahn peeling: if some node is never freed, the support has a cycle.
        let mut removed = vec![false; nodes.len()];
        let mut work = indeg.clone();
        loop {
            let next = (0..nodes.len()).find(|&a| !removed[a] && work[a] == 0);
            let Some(a) = next else { break };
            removed[a] = true;
            let i = nodes[a];
            for (b, &j) in nodes.iter().enumerate() {
                if !removed[b] && self.beats[i] & (1 << j) != 0 {
                    work[b] -= 1;
                }
            }
        }
        if removed.iter().any(|r| !r) {
            return None;
        }
        let winners = nodes
            .iter()
            .enumerate()
            .filter(|&(a, _)| indeg[a] == 0)
            .map(|(_, &i)| i)
            .collect();
        Some(winners)
    }

    /// Derive the WOD sets of every support of size two or more.
    pub fn derive_wod_sets(&self, cap: usize) -> Result<Vec<WodSet>, SpecError> {
        if self.m > cap || self.m > 32 {
            return Err(SpecError::TooManyHands { m: self.m, cap });
        }
        let mut wods = Vec::new();
        for mask in 1..=HandSet::full(self.m).mask() {
            let support = HandSet::from_mask(mask);
            if support.len() < 2 {
                continue;
            }
            if let Some(winners) = self.support_outcome(support) {
                wods.push(WodSet::new(support, winners));
            }
        }
        Ok(wods)
    }
}

impl GameSpec {
    /// Build a game from a dominance graph with the default hand cap.
    pub fn from_dominance_graph(graph: &DominanceGraph, probs: Vec<BigRational>) -> Result<GameSpec, SpecError> {
        GameSpec::from_dominance_graph_capped(graph, probs, DEFAULT_HAND_CAP)
    }

    /// Build a game from a dominance graph, with an explicit support
    /// enumeration cap. The derived spec is validated before it is returned;
    /// graphs whose pair supports all tie fail with `NoBinaryWodSet`.
    pub fn from_dominance_graph_capped(
        graph: &DominanceGraph,
        probs: Vec<BigRational>,
        cap: usize,
    ) -> Result<GameSpec, SpecError> {
        let wods = graph.derive_wod_sets(cap)?;
        let spec = GameSpec::new(graph.m(), probs, wods);
        spec.validate()?;
        Ok(spec)
    }
}
