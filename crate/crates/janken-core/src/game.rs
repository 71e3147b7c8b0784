//! Game descriptions and their classification.
//!
//! A game is a finite hand set with exact rational probabilities plus a list
//! of WOD ("win-or-die") sets: supports on which a round is conclusive,
//! split into winner hands (survivors) and loser hands (eliminated). Every
//! support without a WOD set is a tie. `classify` extracts the quantities
//! driving the long-run behavior: the largest WOD support mass `rho`, the
//! number `nu` of supports attaining it, and the winner-side masses; games
//! split into the log kind (`rho = 1`, rounds grow like log n) and the exp
//! kind (`rho < 1`, rounds grow geometrically).

use std::collections::BTreeMap;

use num::{BigRational, One, Signed, Zero};

use crate::error::SpecError;
use crate::hands::HandSet;
use crate::ratutil::rat_ln;

/// A support on which the round is conclusive, split into winners and losers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WodSet {
    pub support: HandSet,
    pub winners: HandSet,
    pub losers: HandSet,
}

impl WodSet {
    /// Build a WOD set; losers are the rest of the support.
    pub fn new(support: HandSet, winners: HandSet) -> WodSet {
        WodSet { support, winners, losers: HandSet::from_mask(support.mask() & !winners.mask()) }
    }

    /// Shorthand used all over the tests.
    pub fn from_indices(support: &[usize], winners: &[usize]) -> WodSet {
        WodSet::new(HandSet::from_hands(support.iter().copied()), HandSet::from_hands(winners.iter().copied()))
    }
}

/// Log games end in Theta(log n) rounds, exp games in Theta(rho^-n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameKind {
    Log,
    Exp,
}

impl std::fmt::Display for GameKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GameKind::Log => write!(f, "log"),
            GameKind::Exp => write!(f, "exp"),
        }
    }
}

/// The classification data extracted from a game's WOD structure.
#[derive(Debug, Clone)]
pub struct Classification {
    /// Largest WOD support mass; the no-tie probability decays like nu*rho^n.
    pub rho: BigRational,
    /// Number of WOD sets attaining rho.
    pub nu: usize,
    /// Log iff rho = 1, i.e. the full hand set is itself a WOD set.
    pub kind: GameKind,
    /// Winner-side mass of the full-support WOD set; present iff kind is log.
    pub alpha: Option<BigRational>,
    /// Winner-side masses of every mass-maximizing WOD set.
    pub alphas: Vec<BigRational>,
    /// The mass-maximizing WOD sets themselves.
    pub max_wod_sets: Vec<WodSet>,
    /// Harmonic slope of the conclusive-round count: nu / sum of ln(rho/alpha).
    pub h_nu: f64,
}

/// A complete game description.
///
/// Fields are public for construction and inspection; treat a spec as
/// immutable once built (the support lookup index is frozen at construction).
#[derive(Debug, Clone)]
pub struct GameSpec {
    pub m: usize,
    pub probs: Vec<BigRational>,
    pub wod_sets: Vec<WodSet>,
    wod_index: BTreeMap<u32, usize>,
}

impl GameSpec {
    /// Assemble a spec and freeze the support index. No validation happens
    /// here; call `validate` before trusting the spec.
    pub fn new(m: usize, probs: Vec<BigRational>, wod_sets: Vec<WodSet>) -> GameSpec {
        let wod_index = wod_sets.iter().enumerate().map(|(i, w)| (w.support.mask(), i)).collect();
        GameSpec { m, probs, wod_sets, wod_index }
    }

    /// The uniform distribution on m hands.
    pub fn uniform_probs(m: usize) -> Vec<BigRational> {
        let p = BigRational::new(1.into(), (m as i64).into());
        vec![p; m]
    }

    /// The WOD set on exactly this support, if one exists.
    pub fn wod_for_support(&self, support: HandSet) -> Option<&WodSet> {
        self.wod_index.get(&support.mask()).map(|&i| &self.wod_sets[i])
    }

    /// Total probability of a set of hands.
    pub fn mass(&self, set: HandSet) -> BigRational {
        let mut acc = BigRational::zero();
        for h in set.iter() {
            acc += &self.probs[h];
        }
        acc
    }

    /// Check every construction invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.m < 2 {
            return Err(SpecError::TooFewHands { m: self.m });
        }
        if self.probs.len() != self.m {
            return Err(SpecError::ProbCountMismatch { m: self.m, got: self.probs.len() });
        }
        for (hand, p) in self.probs.iter().enumerate() {
            if !p.is_positive() {
                return Err(SpecError::ZeroProbability { hand });
            }
        }
        let sum: BigRational = self.probs.iter().sum();
        if !sum.is_one() {
            return Err(SpecError::ProbSumNotOne { sum: sum.to_string() });
        }
        let full = HandSet::full(self.m);
        let mut seen = BTreeMap::new();
        let mut has_binary = false;
        for w in &self.wod_sets {
            if !w.support.is_subset_of(full) {
                let hand = w.support.iter().find(|&h| h >= self.m).unwrap_or(self.m);
                return Err(SpecError::HandOutOfRange { hand, m: self.m });
            }
            let partitions = w.winners.mask() & w.losers.mask() == 0
                && w.winners.mask() | w.losers.mask() == w.support.mask();
            if !partitions {
                return Err(SpecError::MalformedWodSet { support: w.support.to_string() });
            }
            if w.winners.is_empty() || w.losers.is_empty() {
                return Err(SpecError::EmptyWinnerOrLoserSide { support: w.support.to_string() });
            }
            if seen.insert(w.support.mask(), ()).is_some() {
                return Err(SpecError::DuplicateSupport { support: w.support.to_string() });
            }
            has_binary |= w.support.len() == 2;
        }
        if !has_binary {
            return Err(SpecError::NoBinaryWodSet);
        }
        Ok(())
    }

    /// Classify a valid game. Panics on a spec without WOD sets; run
    /// `validate` first.
    pub fn classify(&self) -> Classification {
        assert!(!self.wod_sets.is_empty(), "classify needs at least one WOD set; validate the spec first");
        let masses: Vec<BigRational> = self.wod_sets.iter().map(|w| self.mass(w.support)).collect();
        let rho = masses.iter().max().expect("nonempty").clone();
        let mut max_wod_sets = Vec::new();
        let mut alphas = Vec::new();
        for (w, mass) in self.wod_sets.iter().zip(&masses) {
            if *mass == rho {
                max_wod_sets.push(w.clone());
                alphas.push(self.mass(w.winners));
            }
        }
        let nu = max_wod_sets.len();
        let kind = if rho.is_one() { GameKind::Log } else { GameKind::Exp };
        let alpha = match kind {
            GameKind::Log => Some(alphas[0].clone()),
            GameKind::Exp => None,
        };
        let mean_log_ratio: f64 =
            alphas.iter().map(|a| rat_ln(&(rho.clone() / a))).sum::<f64>() / nu as f64;
        Classification { rho, nu, kind, alpha, alphas, max_wod_sets, h_nu: 1.0 / mean_log_ratio }
    }

    /// Same hands, same probabilities, same WOD sets (order-insensitive).
    pub fn structurally_equal(&self, other: &GameSpec) -> bool {
        if self.m != other.m || self.probs != other.probs {
            return false;
        }
        let key = |spec: &GameSpec| -> BTreeMap<u32, u32> {
            spec.wod_sets.iter().map(|w| (w.support.mask(), w.winners.mask())).collect()
        };
        key(self) == key(other)
    }
}
