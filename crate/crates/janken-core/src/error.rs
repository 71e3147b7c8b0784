//! Error types for spec construction, exact computation, and simulation.
//!
//! `SpecError` covers everything that can be wrong with a game description,
//! `NumericError` covers overflow/cancellation/budget problems in the exact
//! engine, and `SimError` covers runaway simulations. The CLI maps the three
//! families to exit codes 2, 3 and 4.

use thiserror::Error;

/// A violated invariant of a game description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("hand {hand} has a zero or negative probability")]
    ZeroProbability { hand: usize },
    #[error("hand probabilities sum to {sum}, expected exactly 1")]
    ProbSumNotOne { sum: String },
    #[error("WOD set on support {support} has an empty winner or loser side")]
    EmptyWinnerOrLoserSide { support: String },
    #[error("more than one WOD set declared for support {support}")]
    DuplicateSupport { support: String },
    #[error("no binary WOD set: two remaining players could tie forever")]
    NoBinaryWodSet,
    #[error("WOD set on support {support}: winners and losers do not partition the support")]
    MalformedWodSet { support: String },
    #[error("hand index {hand} out of range for {m} hands")]
    HandOutOfRange { hand: usize, m: usize },
    #[error("a game needs at least two hands, got {m}")]
    TooFewHands { m: usize },
    #[error("{m} hands would enumerate 2^{m} supports, over the cap of {cap} hands")]
    TooManyHands { m: usize, cap: usize },
    #[error("expected {m} probabilities, got {got}")]
    ProbCountMismatch { m: usize, got: usize },
    #[error("probability {p} is outside (0, 1)")]
    InvalidProbability { p: String },
    #[error("edge {i}->{j} is a self-loop or contradicts an existing edge")]
    BadEdge { i: usize, j: usize },
    #[error("unknown builtin game '{0}'")]
    UnknownBuiltin(String),
    #[error("bad builtin parameter: {0}")]
    BadBuiltinParam(String),
    #[error("bad game-spec file: {0}")]
    BadSpecFile(String),
}

impl SpecError {
    /// Stable machine-readable name of the violated invariant.
    pub fn name(&self) -> &'static str {
        match self {
            SpecError::ZeroProbability { .. } => "ZeroProbability",
            SpecError::ProbSumNotOne { .. } => "ProbSumNotOne",
            SpecError::EmptyWinnerOrLoserSide { .. } => "EmptyWinnerOrLoserSide",
            SpecError::DuplicateSupport { .. } => "DuplicateSupport",
            SpecError::NoBinaryWodSet => "NoBinaryWodSet",
            SpecError::MalformedWodSet { .. } => "MalformedWodSet",
            SpecError::HandOutOfRange { .. } => "HandOutOfRange",
            SpecError::TooFewHands { .. } => "TooFewHands",
            SpecError::TooManyHands { .. } => "TooManyHands",
            SpecError::ProbCountMismatch { .. } => "ProbCountMismatch",
            SpecError::InvalidProbability { .. } => "InvalidProbability",
            SpecError::BadEdge { .. } => "BadEdge",
            SpecError::UnknownBuiltin(_) => "UnknownBuiltin",
            SpecError::BadBuiltinParam(_) => "BadBuiltinParam",
            SpecError::BadSpecFile(_) => "BadSpecFile",
        }
    }
}

/// A numeric failure in the exact engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("float overflow or underflow at n={n} while computing {what}; rerun in rational mode or lower the horizon")]
    Overflow { n: usize, what: &'static str },
    #[error("negative variance {value:e} at n={n}: catastrophic cancellation; rerun in rational mode")]
    NegativeVariance { n: usize, value: f64 },
    #[error("poissonization center {x} needs the window up to {hi}, beyond the table horizon {n}")]
    WindowExceedsHorizon { x: f64, hi: usize, n: usize },
    #[error("empty support")]
    EmptySupport,
    #[error("table cost {cost} exceeds the budget {budget}; lower N, K or L, or raise JANKEN_BUDGET")]
    BudgetExceeded { cost: u128, budget: u128 },
}

/// A simulation that cannot make progress.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("trial {trial} exceeded the cap of {cap} rounds; the game likely cannot select a leader from this state")]
    NonTerminating { trial: u64, cap: u64 },
}
