//! Exact analysis and simulation of generalized Janken leader selection.
//!
//! A group of n players repeatedly throws hands until a single leader
//! remains. A game description (`GameSpec`) lists the hands, their exact
//! rational probabilities, and the conclusive supports (WOD sets) with their
//! winner sides. On top of that sit:
//!
//! - classification (`GameSpec::classify`): the decay rate `rho`, its
//!   multiplicity `nu`, and the log/exp dichotomy of the round count;
//! - the exact engine (`exact`): support probabilities, transition kernels,
//!   and DP tables for round-count moments, CDF slices, total hands shown,
//!   and conclusive-round counts, generic over exact rationals and
//!   log-domain floats;
//! - the simulator (`sim`): seeded per-round play and a fast-forward mode
//!   that jumps over ties, plus Kolmogorov-Smirnov statistics and the
//!   semicircle pointing game;
//! - asymptotic predictions (`asym`): leading-order formulas from the
//!   classification alone, limit CDFs for the clique families, fluctuation
//!   profiles, and the conclusive-round slope with its rationality check.

pub mod asym;
pub mod builtins;
pub mod error;
pub mod exact;
pub mod families;
pub mod game;
pub mod graph;
pub mod hands;
pub mod ratutil;
pub mod scalar;
pub mod sim;
pub mod specfile;

pub use error::{NumericError, SimError, SpecError};
pub use game::{Classification, GameKind, GameSpec, WodSet};
pub use graph::{DominanceGraph, DEFAULT_HAND_CAP};
pub use hands::HandSet;
pub use ratutil::{rat_ln, rat_to_f64};
