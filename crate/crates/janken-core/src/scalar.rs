//! Numeric modes for the exact engine.
//!
//! The DP tables are generic over a scalar: exact `BigRational` for
//! bit-exact results at small horizons, or `f64` with log-domain kernel
//! assembly for large ones. The kernel at n is the one-round transition law
//! among n players: `win_weight[j]` is the probability that the round is
//! conclusive with exactly j survivors, `tie_prob` the rest.
//!
//! Both engines evaluate the same inclusion-exclusion sums. The rational
//! engine computes them literally. The float engine splits every power
//! `P_T^j` into `exp(j ln P_W)` times the ratio `(P_T/P_W)^j`, so each WOD
//! set contributes `exp(ln C(n,j) + j ln P_W + (n-j) ln P_D) * q_W(j) *
//! q_D(n-j)` where the q factors are alternating sums of ratio powers lying
//! in [0, 1]. The exponent never exceeds n ln P_S <= 0, so nothing
//! overflows, and weights keep full relative accuracy arbitrarily far below
//! the subnormal range of a naive product.

use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::game::GameSpec;
use crate::hands::HandSet;
use crate::ratutil::{rat_ln, rat_to_f64};

/// Which arithmetic the engine runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericMode {
    Rational,
    Float,
}

impl std::fmt::Display for NumericMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NumericMode::Rational => write!(f, "rational"),
            NumericMode::Float => write!(f, "float"),
        }
    }
}

/// One round's transition law among n players.
#[derive(Debug, Clone)]
pub struct Kernel<S> {
    pub n: usize,
    /// Index j holds the conclusive weight onto j survivors, 1 <= j < n;
    /// index 0 is unused and stays zero.
    pub win_weight: Vec<S>,
    /// Probability that the round eliminates nobody.
    pub tie_prob: S,
    /// Probability that the round is conclusive. Computed by its own
    /// inclusion-exclusion over supports, not as the weight sum, so the two
    /// routes can be cross-checked against each other.
    pub no_tie_prob: S,
}

/// Produces kernel rows for one fixed game.
pub trait KernelSource<S> {
    /// Full transition row for n >= 2 players.
    fn row(&mut self, n: usize) -> Kernel<S>;
    /// Just the no-tie probability, much cheaper than a full row.
    fn no_tie(&mut self, n: usize) -> S;
    /// Probability that n draws land on exactly this support (any support,
    /// not just WOD ones).
    fn support_prob(&mut self, support: HandSet, n: usize) -> S;
}

/// Arithmetic the DP tables can run in.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + std::fmt::Debug
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    const MODE: NumericMode;
    type Kernels: KernelSource<Self>;

    fn kernels(spec: &GameSpec) -> Self::Kernels;
    fn from_usize(v: usize) -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    /// False once a float value has overflowed to inf or gone NaN;
    /// rationals are always finite.
    fn is_finite_value(&self) -> bool;
}

/// One side of a WOD set (or a whole support) prepared for
/// inclusion-exclusion: the probability of j independent draws landing
/// exactly on the side is `sum over nonempty subsets T of sign * P_T^j`.
#[derive(Debug, Clone)]
struct SideTerms {
    size: usize,
    /// (index into the distinct-mass table, subtract instead of add)
    terms: Vec<(usize, bool)>,
}

fn side_terms(spec: &GameSpec, side: HandSet, masses: &mut Vec<BigRational>) -> SideTerms {
    let size = side.len();
    let mut terms = Vec::new();
    for sub in side.subsets() {
        if sub.is_empty() {
            continue; // contributes 0^j = 0 for every j >= 1
        }
        let mass = spec.mass(sub);
        let idx = match masses.iter().position(|m| *m == mass) {
            Some(i) => i,
            None => {
                masses.push(mass);
                masses.len() - 1
            }
        };
        let negate = (size - sub.len()) % 2 == 1;
        terms.push((idx, negate));
    }
    SideTerms { size, terms }
}

/// Exact kernel assembly in BigRational arithmetic.
pub struct RationalKernels {
    spec: GameSpec,
    masses: Vec<BigRational>,
    sets: Vec<(SideTerms, SideTerms)>,
    supports: Vec<SideTerms>,
}

impl RationalKernels {
    pub fn new(spec: &GameSpec) -> RationalKernels {
        let mut masses = Vec::new();
        let mut sets = Vec::new();
        let mut supports = Vec::new();
        for w in &spec.wod_sets {
            let winner = side_terms(spec, w.winners, &mut masses);
            let loser = side_terms(spec, w.losers, &mut masses);
            supports.push(side_terms(spec, w.support, &mut masses));
            sets.push((winner, loser));
        }
        RationalKernels { spec: spec.clone(), masses, sets, supports }
    }

    /// pows[i][e] = masses[i]^e for e in 0..=n.
    fn power_table(&self, n: usize) -> Vec<Vec<BigRational>> {
        self.masses
            .iter()
            .map(|m| {
                let mut pows = Vec::with_capacity(n + 1);
                pows.push(BigRational::one());
                for e in 1..=n {
                    let next = &pows[e - 1] * m;
                    pows.push(next);
                }
                pows
            })
            .collect()
    }

    fn side_prob(side: &SideTerms, e: usize, pows: &[Vec<BigRational>]) -> BigRational {
        if e < side.size {
            return BigRational::zero();
        }
        let mut acc = BigRational::zero();
        for &(idx, negate) in &side.terms {
            if negate {
                acc -= &pows[idx][e];
            } else {
                acc += &pows[idx][e];
            }
        }
        acc
    }
}

impl KernelSource<BigRational> for RationalKernels {
    fn row(&mut self, n: usize) -> Kernel<BigRational> {
        debug_assert!(n >= 2);
        let pows = self.power_table(n);
        // Pascal row: binom[j] = C(n, j) as exact integers.
        let mut binom = Vec::with_capacity(n + 1);
        let mut c = BigInt::one();
        binom.push(c.clone());
        for j in 1..=n {
            c = c * BigInt::from(n - j + 1) / BigInt::from(j);
            binom.push(c.clone());
        }
        let mut win_weight = vec![BigRational::zero(); n];
        for (winner, loser) in &self.sets {
            for j in 1..n {
                let pw = Self::side_prob(winner, j, &pows);
                if pw.is_zero() {
                    continue;
                }
                let pd = Self::side_prob(loser, n - j, &pows);
                if pd.is_zero() {
                    continue;
                }
                win_weight[j] += BigRational::from_integer(binom[j].clone()) * pw * pd;
            }
        }
        let no_tie = self.no_tie(n);
        let tie = BigRational::one() - no_tie.clone();
        Kernel { n, win_weight, tie_prob: tie, no_tie_prob: no_tie }
    }

    fn no_tie(&mut self, n: usize) -> BigRational {
        debug_assert!(n >= 2);
        let pows = self.power_table(n);
        let mut acc = BigRational::zero();
        for s in &self.supports {
            acc += Self::side_prob(s, n, &pows);
        }
        acc
    }

    fn support_prob(&mut self, support: HandSet, n: usize) -> BigRational {
        if n < support.len() {
            return BigRational::zero();
        }
        let size = support.len();
        let mut acc = BigRational::zero();
        for sub in support.subsets() {
            if sub.is_empty() {
                continue;
            }
            let term = num::pow::pow(self.spec.mass(sub), n);
            if (size - sub.len()) % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        acc
    }
}

/// Log-factorial table built by compensated (Neumaier) summation of ln k,
/// so that ln C(n, j) built from three lookups keeps absolute error near one
/// ulp of the inputs instead of accumulating across n terms.
struct LnFact {
    table: Vec<f64>,
    hi: f64,
    lo: f64,
}

impl LnFact {
    fn new() -> LnFact {
        LnFact { table: vec![0.0, 0.0], hi: 0.0, lo: 0.0 }
    }

    fn ensure(&mut self, n: usize) {
        while self.table.len() <= n {
            let k = self.table.len() as f64;
            let x = k.ln();
            let t = self.hi + x;
            if self.hi.abs() >= x.abs() {
                self.lo += (self.hi - t) + x;
            } else {
                self.lo += (x - t) + self.hi;
            }
            self.hi = t;
            self.table.push(self.hi + self.lo);
        }
    }

    fn get(&self, n: usize) -> f64 {
        self.table[n]
    }
}

#[derive(Debug, Clone)]
struct FloatSide {
    size: usize,
    /// ln of the side's total mass.
    ln_mass: f64,
    /// (ln(P_T / P_side), sign) per nonempty subset T; ratios are <= 1.
    ratios: Vec<(f64, f64)>,
}

impl FloatSide {
    fn new(spec: &GameSpec, side: HandSet) -> FloatSide {
        let total = spec.mass(side);
        let ln_mass = rat_ln(&total);
        let size = side.len();
        let mut ratios = Vec::new();
        for sub in side.subsets() {
            if sub.is_empty() {
                continue;
            }
            let ratio = spec.mass(sub) / total.clone();
            let sign = if (size - sub.len()) % 2 == 1 { -1.0 } else { 1.0 };
            ratios.push((rat_ln(&ratio), sign));
        }
        FloatSide { size, ln_mass, ratios }
    }

    /// Scaled exact-support probability q(e) = pi_e(side) / P_side^e,
    /// clamped into [0, 1].
    fn q(&self, e: usize) -> f64 {
        if e < self.size {
            return 0.0;
        }
        if self.size == 1 {
            return 1.0;
        }
        let mut acc = 0.0;
        for &(ln_ratio, sign) in &self.ratios {
            acc += sign * (e as f64 * ln_ratio).exp();
        }
        acc.clamp(0.0, 1.0)
    }
}

/// Log-domain kernel assembly in f64.
pub struct FloatKernels {
    spec: GameSpec,
    sets: Vec<(FloatSide, FloatSide)>,
    supports: Vec<FloatSide>,
    lnfact: LnFact,
}

impl FloatKernels {
    pub fn new(spec: &GameSpec) -> FloatKernels {
        let mut sets = Vec::new();
        let mut supports = Vec::new();
        for w in &spec.wod_sets {
            sets.push((FloatSide::new(spec, w.winners), FloatSide::new(spec, w.losers)));
            supports.push(FloatSide::new(spec, w.support));
        }
        FloatKernels { spec: spec.clone(), sets, supports, lnfact: LnFact::new() }
    }
}

impl KernelSource<f64> for FloatKernels {
    fn row(&mut self, n: usize) -> Kernel<f64> {
        debug_assert!(n >= 2);
        self.lnfact.ensure(n);
        let mut win_weight = vec![0.0f64; n];
        let lf_n = self.lnfact.get(n);
        for (winner, loser) in &self.sets {
            if winner.size + loser.size > n {
                // Fewer players than hands in the support: every j misses.
                continue;
            }
            for j in 1..n {
                if j < winner.size || n - j < loser.size {
                    continue;
                }
                let qw = winner.q(j);
                let qd = loser.q(n - j);
                if qw == 0.0 || qd == 0.0 {
                    continue;
                }
                let ln_term = lf_n - self.lnfact.get(j) - self.lnfact.get(n - j)
                    + j as f64 * winner.ln_mass
                    + (n - j) as f64 * loser.ln_mass;
                win_weight[j] += ln_term.exp() * qw * qd;
            }
        }
        let no_tie = self.no_tie(n);
        let tie = (1.0 - no_tie).max(0.0);
        Kernel { n, win_weight, tie_prob: tie, no_tie_prob: no_tie }
    }

    fn no_tie(&mut self, n: usize) -> f64 {
        debug_assert!(n >= 2);
        let mut acc = 0.0;
        for s in &self.supports {
            if n < s.size {
                continue;
            }
            acc += (n as f64 * s.ln_mass).exp() * s.q(n);
        }
        acc.min(1.0)
    }

    fn support_prob(&mut self, support: HandSet, n: usize) -> f64 {
        if n < support.len() {
            return 0.0;
        }
        let side = FloatSide::new(&self.spec, support);
        (n as f64 * side.ln_mass).exp() * side.q(n)
    }
}

impl Scalar for BigRational {
    const MODE: NumericMode = NumericMode::Rational;
    type Kernels = RationalKernels;

    fn kernels(spec: &GameSpec) -> RationalKernels {
        RationalKernels::new(spec)
    }
    fn from_usize(v: usize) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float;
    type Kernels = FloatKernels;

    fn kernels(spec: &GameSpec) -> FloatKernels {
        FloatKernels::new(spec)
    }
    fn from_usize(v: usize) -> Self {
        v as f64
    }
    fn from_ratio(r: &BigRational) -> Self {
        rat_to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}
