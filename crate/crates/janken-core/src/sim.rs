//! Seeded simulation of the selection process.
//!
//! Trials are reproducible and schedule-independent: trial i draws from a
//! ChaCha8 stream keyed by the run seed with stream number i, so the same
//! (seed, trial) pair produces identical randomness regardless of trial
//! order or mode interleaving. Per-round mode plays every round literally.
//! Fast-forward mode samples, at each live size k, the geometric number of
//! rounds spent at k from the no-tie probability and the destination size
//! from the kernel row, skipping the tied rounds; for exp games that
//! replaces O(rho^-n) rounds by at most n-1 transitions.
//!
//! Recorded per trial: X = rounds played, Y = hands shown (the live player
//! count summed over rounds, ties included), Z = conclusive rounds.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::game::GameSpec;
use crate::hands::HandSet;
use crate::ratutil::rat_to_f64;
use crate::scalar::{KernelSource, Scalar};

/// How rounds are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimMode {
    PerRound,
    FastForward,
}

impl std::fmt::Display for SimMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimMode::PerRound => write!(f, "per-round"),
            SimMode::FastForward => write!(f, "fast-forward"),
        }
    }
}

/// Simulation parameters.
#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    /// Starting number of players.
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub mode: SimMode,
    /// Abort a trial after this many (effective) rounds.
    pub round_cap: u64,
}

impl Default for SimConfig {
    fn default() -> SimConfig {
        SimConfig { n: 8, trials: 10_000, seed: 0, mode: SimMode::PerRound, round_cap: 1_000_000_000 }
    }
}

/// One trial's record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

/// Sample mean, unbiased sample variance, and the standard error of the mean.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeasureStats {
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

fn stats_over(samples: &[TrialOutcome], pick: impl Fn(&TrialOutcome) -> u64) -> MeasureStats {
    let n = samples.len() as f64;
    let mean = samples.iter().map(|t| pick(t) as f64).sum::<f64>() / n;
    let variance = if samples.len() < 2 {
        0.0
    } else {
        samples.iter().map(|t| (pick(t) as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    };
    MeasureStats { mean, variance, std_error: (variance / n).sqrt() }
}

/// Everything a run produced.
#[derive(Debug, Clone, Serialize)]
pub struct SimSummary {
    pub config: SimConfig,
    pub x: MeasureStats,
    pub y: MeasureStats,
    pub z: MeasureStats,
    /// Total tied rounds across all trials (x - z summed).
    pub tie_rounds_total: u64,
    #[serde(skip)]
    pub samples: Vec<TrialOutcome>,
}

impl SimSummary {
    fn from_samples(config: SimConfig, samples: Vec<TrialOutcome>) -> SimSummary {
        SimSummary {
            x: stats_over(&samples, |t| t.x),
            y: stats_over(&samples, |t| t.y),
            z: stats_over(&samples, |t| t.z),
            tie_rounds_total: samples.iter().map(|t| t.x - t.z).sum(),
            config,
            samples,
        }
    }
}

fn cumulative_probs(spec: &GameSpec) -> Vec<f64> {
    let mut cum = Vec::with_capacity(spec.m);
    let mut acc = 0.0;
    for p in &spec.probs {
        acc += rat_to_f64(p);
        cum.push(acc);
    }
    // Guard the final bucket against rounding shortfall.
    if let Some(last) = cum.last_mut() {
        *last = 1.0;
    }
    cum
}

fn draw_hand<R: Rng + ?Sized>(cum: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

fn play_round_with<R: Rng + ?Sized>(
    spec: &GameSpec,
    counts: &mut [u64],
    rng: &mut R,
    cum: &[f64],
) -> bool {
    let total: u64 = counts.iter().sum();
    let mut drawn = vec![0u64; spec.m];
    for _ in 0..total {
        drawn[draw_hand(cum, rng)] += 1;
    }
    let support = HandSet::from_hands((0..spec.m).filter(|&h| drawn[h] > 0));
    match spec.wod_for_support(support) {
        Some(wod) => {
            for (h, c) in counts.iter_mut().enumerate() {
                *c = if wod.winners.contains(h) { drawn[h] } else { 0 };
            }
            true
        }
        None => false,
    }
}

/// Play one round: every remaining player redraws a hand; if the realized
/// support has a WOD set, the holders of winner hands survive and the new
/// counts are written back; otherwise counts stay as they were. Returns
/// whether the round was conclusive.
pub fn play_round<R: Rng + ?Sized>(spec: &GameSpec, counts: &mut [u64], rng: &mut R) -> bool {
    let cum = cumulative_probs(spec);
    play_round_with(spec, counts, rng, &cum)
}

fn run_per_round<R: Rng + ?Sized>(
    spec: &GameSpec,
    cfg: &SimConfig,
    cum: &[f64],
    rng: &mut R,
    trial: u64,
) -> Result<TrialOutcome, SimError> {
    let mut counts = vec![0u64; spec.m];
    counts[0] = cfg.n as u64;
    let mut out = TrialOutcome { x: 0, y: 0, z: 0 };
    let mut live = cfg.n as u64;
    while live > 1 {
        if out.x >= cfg.round_cap {
            return Err(SimError::NonTerminating { trial, cap: cfg.round_cap });
        }
        let conclusive = play_round_with(spec, &mut counts, rng, cum);
        out.x += 1;
        out.y += live;
        if conclusive {
            out.z += 1;
            live = counts.iter().sum();
        }
    }
    Ok(out)
}

struct FfRow {
    /// Prefix sums of win_weight[1..k], for destination sampling.
    cum_weights: Vec<f64>,
    total: f64,
    varpi: f64,
}

/// Fast-forward engine: kernel rows are built lazily per live size and
/// cached across trials.
struct FastForwarder {
    src: <f64 as Scalar>::Kernels,
    rows: HashMap<usize, FfRow>,
}

impl FastForwarder {
    fn new(spec: &GameSpec) -> FastForwarder {
        FastForwarder { src: f64::kernels(spec), rows: HashMap::new() }
    }

    fn row(&mut self, k: usize) -> &FfRow {
        let src = &mut self.src;
        self.rows.entry(k).or_insert_with(|| {
            let kern = src.row(k);
            let mut cum_weights = Vec::with_capacity(k.saturating_sub(1));
            let mut acc = 0.0;
            for j in 1..k {
                acc += kern.win_weight[j];
                cum_weights.push(acc);
            }
            FfRow { cum_weights, total: acc, varpi: kern.no_tie_prob }
        })
    }

    fn run<R: Rng + ?Sized>(
        &mut self,
        cfg: &SimConfig,
        rng: &mut R,
        trial: u64,
    ) -> Result<TrialOutcome, SimError> {
        let mut out = TrialOutcome { x: 0, y: 0, z: 0 };
        let mut k = cfg.n;
        while k > 1 {
            let row = self.row(k);
            if row.total <= 0.0 || row.varpi <= 0.0 {
                return Err(SimError::NonTerminating { trial, cap: cfg.round_cap });
            }
            // Rounds spent at size k: geometric with success varpi.
            let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
            let ln_fail = (-row.varpi).ln_1p();
            let t = (u.ln() / ln_fail).ceil().max(1.0);
            if !t.is_finite() || t > (cfg.round_cap - out.x) as f64 {
                return Err(SimError::NonTerminating { trial, cap: cfg.round_cap });
            }
            let t = t as u64;
            out.x += t;
            out.y += k as u64 * t;
            out.z += 1;
            // Destination size, proportional to the conclusive weights.
            let target = rng.random::<f64>() * row.total;
            let idx = row.cum_weights.partition_point(|&c| c <= target);
            k = (idx + 1).min(k - 1);
        }
        Ok(out)
    }
}

/// Run the full set of trials. Trials are independent and identically
/// seeded by (seed, trial index); errors abort the run at the offending
/// trial.
pub fn simulate(spec: &GameSpec, cfg: &SimConfig) -> Result<SimSummary, SimError> {
    let cum = cumulative_probs(spec);
    let mut ff =
        (cfg.mode == SimMode::FastForward).then(|| FastForwarder::new(spec));
    let mut samples = Vec::with_capacity(cfg.trials as usize);
    for trial in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial);
        let outcome = match ff.as_mut() {
            None => run_per_round(spec, cfg, &cum, &mut rng, trial)?,
            Some(ff) => ff.run(cfg, &mut rng, trial)?,
        };
        samples.push(outcome);
    }
    Ok(SimSummary::from_samples(cfg.clone(), samples))
}

/// Kolmogorov-Smirnov distance between the sample and the Exp(1) CDF.
pub fn ks_exp1(samples: &[f64]) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in s.iter().enumerate() {
        let f = -(-x).exp_m1(); // 1 - e^-x without cancellation near 0
        d = d.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    d
}

/// Standard normal CDF.
pub fn phi(z: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / std::f64::consts::SQRT_2))
}

/// Kolmogorov-Smirnov distance between the standardized sample (by its own
/// mean and standard deviation) and the standard normal CDF.
pub fn ks_normal(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sd = var.sqrt();
    let mut s: Vec<f64> = samples.iter().map(|x| (x - mean) / sd).collect();
    s.sort_by(f64::total_cmp);
    let mut d = 0.0f64;
    for (i, z) in s.iter().enumerate() {
        let f = phi(*z);
        d = d.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    d
}

/// Result of the semicircle pointing game.
#[derive(Debug, Clone, Serialize)]
pub struct SemicircleSummary {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// Statistics of the repetition count before the first success.
    pub repetitions: MeasureStats,
    #[serde(skip)]
    pub samples: Vec<u64>,
}

fn semicircle_conclusive<R: Rng + ?Sized>(n: usize, rng: &mut R) -> bool {
    // n arms at uniform angles are all inside some half circle iff the
    // largest circular gap between consecutive angles is at least half a
    // turn.
    let mut angles: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    angles.sort_by(f64::total_cmp);
    let mut max_gap = angles[0] + 1.0 - angles[n - 1];
    for w in angles.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    max_gap >= 0.5
}

/// Players point at random directions until all arms fall in a common half
/// circle; each trial records how many repetitions happen before the first
/// success. A round succeeds with probability n/2^(n-1), so the expected
/// repetition count is 2^(n-1)/n - 1.
pub fn semicircle_game(n: usize, trials: u64, seed: u64) -> Result<SemicircleSummary, SimError> {
    assert!(n >= 1, "the pointing game needs at least one player");
    let cap: u64 = 1_000_000_000;
    let mut samples = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut reps = 0u64;
        while !semicircle_conclusive(n, &mut rng) {
            reps += 1;
            if reps >= cap {
                return Err(SimError::NonTerminating { trial, cap });
            }
        }
        samples.push(reps);
    }
    let outcomes: Vec<TrialOutcome> =
        samples.iter().map(|&r| TrialOutcome { x: r, y: 0, z: 0 }).collect();
    Ok(SemicircleSummary {
        n,
        trials,
        seed,
        repetitions: stats_over(&outcomes, |t| t.x),
        samples,
    })
}
