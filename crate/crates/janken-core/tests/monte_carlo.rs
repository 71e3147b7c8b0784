//! Simulator checks: determinism, agreement between the two execution
//! modes, agreement with the exact tables, and distributional limits.

mod common;

use proptest::prelude::*;

use janken_core::builtins::builtin_game;
use janken_core::exact::{build_tables, CdfLevels, TableRequest};
use janken_core::sim::{
    ks_exp1, ks_normal, semicircle_game, simulate, SimConfig, SimMode, SimSummary,
};
use janken_core::{rat_to_f64, SimError};
use num::BigRational;

fn config(n: usize, trials: u64, seed: u64, mode: SimMode) -> SimConfig {
    SimConfig { n, trials, seed, mode, ..Default::default() }
}

fn run(name: &str, cfg: &SimConfig) -> SimSummary {
    simulate(&builtin_game(name).unwrap(), cfg).unwrap()
}

/// Two samplings differ by at most four combined standard errors.
fn close(a: (f64, f64), b: (f64, f64), what: &str) {
    let band = 4.0 * (a.1 * a.1 + b.1 * b.1).sqrt();
    assert!((a.0 - b.0).abs() <= band, "{what}: {} vs {} (band {band})", a.0, b.0);
}

#[test]
fn identical_seeds_reproduce_identical_summaries() {
    let a = run("rpsls", &config(6, 2_000, 9, SimMode::PerRound));
    let b = run("rpsls", &config(6, 2_000, 9, SimMode::PerRound));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.samples, b.samples);
    let c = run("rpsls", &config(6, 2_000, 10, SimMode::PerRound));
    assert_ne!(a.samples, c.samples, "a different seed must move the stream");
    // Fast-forward is deterministic too.
    let d = run("rpsls", &config(6, 2_000, 9, SimMode::FastForward));
    let e = run("rpsls", &config(6, 2_000, 9, SimMode::FastForward));
    assert_eq!(d.samples, e.samples);
}

#[test]
fn per_round_and_fast_forward_sample_the_same_law() {
    for n in [4usize, 8] {
        let pr = run("rpsls", &config(n, 30_000, 1, SimMode::PerRound));
        let ff = run("rpsls", &config(n, 30_000, 2, SimMode::FastForward));
        close((pr.x.mean, pr.x.std_error), (ff.x.mean, ff.x.std_error), "rounds");
        close((pr.y.mean, pr.y.std_error), (ff.y.mean, ff.y.std_error), "hands");
        close((pr.z.mean, pr.z.std_error), (ff.z.mean, ff.z.std_error), "conclusive");
    }
}

#[test]
fn simulation_tracks_the_exact_tables() {
    let req = TableRequest { horizon: 6, moment_order: 1, cdf: CdfLevels::None, budget: None };
    for name in ["ctls", "graph2", "graph4", "rpsls", "world-germany"] {
        let game = builtin_game(name).unwrap();
        let t = build_tables::<BigRational>(&game, &req).unwrap();
        for n in [3usize, 6] {
            let s = simulate(&game, &config(n, 20_000, 7, SimMode::FastForward)).unwrap();
            for (stat, exact, what) in [
                (&s.x.mean, rat_to_f64(&t.mu[n]), "rounds"),
                (&s.y.mean, rat_to_f64(&t.y_mean[n]), "hands"),
                (&s.z.mean, rat_to_f64(&t.z_mean[n]), "conclusive"),
            ] {
                let band = match what {
                    "rounds" => 4.0 * s.x.std_error,
                    "hands" => 4.0 * s.y.std_error,
                    _ => 4.0 * s.z.std_error,
                };
                assert!(
                    (stat - exact).abs() <= band,
                    "{name} n={n} {what}: {stat} vs {exact} (band {band})"
                );
            }
        }
    }
}

#[test]
fn scaled_exp_game_rounds_converge_to_the_unit_exponential() {
    // nu rho^n X_n -> Exp(1) for the three-hand cycle. The descent after
    // the first conclusive round biases the mean by roughly mu_{n/2}
    // rounds, which shrinks like (2/3)^(n/2); n = 20 puts it near 0.02.
    let s = run("rpsls", &config(20, 5_000, 3, SimMode::FastForward));
    let scale = 3.0 * (2f64 / 3.0).powi(20);
    let scaled: Vec<f64> = s.samples.iter().map(|t| t.x as f64 * scale).collect();
    let ks = ks_exp1(&scaled);
    assert!(ks < 0.05, "ks {ks}");
    // A wrong scale is clearly separated.
    let wrong: Vec<f64> = scaled.iter().map(|x| 2.0 * x).collect();
    assert!(ks_exp1(&wrong) > 0.1);
}

#[test]
fn coin_game_hand_totals_look_normal_at_scale() {
    let s = run("ctls", &config(1024, 1_500, 4, SimMode::FastForward));
    let ys: Vec<f64> = s.samples.iter().map(|t| t.y as f64).collect();
    assert!(ks_normal(&ys) < 0.06);
}

#[test]
fn round_cap_reports_nontermination() {
    let cfg = SimConfig {
        n: 10,
        trials: 50,
        seed: 0,
        mode: SimMode::PerRound,
        round_cap: 3,
    };
    let err = simulate(&builtin_game("rpsls").unwrap(), &cfg).unwrap_err();
    assert!(matches!(err, SimError::NonTerminating { .. }), "{err}");
}

#[test]
fn semicircle_repetitions_match_the_closed_form() {
    // Success probability n/2^(n-1): at n=5 the mean repetition count
    // before the first success is 16/5 - 1 = 2.2.
    let s = semicircle_game(5, 20_000, 11).unwrap();
    assert!(
        (s.repetitions.mean - 2.2).abs() <= 4.0 * s.repetitions.std_error,
        "mean {} se {}",
        s.repetitions.mean,
        s.repetitions.std_error
    );
    // Deterministic under the seed.
    let again = semicircle_game(5, 20_000, 11).unwrap();
    assert_eq!(s.samples, again.samples);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Per-trial accounting always holds: conclusive rounds never exceed
    /// rounds, at least one round concludes, and every round shows at
    /// least two hands.
    #[test]
    fn accounting_invariants_hold_for_any_seed(seed in 0u64..1_000) {
        let s = run("world-germany", &config(5, 200, seed, SimMode::PerRound));
        for t in &s.samples {
            prop_assert!(t.z >= 1);
            prop_assert!(t.z <= t.x);
            prop_assert!(t.y >= 2 * t.x);
            prop_assert!(t.y <= 5 * t.x);
        }
        let f = run("world-germany", &config(5, 200, seed, SimMode::FastForward));
        for t in &f.samples {
            prop_assert!(t.z >= 1 && t.z <= t.x && t.y >= 2 * t.x && t.y <= 5 * t.x);
        }
    }
}
