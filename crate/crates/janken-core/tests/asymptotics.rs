//! Leading-order laws against the exact tables: growth rates, periodic
//! residuals, limit distributions, and slope arithmetic.

mod common;

use common::rat;
use num::BigRational;

use janken_core::asym::{
    fluctuation_profile, limit_cdf_acyclic_clique, limit_cdf_unbiased_ctls, predict,
    tie_free_slope, Quantity,
};
use janken_core::builtins::builtin_game;
use janken_core::exact::{build_tables, CdfLevels, TableRequest};
use janken_core::{rat_to_f64, GameKind};

fn mean_only(horizon: usize, cdf: CdfLevels) -> TableRequest {
    TableRequest { horizon, moment_order: 1, cdf, budget: None }
}

#[test]
fn log_game_hand_totals_are_exactly_linear() {
    // For the fair coin game the predictor's n/(1 - alpha) = 2n is not
    // just leading order: the rational tables meet it exactly.
    let game = builtin_game("ctls").unwrap();
    let t = build_tables::<BigRational>(&game, &mean_only(50, CdfLevels::None)).unwrap();
    let class = game.classify();
    for n in 2..=50usize {
        assert_eq!(t.y_mean[n], rat(2 * n as i64, 1), "n={n}");
        let p = predict(&class, Quantity::YMean, n as u64).unwrap();
        assert_eq!(p.leading, 2.0 * n as f64);
    }
}

#[test]
fn exp_game_mean_prediction_tracks_the_exact_mean() {
    let game = builtin_game("rpsls").unwrap();
    let t = build_tables::<BigRational>(&game, &mean_only(25, CdfLevels::None)).unwrap();
    let class = game.classify();
    let p = predict(&class, Quantity::XMean, 20).unwrap();
    let exact = rat_to_f64(&t.mu[20]);
    assert!((p.leading / exact - 1.0).abs() <= 0.05, "{} vs {exact}", p.leading);

    // mu_n * nu * rho^n climbs toward 1: the relative gap shrinks with n.
    let scale = |n: usize| 3.0 * (2f64 / 3.0).powi(n as i32) * rat_to_f64(&t.mu[n]);
    let (r20, r25) = (scale(20), scale(25));
    assert!(r25 >= r20 - 0.02, "{r20} -> {r25}");
    assert!((r25 - 1.0).abs() <= (r20 - 1.0).abs() + 0.02);
    assert!(r20 < 1.2 && r25 < 1.2);
}

#[test]
fn coin_game_mean_oscillates_tightly_around_its_refined_term() {
    let game = builtin_game("ctls").unwrap();
    let t = build_tables::<f64>(&game, &mean_only(3000, CdfLevels::None)).unwrap();
    // Against the pure leading term the residual is essentially the
    // absorbed constant; its spread over a window is what's tiny.
    let pure = fluctuation_profile(&t.mu, 2048, 3000, 0.5, |n| n.log2());
    assert!(pure.centered_amplitude() <= 0.05, "{}", pure.centered_amplitude());
    assert!((pure.mean_residual() - 0.5).abs() <= 0.05, "{}", pure.mean_residual());
    // Against the refined term the whole residual is small.
    let refined = fluctuation_profile(&t.mu, 2048, 3000, 0.5, |n| n.log2() + 0.5);
    assert!(refined.amplitude <= 1e-2, "{}", refined.amplitude);
    for &(phase, _) in &pure.points {
        assert!((0.0..1.0).contains(&phase));
    }
}

#[test]
fn coin_game_round_cdf_approaches_its_limit_law() {
    let game = builtin_game("ctls").unwrap();
    let t = build_tables::<f64>(&game, &mean_only(256, CdfLevels::Fixed(28))).unwrap();
    let cdf = t.cdf.unwrap();
    // n = 256 = 2^8: compare F_{8+ell}(256) to the limit at offset ell.
    let mut worst = 0.0f64;
    for ell in -2i64..=20 {
        let level = (8 + ell) as usize;
        let gap = (cdf.rows[level][256] - limit_cdf_unbiased_ctls(256, ell)).abs();
        worst = worst.max(gap);
    }
    assert!(worst <= 0.02, "worst gap {worst}");
}

#[test]
fn clique_round_cdf_approaches_the_same_limit_with_base_three() {
    let game = builtin_game("graph2").unwrap();
    let t = build_tables::<f64>(&game, &mean_only(243, CdfLevels::Fixed(25))).unwrap();
    let cdf = t.cdf.unwrap();
    // n = 243 = 3^5.
    let mut worst = 0.0f64;
    for ell in -2i64..=18 {
        let level = (5 + ell) as usize;
        let gap = (cdf.rows[level][243] - limit_cdf_acyclic_clique(3, 243, ell)).abs();
        worst = worst.max(gap);
    }
    assert!(worst <= 0.03, "worst gap {worst}");
}

#[test]
fn conclusive_round_counts_grow_with_the_harmonic_slope() {
    // Exp game: h = 1/ln 2 for the three-hand cycle, so doubling n adds
    // h ln 2 = 1 conclusive round in the limit.
    let game = builtin_game("rpsls").unwrap();
    let t = build_tables::<f64>(&game, &mean_only(1024, CdfLevels::None)).unwrap();
    let gap = t.z_mean[1024] - t.z_mean[512];
    assert!((gap - 1.0).abs() <= 0.05, "gap {gap}");

    // Log game: one hand dominating two others is a biased coin with
    // alpha = 1/3, h = 1/ln 3; tripling n adds one conclusive round.
    let game = builtin_game("graph3").unwrap();
    let t = build_tables::<f64>(&game, &mean_only(729, CdfLevels::None)).unwrap();
    let gap = t.z_mean[729] - t.z_mean[243];
    assert!((gap - 1.0).abs() <= 0.05, "gap {gap}");
}

#[test]
fn predictions_cover_every_builtin() {
    for name in ["ctls", "graph2", "graph3", "graph4", "graph5", "rpsls", "world-germany",
        "world-malaysia", "world-china"]
    {
        let class = builtin_game(name).unwrap().classify();
        for n in [2u64, 10, 100] {
            let x = predict(&class, Quantity::XMean, n).unwrap();
            assert!(x.leading.is_finite(), "{name} n={n}");
            if class.kind == GameKind::Exp {
                assert!(x.leading > 0.0, "{name} n={n}");
            }
            let y = predict(&class, Quantity::YMean, n).unwrap();
            assert!(y.leading.is_finite() && y.leading > 0.0, "{name} n={n}");
            let z = predict(&class, Quantity::ZMean, n).unwrap();
            assert!(z.leading.is_finite() && z.leading > 0.0, "{name} n={n}");
        }
    }
}

#[test]
fn slope_arithmetic_across_the_builtins() {
    // Well-rock-paper-scissors: both maximizer ratios are 3.
    let s = tie_free_slope(&builtin_game("world-germany").unwrap().classify());
    assert!(s.all_ratios_rational);
    assert_eq!(s.common_base, Some(rat(3, 1)));
    assert!((s.h_nu - 1.0 / 3f64.ln()).abs() <= 1e-12);

    // Five-hand bird-stone-pistol-plank-water: one maximizer, ratio 4,
    // primitive base 2.
    let s = tie_free_slope(&builtin_game("world-malaysia").unwrap().classify());
    assert!(s.all_ratios_rational);
    assert_eq!(s.common_base, Some(rat(2, 1)));

    // Gun-chicken-bug-stick-fox: three maximizers, all ratios 4.
    let s = tie_free_slope(&builtin_game("world-china").unwrap().classify());
    assert!(s.all_ratios_rational);
    assert_eq!(s.common_base, Some(rat(2, 1)));

    // Five-hand rotation game: all ratios 3 by symmetry.
    let s = tie_free_slope(&builtin_game("tournament?m=2").unwrap().classify());
    assert!(s.all_ratios_rational);
    assert_eq!(s.common_base, Some(rat(3, 1)));
}
