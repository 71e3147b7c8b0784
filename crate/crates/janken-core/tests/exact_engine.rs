//! Cross-checks of the recurrence engine against an independent
//! absorbing-chain oracle and against closed forms, in exact arithmetic.

mod common;

use common::oracle::{geometric_moment_series, support_prob_brute, ChainOracle};
use common::rat;
use num::{BigRational, One, Zero};
use proptest::prelude::*;

use janken_core::builtins::builtin_game;
use janken_core::exact::{
    build_tables, geometric_raw_moment, kernel, no_tie_prob, support_prob, CdfLevels,
    TableRequest,
};
use janken_core::{DominanceGraph, GameSpec, HandSet};

fn request(horizon: usize, cdf: CdfLevels) -> TableRequest {
    TableRequest { horizon, moment_order: 2, cdf, budget: None }
}

#[test]
fn recurrence_tables_match_the_absorbing_chain_oracle() {
    for name in ["ctls", "graph1", "graph2", "graph3", "graph4", "graph5"] {
        let game = builtin_game(name).unwrap();
        let oracle = ChainOracle::build(&game, 6);
        let t = build_tables::<BigRational>(&game, &request(6, CdfLevels::Fixed(12))).unwrap();
        let var = t.var.as_ref().unwrap();
        let y_var = t.y_var.as_ref().unwrap();
        let cdf = t.cdf.as_ref().unwrap();
        let mu_o = oracle.expected_rounds();
        let var_o = oracle.variance_rounds();
        let y_o = oracle.y_mean();
        let yv_o = oracle.y_variance();
        let z_o = oracle.z_mean();
        for n in 2..=6usize {
            assert_eq!(t.mu[n], mu_o[n - 2], "{name} mean rounds at n={n}");
            assert_eq!(var[n], var_o[n - 2], "{name} round variance at n={n}");
            assert_eq!(t.y_mean[n], y_o[n - 2], "{name} mean hands at n={n}");
            assert_eq!(y_var[n], yv_o[n - 2], "{name} hands variance at n={n}");
            assert_eq!(t.z_mean[n], z_o[n - 2], "{name} conclusive rounds at n={n}");
            let cdf_o = oracle.round_count_cdf(n, 12);
            for ell in 0..=12usize {
                assert_eq!(cdf.rows[ell][n], cdf_o[ell], "{name} F_{ell}({n})");
            }
        }
    }
}

#[test]
fn world_games_match_the_oracle() {
    for name in ["world-germany", "world-malaysia", "world-china"] {
        let game = builtin_game(name).unwrap();
        let oracle = ChainOracle::build(&game, 5);
        let t = build_tables::<BigRational>(&game, &request(5, CdfLevels::None)).unwrap();
        let var = t.var.as_ref().unwrap();
        let mu_o = oracle.expected_rounds();
        let var_o = oracle.variance_rounds();
        let z_o = oracle.z_mean();
        for n in 2..=5usize {
            assert_eq!(t.mu[n], mu_o[n - 2], "{name} mean rounds at n={n}");
            assert_eq!(var[n], var_o[n - 2], "{name} round variance at n={n}");
            assert_eq!(t.z_mean[n], z_o[n - 2], "{name} conclusive rounds at n={n}");
        }
    }
}

#[test]
fn kernel_rows_match_brute_enumeration() {
    for name in ["graph4", "world-germany"] {
        let game = builtin_game(name).unwrap();
        let oracle = ChainOracle::build(&game, 5);
        for k in 2..=5usize {
            let row = kernel::<BigRational>(&game, k);
            let law = &oracle.laws[k - 2];
            for j in 1..k {
                assert_eq!(row.win_weight[j], law.to[j], "{name} weight {k}->{j}");
            }
            assert_eq!(row.tie_prob, law.to[k], "{name} tie at {k}");
            assert_eq!(
                row.no_tie_prob,
                BigRational::one() - law.to[k].clone(),
                "{name} conclusive probability at {k}"
            );
        }
    }
}

#[test]
fn support_probability_matches_brute_enumeration() {
    let game = builtin_game("world-germany").unwrap();
    let supports = [
        HandSet::from_hands([0]),
        HandSet::from_hands([1, 2]),
        HandSet::from_hands([0, 3]),
        HandSet::from_hands([0, 1, 2]),
        HandSet::from_hands([0, 1, 2, 3]),
    ];
    for support in supports {
        for n in 1..=5usize {
            let engine = support_prob::<BigRational>(&game, support, n).unwrap();
            assert_eq!(engine, support_prob_brute(&game, support, n), "{support} n={n}");
        }
    }
}

#[test]
fn three_hand_clique_kernel_has_its_closed_form() {
    // Uniform transitive 3-clique: weight onto j survivors is
    // C(n,j) (2^(n-j) + 1) / 3^n and the tie probability is 3^(1-n).
    let game = builtin_game("graph2").unwrap();
    for n in 2..=9usize {
        let row = kernel::<BigRational>(&game, n);
        let three_pow = num::pow::pow(rat(1, 3), n);
        let mut binom = BigRational::one();
        for j in 1..n {
            binom = binom * rat((n - j + 1) as i64, 1) / rat(j as i64, 1);
            let expect = binom.clone()
                * (num::pow::pow(rat(2, 1), n - j) + BigRational::one())
                * three_pow.clone();
            assert_eq!(row.win_weight[j], expect, "n={n} j={j}");
        }
        assert_eq!(row.tie_prob, num::pow::pow(rat(1, 3), n - 1));
    }
}

#[test]
fn star_games_share_the_biased_coin_law() {
    // One hand dominating the other two: conclusive probability
    // 1 - (2^n + 1)/3^n; the chain game shares the law exactly.
    let star = builtin_game("graph3").unwrap();
    let chain = builtin_game("graph5").unwrap();
    for n in 2..=12usize {
        let expect = BigRational::one()
            - (num::pow::pow(rat(2, 1), n) + BigRational::one()) * num::pow::pow(rat(1, 3), n);
        assert_eq!(no_tie_prob::<BigRational>(&star, n), expect, "n={n}");
        assert_eq!(no_tie_prob::<BigRational>(&chain, n), expect, "n={n}");
    }
    for n in 2..=9usize {
        let a = kernel::<BigRational>(&star, n);
        let b = kernel::<BigRational>(&chain, n);
        assert_eq!(a.win_weight, b.win_weight, "n={n}");
        assert_eq!(a.tie_prob, b.tie_prob, "n={n}");
    }
}

#[test]
fn exp_game_no_tie_approaches_its_leading_law() {
    // For the three-hand cycle, varpi_n / (3 (2/3)^n) -> 1.
    let game = builtin_game("rpsls").unwrap();
    let varpi = no_tie_prob::<BigRational>(&game, 20);
    let lead = rat(3, 1) * num::pow::pow(rat(2, 3), 20);
    let ratio = janken_core::rat_to_f64(&(varpi / lead));
    assert!((ratio - 1.0).abs() <= 0.01, "ratio {ratio}");
}

#[test]
fn float_tables_track_rational_tables() {
    let game = builtin_game("rpsls").unwrap();
    let exact = build_tables::<BigRational>(&game, &request(24, CdfLevels::None)).unwrap();
    let float = build_tables::<f64>(&game, &request(24, CdfLevels::None)).unwrap();
    for n in 2..=24usize {
        for (a, b, what) in [
            (&exact.mu[n], &float.mu[n], "mu"),
            (&exact.y_mean[n], &float.y_mean[n], "y_mean"),
            (&exact.z_mean[n], &float.z_mean[n], "z_mean"),
            (&exact.var.as_ref().unwrap()[n], &float.var.as_ref().unwrap()[n], "var"),
        ] {
            let a = janken_core::rat_to_f64(a);
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{what} at n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn automatic_cdf_depth_covers_the_tail() {
    // Log game.
    let coin = builtin_game("ctls").unwrap();
    let t = build_tables::<BigRational>(&coin, &request(64, CdfLevels::Auto)).unwrap();
    let cdf = t.cdf.unwrap();
    let tail = BigRational::one() - cdf.rows[cdf.levels][64].clone();
    assert!(janken_core::rat_to_f64(&tail) <= 1e-9, "coin tail {tail}");
    // Exp game: varpi shrinks with n, the bound still holds.
    let cycle = builtin_game("rpsls").unwrap();
    let t = build_tables::<BigRational>(&cycle, &request(8, CdfLevels::Auto)).unwrap();
    let cdf = t.cdf.unwrap();
    let tail = BigRational::one() - cdf.rows[cdf.levels][8].clone();
    assert!(janken_core::rat_to_f64(&tail) <= 1e-9, "cycle tail {tail}");
}

#[test]
fn raw_moments_are_nondecreasing_in_the_order() {
    // X >= 1, so E(X^k) grows with k.
    let game = builtin_game("rpsls").unwrap();
    let req = TableRequest { horizon: 10, moment_order: 3, cdf: CdfLevels::None, budget: None };
    let t = build_tables::<BigRational>(&game, &req).unwrap();
    for n in 2..=10usize {
        for k in 1..3usize {
            assert!(t.moments[n][k] <= t.moments[n][k + 1], "n={n} k={k}");
        }
    }
}

#[test]
fn cdf_rows_are_monotone_and_bounded() {
    let game = builtin_game("ctls").unwrap();
    let t = build_tables::<BigRational>(&game, &request(32, CdfLevels::Fixed(20))).unwrap();
    let cdf = t.cdf.unwrap();
    for n in 1..=32usize {
        let mut prev = BigRational::zero();
        for ell in 0..=20usize {
            let v = cdf.rows[ell][n].clone();
            assert!(v >= prev, "F must be nondecreasing in ell at n={n}");
            assert!(v <= BigRational::one());
            prev = v;
        }
    }
}

#[test]
fn geometric_moments_match_direct_series() {
    for (num_, den) in [(1i64, 2i64), (2, 3), (1, 5), (9, 10)] {
        let q = rat(num_, den);
        let qf = num_ as f64 / den as f64;
        for k in 1..=4usize {
            let exact = janken_core::rat_to_f64(&geometric_raw_moment::<BigRational>(&q, k));
            let series = geometric_moment_series(qf, k as u32);
            assert!(
                (exact - series).abs() <= 1e-10 * series,
                "q={q} k={k}: {exact} vs {series}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Any uniform dominance-graph game the derivation accepts agrees with
    /// the absorbing-chain oracle on exact means and conclusive counts.
    #[test]
    fn random_dominance_games_match_the_oracle(
        m in 2usize..=4,
        edge_bits in 0u16..64,
    ) {
        // Lower-triangular edge selection keeps the graph acyclic.
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..m {
            for j in (i + 1)..m {
                if edge_bits & (1 << bit) != 0 {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        prop_assume!(!edges.is_empty());
        let graph = DominanceGraph::new(m, edges).unwrap();
        let game = match GameSpec::from_dominance_graph(&graph, GameSpec::uniform_probs(m)) {
            Ok(g) => g,
            Err(_) => return Ok(()), // sparse graphs may yield no binary set
        };
        let oracle = ChainOracle::build(&game, 5);
        let t = build_tables::<BigRational>(&game, &request(5, CdfLevels::None)).unwrap();
        let mu_o = oracle.expected_rounds();
        let z_o = oracle.z_mean();
        for n in 2..=5usize {
            prop_assert_eq!(&t.mu[n], &mu_o[n - 2], "mean rounds at n={}", n);
            prop_assert_eq!(&t.z_mean[n], &z_o[n - 2], "conclusive rounds at n={}", n);
        }
    }
}
