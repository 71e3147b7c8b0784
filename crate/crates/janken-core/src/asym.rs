//! Leading-order predictions and their empirical residuals.
//!
//! Everything here works from the classification alone. Log games (rho = 1)
//! thin out like iterated sampling: rounds grow like log_{1/alpha} n with a
//! bounded 1-periodic remainder, hands shown grow linearly, and the limit
//! law of the round count at offset ell from floor(log n) has the closed
//! form t/(e^t - 1). Exp games (rho < 1) stall: the no-tie probability
//! decays like nu rho^n, rounds grow like its reciprocal, and conclusive
//! rounds still grow logarithmically with slope h_nu. The predictors return
//! the pure leading term; refinements with known constants are applied by
//! passing a leading function into `fluctuation_profile`.

use num::{BigInt, BigRational, One, ToPrimitive};
use std::collections::BTreeMap;

use crate::game::{Classification, GameKind};
use crate::ratutil::{rat_ln, rat_to_f64};

/// What to predict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    XMean,
    XVar,
    YMean,
    YVar,
    ZMean,
    LimitCdf,
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Quantity::XMean => "x_mean",
            Quantity::XVar => "x_var",
            Quantity::YMean => "y_mean",
            Quantity::YVar => "y_var",
            Quantity::ZMean => "z_mean",
            Quantity::LimitCdf => "limit_cdf",
        };
        write!(f, "{name}")
    }
}

/// A leading-order prediction at one n.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub quantity: Quantity,
    /// The pure leading term.
    pub leading: f64,
    /// A sharper value where a constant-order refinement is known
    /// (currently the fair two-hand coin game's mean, log2 n + 1/2).
    pub correction: Option<f64>,
    /// Plain-language applicability note.
    pub validity: &'static str,
}

/// A quantity whose growth law does not apply to this game kind.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PredictError {
    #[error("no {quantity} prediction for {kind} games: {note}")]
    WrongKind { quantity: Quantity, kind: GameKind, note: &'static str },
}

fn is_fair_coin(class: &Classification) -> bool {
    class.kind == GameKind::Log
        && class.max_wod_sets[0].support.len() == 2
        && class.alpha.as_ref().is_some_and(|a| *a == BigRational::new(1.into(), 2.into()))
}

/// Leading-order value of a quantity at n players, from the classification
/// alone.
pub fn predict(class: &Classification, quantity: Quantity, n: u64) -> Result<Prediction, PredictError> {
    assert!(n >= 2, "predictions start at two players");
    let nf = n as f64;
    let h_log = class.h_nu * nf.ln();
    let wrong = |note| {
        Err(PredictError::WrongKind { quantity, kind: class.kind, note })
    };
    let p = match (class.kind, quantity) {
        (GameKind::Log, Quantity::XMean) => {
            let alpha = class.alpha.as_ref().expect("log games carry alpha");
            let leading = nf.ln() / -rat_ln(alpha);
            let correction = is_fair_coin(class).then(|| leading + 0.5);
            Prediction {
                quantity,
                leading,
                correction,
                validity: "mean rounds of a log game, up to a bounded 1-periodic term",
            }
        }
        (GameKind::Log, Quantity::XVar) => Prediction {
            quantity,
            leading: 0.0,
            correction: None,
            validity: "round-count variance of a log game stays bounded; no leading growth",
        },
        (GameKind::Log, Quantity::YMean) => {
            let alpha = rat_to_f64(class.alpha.as_ref().expect("log games carry alpha"));
            Prediction {
                quantity,
                leading: nf / (1.0 - alpha),
                correction: None,
                validity: "hands shown by a log game grow linearly",
            }
        }
        (GameKind::Log, Quantity::YVar) => {
            let alpha = rat_to_f64(class.alpha.as_ref().expect("log games carry alpha"));
            Prediction {
                quantity,
                leading: alpha * nf / (1.0 - alpha).powi(2),
                correction: None,
                validity: "hands-shown variance of a log game grows linearly",
            }
        }
        (GameKind::Exp, Quantity::XMean) => Prediction {
            quantity,
            leading: (-((class.nu as f64).ln() + nf * rat_ln(&class.rho))).exp(),
            correction: None,
            validity: "mean rounds of an exp game track the reciprocal no-tie probability",
        },
        (GameKind::Exp, Quantity::YMean) => Prediction {
            quantity,
            leading: nf * (-((class.nu as f64).ln() + nf * rat_ln(&class.rho))).exp(),
            correction: None,
            validity: "hands shown by an exp game are n per round at almost-full size",
        },
        (_, Quantity::ZMean) => Prediction {
            quantity,
            leading: h_log,
            correction: None,
            validity: "conclusive rounds grow logarithmically with the harmonic slope",
        },
        (GameKind::Exp, Quantity::XVar) => {
            return wrong("higher-moment laws are served through the raw-moment tables");
        }
        (GameKind::Exp, Quantity::YVar) => {
            return wrong("higher-moment laws are served through the raw-moment tables");
        }
        (_, Quantity::LimitCdf) => {
            return wrong("use limit_cdf_unbiased_ctls or limit_cdf_acyclic_clique");
        }
    };
    Ok(p)
}

/// Exact floor(log_base n) by integer arithmetic; never off by one at powers.
pub fn floor_log(base: u64, n: u64) -> u32 {
    debug_assert!(base >= 2 && n >= 1);
    let mut k = 0u32;
    let mut pow = 1u64;
    while pow <= n / base {
        pow *= base;
        k += 1;
    }
    // pow = base^k <= n < base^(k+1) except when n/base truncation hides a
    // final step; fix up directly.
    while pow.checked_mul(base).is_some_and(|next| next <= n) {
        pow *= base;
        k += 1;
    }
    k
}

fn limit_cdf(base: u64, n: u64, ell: i64) -> f64 {
    let k = floor_log(base, n) as f64;
    let ln_base = (base as f64).ln();
    // Fractional part of log_base n, computed against the exact integer
    // floor so that exact powers give exactly zero.
    let frac = ((n as f64).ln() - k * ln_base) / ln_base;
    let frac = frac.clamp(0.0, 1.0 - f64::EPSILON);
    let t = ((frac - ell as f64) * ln_base).exp();
    if t == 0.0 {
        return 1.0; // t -> 0 limit
    }
    if !t.is_finite() {
        return 0.0;
    }
    t / t.exp_m1()
}

/// Limit of P(X_n <= floor(log2 n) + ell) for the fair coin game:
/// t/(e^t - 1) with t = 2^({log2 n} - ell).
pub fn limit_cdf_unbiased_ctls(n: u64, ell: i64) -> f64 {
    assert!(n >= 2);
    limit_cdf(2, n, ell)
}

/// The same limit law for the uniform transitive clique on m hands:
/// t = m^({log_m n} - ell).
pub fn limit_cdf_acyclic_clique(m: usize, n: u64, ell: i64) -> f64 {
    assert!(m >= 2, "cliques need at least two hands");
    assert!(n >= 2);
    limit_cdf(m as u64, n, ell)
}

/// Residuals of an exact sequence against a leading-order law, indexed by
/// the phase of log_{1/alpha} n.
#[derive(Debug, Clone)]
pub struct FluctuationProfile {
    /// (fractional part of log_{1/alpha} n, sequence[n] - leading(n)).
    pub points: Vec<(f64, f64)>,
    /// max |residual| over the range.
    pub amplitude: f64,
}

impl FluctuationProfile {
    /// Mean residual over the range; estimates an absorbed additive
    /// constant.
    pub fn mean_residual(&self) -> f64 {
        self.points.iter().map(|&(_, r)| r).sum::<f64>() / self.points.len() as f64
    }

    /// max |residual - mean residual|: the amplitude after the constant is
    /// taken out.
    pub fn centered_amplitude(&self) -> f64 {
        let mean = self.mean_residual();
        self.points.iter().map(|&(_, r)| (r - mean).abs()).fold(0.0, f64::max)
    }
}

/// Compare an exact sequence (indexed by n) to a caller-supplied leading
/// function over n in [lo, hi], reporting residuals by phase.
pub fn fluctuation_profile(
    values: &[f64],
    lo: usize,
    hi: usize,
    alpha: f64,
    leading: impl Fn(f64) -> f64,
) -> FluctuationProfile {
    assert!(0.0 < alpha && alpha < 1.0, "phase needs 0 < alpha < 1");
    assert!(2 <= lo && lo <= hi && hi < values.len(), "range [{lo}, {hi}] out of bounds");
    let ln_inv_alpha = -(alpha.ln());
    let mut points = Vec::with_capacity(hi - lo + 1);
    let mut amplitude = 0.0f64;
    for n in lo..=hi {
        let x = (n as f64).ln() / ln_inv_alpha;
        let phase = x - x.floor();
        let residual = values[n] - leading(n as f64);
        amplitude = amplitude.max(residual.abs());
        points.push((phase, residual));
    }
    FluctuationProfile { points, amplitude }
}

/// The conclusive-round slope and the arithmetic nature of its remainder.
#[derive(Debug, Clone)]
pub struct TieFreeSlope {
    /// 1 / ((1/nu) sum ln(rho/alpha)).
    pub h_nu: f64,
    /// Whether every ratio ln(rho/alpha_j) / ln(rho/alpha_k) is rational,
    /// i.e. all rho/alpha_ell are integer powers of one common rational.
    /// When true the remainder term is genuinely periodic; when false it
    /// degenerates to a constant.
    pub all_ratios_rational: bool,
    /// The common rational base r > 1 when the flag is true.
    pub common_base: Option<BigRational>,
}

/// Signed prime exponent vector of a positive rational.
fn prime_exponents(r: &BigRational) -> Option<BTreeMap<u64, i64>> {
    let mut map = BTreeMap::new();
    for (int, sign) in [(r.numer().clone(), 1i64), (r.denom().clone(), -1i64)] {
        let mut x = int.magnitude().to_u128()?;
        let mut d: u128 = 2;
        while d * d <= x {
            while x % d == 0 {
                *map.entry(d as u64).or_insert(0) += sign;
                x /= d;
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if x > 1 {
            *map.entry(u64::try_from(x).ok()?).or_insert(0) += sign;
        }
    }
    map.retain(|_, e| *e != 0);
    Some(map)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Extract h_nu and decide whether the maximizer ratios share a common
/// rational base. Soundness: with exact rational inputs, the ratios are all
/// pairwise log-rational exactly when each rho/alpha is an integer power of
/// one primitive rational, which prime factorization decides exactly.
pub fn tie_free_slope(class: &Classification) -> TieFreeSlope {
    let ratios: Vec<BigRational> =
        class.alphas.iter().map(|a| class.rho.clone() / a.clone()).collect();
    let mut primitive: Option<BTreeMap<u64, i64>> = None;
    let mut ok = true;
    for r in &ratios {
        debug_assert!(*r > BigRational::one(), "alpha < rho for every WOD set");
        let Some(exps) = prime_exponents(r) else {
            ok = false;
            break;
        };
        if exps.is_empty() {
            ok = false; // ratio 1 cannot happen for a valid classification
            break;
        }
        let g = exps.values().fold(0u64, |g, &e| gcd_u64(g, e.unsigned_abs()));
        let prim: BTreeMap<u64, i64> = exps.iter().map(|(&p, &e)| (p, e / g as i64)).collect();
        match &primitive {
            None => primitive = Some(prim),
            Some(existing) => {
                if *existing != prim {
                    ok = false;
                    break;
                }
            }
        }
    }
    let common_base = if ok {
        primitive.map(|prim| {
            let mut num = BigInt::one();
            let mut den = BigInt::one();
            for (&p, &e) in &prim {
                let pw = num::pow::pow(BigInt::from(p), e.unsigned_abs() as usize);
                if e > 0 {
                    num *= pw;
                } else {
                    den *= pw;
                }
            }
            BigRational::new(num, den)
        })
    } else {
        None
    };
    TieFreeSlope { h_nu: class.h_nu, all_ratios_rational: ok, common_base }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin_game;
    use crate::game::{GameSpec, WodSet};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exp_mean_prediction_matches_the_plug_in_value() {
        let class = builtin_game("rpsls").unwrap().classify();
        let p = predict(&class, Quantity::XMean, 20).unwrap();
        // 1/(3 (2/3)^20) = 3^19 / 2^20.
        let expect = 3f64.powi(19) / 2f64.powi(20);
        assert!((p.leading - expect).abs() < 1e-9 * expect);
        assert!((p.leading - 1108.4).abs() < 0.1);
        let y = predict(&class, Quantity::YMean, 20).unwrap();
        assert!((y.leading - 20.0 * expect).abs() < 1e-6 * expect);
    }

    #[test]
    fn log_predictions() {
        let class = builtin_game("ctls").unwrap().classify();
        let p = predict(&class, Quantity::XMean, 1024).unwrap();
        assert_eq!(p.leading, 10.0);
        assert_eq!(p.correction, Some(10.5));
        assert_eq!(predict(&class, Quantity::YMean, 77).unwrap().leading, 154.0);
        assert_eq!(predict(&class, Quantity::YVar, 100).unwrap().leading, 200.0);
        assert_eq!(predict(&class, Quantity::XVar, 100).unwrap().leading, 0.0);
        // Biased coin: the +1/2 refinement is specific to the fair coin.
        let class = builtin_game("ctls?p=1/3").unwrap().classify();
        assert_eq!(predict(&class, Quantity::XMean, 100).unwrap().correction, None);
    }

    #[test]
    fn wrong_kind_requests_are_rejected() {
        let exp = builtin_game("rpsls").unwrap().classify();
        assert!(predict(&exp, Quantity::XVar, 10).is_err());
        assert!(predict(&exp, Quantity::YVar, 10).is_err());
        assert!(predict(&exp, Quantity::LimitCdf, 10).is_err());
        let log = builtin_game("ctls").unwrap().classify();
        assert!(predict(&log, Quantity::LimitCdf, 10).is_err());
        assert!(predict(&log, Quantity::XVar, 10).is_ok(), "bounded variance is a 0 prediction, not an error");
    }

    #[test]
    fn limit_cdf_values_and_monotonicity() {
        // Exact power, ell = 0: 1/(e - 1).
        let v = limit_cdf_unbiased_ctls(1024, 0);
        assert!((v - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-12);
        let v3 = limit_cdf_acyclic_clique(3, 729, 0);
        assert!((v3 - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-12);
        // m = 2 clique is the fair coin formula.
        for ell in -2..=10 {
            assert_eq!(limit_cdf_acyclic_clique(2, 1000, ell), limit_cdf_unbiased_ctls(1000, ell));
        }
        // Nondecreasing in ell, into (0, 1], approaching 1.
        let mut prev = 0.0;
        for ell in -8..=60 {
            let v = limit_cdf_unbiased_ctls(1000, ell);
            assert!(v >= prev && v > 0.0 && v <= 1.0, "ell={ell} v={v}");
            prev = v;
        }
        assert!((limit_cdf_unbiased_ctls(1000, 60) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fluctuation_profile_of_an_exact_constant_is_zero() {
        let values = vec![7.25; 101];
        let p = fluctuation_profile(&values, 2, 100, 0.5, |_| 7.25);
        assert_eq!(p.amplitude, 0.0);
        for &(phase, _) in &p.points {
            assert!((0.0..1.0).contains(&phase));
        }
    }

    #[test]
    fn slope_flags_the_three_hand_cycle_as_rational() {
        let class = builtin_game("rpsls").unwrap().classify();
        let s = tie_free_slope(&class);
        assert!((s.h_nu - 1.0 / std::f64::consts::LN_2).abs() < 1e-12);
        assert!(s.all_ratios_rational);
        assert_eq!(s.common_base, Some(rat(2, 1)));
    }

    #[test]
    fn slope_finds_a_shared_base_across_different_powers() {
        // Ratios 4 and 8 are both powers of 2.
        let spec = GameSpec::new(
            4,
            vec![rat(1, 8), rat(3, 8), rat(1, 16), rat(7, 16)],
            vec![WodSet::from_indices(&[0, 1], &[0]), WodSet::from_indices(&[2, 3], &[2])],
        );
        spec.validate().unwrap();
        let class = spec.classify();
        assert_eq!(class.rho, rat(1, 2));
        assert_eq!(class.nu, 2);
        let s = tie_free_slope(&class);
        assert!(s.all_ratios_rational);
        assert_eq!(s.common_base, Some(rat(2, 1)));
        // h = 2 / (ln 4 + ln 8) = 2 / (5 ln 2).
        assert!((s.h_nu - 2.0 / (5.0 * std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn slope_flags_incommensurable_ratios() {
        // Ratios 11/8 and 11/3 share no common rational base.
        let spec = GameSpec::new(
            3,
            vec![rat(4, 7), rat(3, 14), rat(3, 14)],
            vec![WodSet::from_indices(&[0, 1], &[0]), WodSet::from_indices(&[0, 2], &[2])],
        );
        spec.validate().unwrap();
        let class = spec.classify();
        assert_eq!(class.rho, rat(11, 14));
        let s = tie_free_slope(&class);
        assert!(!s.all_ratios_rational);
        assert_eq!(s.common_base, None);
    }

    #[test]
    fn slope_on_the_symmetric_circulant() {
        let class = builtin_game("circulant?m=2").unwrap().classify();
        let s = tie_free_slope(&class);
        assert!(s.all_ratios_rational, "equal alphas by symmetry");
    }

    #[test]
    fn floor_log_is_exact_at_powers() {
        assert_eq!(floor_log(2, 1024), 10);
        assert_eq!(floor_log(2, 1023), 9);
        assert_eq!(floor_log(3, 729), 6);
        assert_eq!(floor_log(3, 728), 5);
        assert_eq!(floor_log(10, 1), 0);
    }
}
