//! Exact distribution tables for the leader-selection process.
//!
//! Everything is driven by the one-round kernel: a round among n players is
//! conclusive onto j survivors with weight `ww_n[j]` and ties with
//! probability `1 - varpi_n`. Conditioning on the first conclusive round
//! turns each observable into a triangular recurrence over n:
//!
//! - round count X_n: the rounds spent at size n form a geometric block with
//!   success probability varpi_n, so E(X_n) = (1 + sum ww_n[j] E(X_j)) / varpi_n,
//!   and higher moments mix geometric raw moments with the binomial theorem;
//! - the CDF slices F_ell(n) = P(X_n <= ell) step down one round at a time;
//! - hands shown Y_n adds n per round; its second moment comes from squaring
//!   Y_n = n + Y_next and solving for the self-referential term;
//! - conclusive rounds Z_n add 1 per conclusive round only.
//!
//! Tables are generic over the numeric mode (`BigRational` or log-domain
//! `f64`); division by varpi_n happens algebraically in the scalar type, so
//! rational tables are bit-exact.

use serde::Serialize;

use crate::error::NumericError;
use crate::game::{GameKind, GameSpec};
use crate::hands::HandSet;
use crate::ratutil::rat_to_f64;
use crate::scalar::{Kernel, KernelSource, NumericMode, Scalar};

/// What to build: horizon in players, highest raw moment of X, CDF depth.
#[derive(Debug, Clone)]
pub struct TableRequest {
    /// Largest player count n to tabulate.
    pub horizon: usize,
    /// Highest raw moment of the round count (>= 1); variances need 2.
    pub moment_order: usize,
    /// CDF slice depth: none, automatic from the classification, or fixed.
    pub cdf: CdfLevels,
    /// Abort if horizon^2 * (moments + levels + 2) exceeds this.
    pub budget: Option<u128>,
}

impl Default for TableRequest {
    fn default() -> TableRequest {
        TableRequest { horizon: 32, moment_order: 2, cdf: CdfLevels::None, budget: None }
    }
}

/// CDF depth selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfLevels {
    None,
    /// Log games: ceil(log_{1/alpha} N) + 40. Exp games: smallest L whose
    /// geometric tail bound (N-1)(1 - varpi_min)^(L-(N-1)) drops below 1e-9.
    Auto,
    Fixed(usize),
}

/// CDF slices: rows[ell][n] = P(X_n <= ell).
#[derive(Debug, Clone)]
pub struct CdfTable<S> {
    pub levels: usize,
    pub rows: Vec<Vec<S>>,
}

/// The assembled tables; index 0 of every per-n vector is unused.
#[derive(Debug, Clone)]
pub struct ExactTables<S> {
    pub numeric_mode: NumericMode,
    pub horizon: usize,
    pub moment_order: usize,
    /// E(X_n), the expected number of rounds.
    pub mu: Vec<S>,
    /// V(X_n); present iff moment_order >= 2.
    pub var: Option<Vec<S>>,
    /// Raw moments: moments[n][k] = E(X_n^k) for k = 0..=moment_order.
    pub moments: Vec<Vec<S>>,
    /// E(Y_n), the expected total number of hands shown.
    pub y_mean: Vec<S>,
    /// V(Y_n); present iff moment_order >= 2.
    pub y_var: Option<Vec<S>>,
    /// E(Z_n), the expected number of conclusive rounds.
    pub z_mean: Vec<S>,
    /// varpi_n, the no-tie probability per round.
    pub no_tie: Vec<S>,
    pub cdf: Option<CdfTable<S>>,
}

/// Probability that n independent draws use exactly the hands in `support`.
pub fn support_prob<S: Scalar>(
    spec: &GameSpec,
    support: HandSet,
    n: usize,
) -> Result<S, NumericError> {
    if support.is_empty() {
        return Err(NumericError::EmptySupport);
    }
    Ok(S::kernels(spec).support_prob(support, n))
}

/// Probability that a round among n players is conclusive.
pub fn no_tie_prob<S: Scalar>(spec: &GameSpec, n: usize) -> S {
    S::kernels(spec).no_tie(n)
}

/// The full one-round transition law among n players.
pub fn kernel<S: Scalar>(spec: &GameSpec, n: usize) -> Kernel<S> {
    S::kernels(spec).row(n)
}

/// k-th raw moment of a geometric variable on {1, 2, ...} with success
/// probability q, via the Stirling expansion
/// E(T^k) = sum_r S(k,r) r! (1-q)^(r-1) / q^r.
pub fn geometric_raw_moment<S: Scalar>(q: &S, k: usize) -> S {
    if k == 0 {
        return S::one();
    }
    // Stirling numbers of the second kind up to row k, in S arithmetic.
    let mut stir = vec![vec![S::zero(); k + 1]; k + 1];
    stir[0][0] = S::one();
    for i in 1..=k {
        for r in 1..=i {
            stir[i][r] =
                S::from_usize(r) * stir[i - 1][r].clone() + stir[i - 1][r - 1].clone();
        }
    }
    let failure = S::one() - q.clone();
    let mut acc = S::zero();
    let mut r_fact = S::one();
    let mut fail_pow = S::one(); // (1-q)^(r-1)
    let mut q_pow = q.clone(); // q^r
    for r in 1..=k {
        r_fact = r_fact * S::from_usize(r);
        acc = acc + stir[k][r].clone() * r_fact.clone() * fail_pow.clone() / q_pow.clone();
        fail_pow = fail_pow * failure.clone();
        q_pow = q_pow * q.clone();
    }
    acc
}

fn auto_levels<S: Scalar>(
    spec: &GameSpec,
    horizon: usize,
    src: &mut S::Kernels,
) -> Result<usize, NumericError> {
    if horizon < 2 {
        return Ok(1);
    }
    let class = spec.classify();
    match class.kind {
        GameKind::Log => {
            let alpha = rat_to_f64(class.alpha.as_ref().expect("log games carry alpha"));
            let base = (1.0 / alpha).ln();
            Ok(((horizon as f64).ln() / base).ceil() as usize + 40)
        }
        GameKind::Exp => {
            let mut varpi_min = f64::INFINITY;
            for n in 2..=horizon {
                varpi_min = varpi_min.min(src.no_tie(n).to_f64());
            }
            let decay = -(-varpi_min).ln_1p(); // -ln(1 - varpi_min)
            let stages = (horizon - 1) as f64;
            let extra = ((stages * 1e9).ln() / decay).ceil();
            if !extra.is_finite() || extra > 1e7 {
                return Err(NumericError::Overflow {
                    n: horizon,
                    what: "automatic CDF depth (the tie probability is too close to 1)",
                });
            }
            Ok(horizon - 1 + extra as usize)
        }
    }
}

/// Build every requested table in one triangular pass.
pub fn build_tables<S: Scalar>(
    spec: &GameSpec,
    req: &TableRequest,
) -> Result<ExactTables<S>, NumericError> {
    let n_max = req.horizon.max(1);
    let k_ord = req.moment_order.max(1);
    let mut src = S::kernels(spec);
    let levels = match req.cdf {
        CdfLevels::None => None,
        CdfLevels::Fixed(l) => Some(l),
        CdfLevels::Auto => Some(auto_levels::<S>(spec, n_max, &mut src)?),
    };
    let cost = (n_max as u128).pow(2) * (k_ord + levels.unwrap_or(0) + 2) as u128;
    if let Some(budget) = req.budget {
        if cost > budget {
            return Err(NumericError::BudgetExceeded { cost, budget });
        }
    }

    let zero = S::zero;
    let mut mu = vec![zero(); n_max + 1];
    let mut moments = vec![vec![zero(); k_ord + 1]; n_max + 1];
    let mut y_mean = vec![zero(); n_max + 1];
    let mut y2 = vec![zero(); n_max + 1];
    let mut z_mean = vec![zero(); n_max + 1];
    let mut no_tie = vec![zero(); n_max + 1];
    let mut var = (k_ord >= 2).then(|| vec![zero(); n_max + 1]);
    let mut y_var = (k_ord >= 2).then(|| vec![zero(); n_max + 1]);
    let mut cdf_rows = levels.map(|l| vec![vec![zero(); n_max + 1]; l + 1]);

    // One player: already decided, everything is zero rounds.
    moments[1][0] = S::one();
    if let Some(rows) = cdf_rows.as_mut() {
        for row in rows.iter_mut() {
            row[1] = S::one();
        }
    }

    // Pascal triangle in S for the moment mixing step.
    let mut binom = vec![vec![zero(); k_ord + 1]; k_ord + 1];
    for m in 0..=k_ord {
        binom[m][0] = S::one();
        for k in 1..=m {
            binom[m][k] = binom[m - 1][k - 1].clone()
                + if k <= m - 1 { binom[m - 1][k].clone() } else { zero() };
        }
    }

    for n in 2..=n_max {
        let kern = src.row(n);
        let varpi = kern.no_tie_prob.clone();
        if !(varpi > S::zero()) {
            return Err(NumericError::Overflow { n, what: "no-tie probability underflowed to zero" });
        }
        let tie = kern.tie_prob.clone();

        // Dot products of the kernel row against everything built so far.
        let mut mom_dots = vec![zero(); k_ord + 1];
        let mut y_dot = zero();
        let mut y2_dot = zero();
        let mut z_dot = zero();
        for j in 1..n {
            let w = &kern.win_weight[j];
            if *w == S::zero() {
                continue;
            }
            for k in 0..=k_ord {
                mom_dots[k] = mom_dots[k].clone() + w.clone() * moments[j][k].clone();
            }
            y_dot = y_dot + w.clone() * y_mean[j].clone();
            if k_ord >= 2 {
                y2_dot = y2_dot + w.clone() * y2[j].clone();
            }
            z_dot = z_dot + w.clone() * z_mean[j].clone();
        }

        // Raw moments of the geometric block length at this size.
        let e_t: Vec<S> = (0..=k_ord).map(|i| geometric_raw_moment(&varpi, i)).collect();
        moments[n][0] = S::one();
        for mth in 1..=k_ord {
            let mut acc = zero();
            for k in 0..=mth {
                acc = acc
                    + binom[mth][k].clone() * e_t[mth - k].clone() * mom_dots[k].clone();
            }
            moments[n][mth] = acc / varpi.clone();
        }
        mu[n] = moments[n][1].clone();

        let n_s = S::from_usize(n);
        y_mean[n] = (n_s.clone() + y_dot.clone()) / varpi.clone();
        if k_ord >= 2 {
            let two_n = S::from_usize(2 * n);
            y2[n] = (n_s.clone() * n_s.clone()
                + two_n * (y_dot.clone() + tie.clone() * y_mean[n].clone())
                + y2_dot)
                / varpi.clone();
        }
        z_mean[n] = S::one() + z_dot / varpi.clone();
        no_tie[n] = varpi.clone();

        if let Some(var) = var.as_mut() {
            let v = moments[n][2].clone() - mu[n].clone() * mu[n].clone();
            if v < S::zero() {
                return Err(NumericError::NegativeVariance { n, value: v.to_f64() });
            }
            var[n] = v;
        }
        if let Some(y_var) = y_var.as_mut() {
            let v = y2[n].clone() - y_mean[n].clone() * y_mean[n].clone();
            if v < S::zero() {
                return Err(NumericError::NegativeVariance { n, value: v.to_f64() });
            }
            y_var[n] = v;
        }

        if let Some(rows) = cdf_rows.as_mut() {
            // rows[0][n] stays 0 for n >= 2: the game cannot be over in
            // zero rounds with two or more players.
            for ell in 1..=levels.unwrap() {
                let mut acc = zero();
                for j in 1..n {
                    let w = &kern.win_weight[j];
                    if *w == S::zero() {
                        continue;
                    }
                    acc = acc + w.clone() * rows[ell - 1][j].clone();
                }
                rows[ell][n] = acc + tie.clone() * rows[ell - 1][n].clone();
            }
        }

        let mut finite = mu[n].is_finite_value()
            && moments[n][k_ord].is_finite_value()
            && y_mean[n].is_finite_value()
            && z_mean[n].is_finite_value();
        if k_ord >= 2 {
            finite &= y2[n].is_finite_value();
        }
        if !finite {
            return Err(NumericError::Overflow { n, what: "a table entry" });
        }
    }

    Ok(ExactTables {
        numeric_mode: S::MODE,
        horizon: n_max,
        moment_order: k_ord,
        mu,
        var,
        moments,
        y_mean,
        y_var,
        z_mean,
        no_tie,
        cdf: cdf_rows.map(|rows| CdfTable { levels: levels.unwrap(), rows }),
    })
}

/// A table value smeared over a Poisson(x) number of players.
#[derive(Debug, Clone, Copy)]
pub struct Poissonized {
    pub value: f64,
    /// Poisson mass outside the summation window.
    pub leftover_mass: f64,
}

/// Sum values[n] * P(Poisson(x) = n) over the window |n - x| <= 10 sqrt(x).
/// `values` is indexed by n with index 0 included; the horizon is its last
/// index, and x must stay 10 standard deviations inside it.
pub fn poissonize(values: &[f64], x: f64) -> Result<Poissonized, NumericError> {
    assert!(x > 0.0, "poissonize needs a positive center, got {x}");
    let horizon = values.len().saturating_sub(1);
    let spread = 10.0 * x.sqrt();
    let hi_f = x + spread;
    if x > horizon as f64 - 10.0 * (horizon as f64).sqrt() {
        return Err(NumericError::WindowExceedsHorizon {
            x,
            hi: hi_f.ceil() as usize,
            n: horizon,
        });
    }
    let lo = (x - spread).floor().max(0.0) as usize;
    let hi = (hi_f.ceil() as usize).min(horizon);
    let mut value = 0.0;
    let mut mass = 0.0;
    // ln n! by summation is fine here: the window is a few hundred wide.
    let mut lnfact = 0.0;
    for k in 1..=lo {
        lnfact += (k as f64).ln();
    }
    for n in lo..=hi {
        let w = (n as f64 * x.ln() - x - lnfact).exp();
        value += w * values[n];
        mass += w;
        lnfact += ((n + 1) as f64).ln();
    }
    Ok(Poissonized { value, leftover_mass: (1.0 - mass).max(0.0) })
}

/// JSON mirror of the CSV artifacts.
#[derive(Debug, Serialize)]
pub struct TablesExport {
    pub schema: &'static str,
    pub numeric_mode: NumericMode,
    pub horizon: usize,
    pub moment_order: usize,
    /// mu[n] at index n; index 0 is a placeholder zero.
    pub mu: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var: Option<Vec<f64>>,
    pub y_mean: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_var: Option<Vec<f64>>,
    pub z_mean: Vec<f64>,
    pub no_tie: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cdf_levels: Option<usize>,
    /// cdf[ell][n] = P(X_n <= ell).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cdf: Option<Vec<Vec<f64>>>,
}

impl<S: Scalar> ExactTables<S> {
    fn column(v: &[S]) -> Vec<f64> {
        v.iter().map(Scalar::to_f64).collect()
    }

    /// Flatten to f64 for serialization.
    pub fn export(&self) -> TablesExport {
        TablesExport {
            schema: "janken.tables.v1",
            numeric_mode: self.numeric_mode,
            horizon: self.horizon,
            moment_order: self.moment_order,
            mu: Self::column(&self.mu),
            var: self.var.as_ref().map(|v| Self::column(v)),
            y_mean: Self::column(&self.y_mean),
            y_var: self.y_var.as_ref().map(|v| Self::column(v)),
            z_mean: Self::column(&self.z_mean),
            no_tie: Self::column(&self.no_tie),
            cdf_levels: self.cdf.as_ref().map(|c| c.levels),
            cdf: self.cdf.as_ref().map(|c| c.rows.iter().map(|r| Self::column(r)).collect()),
        }
    }

    /// Main table as CSV: one row per player count.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write;
        let e = self.export();
        let mut out = String::from("# schema: janken.tables.v1\n");
        out.push_str("n,mu,var,y_mean,y_var,z_mean\n");
        for n in 1..=self.horizon {
            let var = e.var.as_ref().map_or(String::new(), |v| v[n].to_string());
            let y_var = e.y_var.as_ref().map_or(String::new(), |v| v[n].to_string());
            writeln!(out, "{},{},{},{},{},{}", n, e.mu[n], var, e.y_mean[n], y_var, e.z_mean[n])
                .expect("string write");
        }
        out
    }

    /// CDF slices as CSV, if they were built.
    pub fn cdf_to_csv(&self) -> Option<String> {
        use std::fmt::Write;
        let cdf = self.cdf.as_ref()?;
        let mut out = String::from("# schema: janken.cdf.v1\n");
        out.push_str("n,ell,cdf\n");
        for n in 1..=self.horizon {
            for (ell, row) in cdf.rows.iter().enumerate() {
                writeln!(out, "{},{},{}", n, ell, row[n].to_f64()).expect("string write");
            }
        }
        Some(out)
    }
}
