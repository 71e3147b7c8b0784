//! The four subcommands.
//!
//! `classify` is pure stdout; the other three write their files under --out
//! and drop a manifest beside them. JSON documents embed the manifest, CSV
//! files reference it from a comment line, and nothing here reads a clock,
//! so identical invocations rewrite identical bytes.

use std::fmt::Write as _;

use num::BigRational;
use serde::Serialize;
use serde_json::json;

use janken_core::asym::{self, fluctuation_profile, limit_cdf_acyclic_clique, predict, Quantity};
use janken_core::builtins::Builtin;
use janken_core::exact::{build_tables, CdfLevels, TableRequest, TablesExport};
use janken_core::families::uniform_clique_law;
use janken_core::rat_to_f64;
use janken_core::scalar::NumericMode;
use janken_core::sim::{self, SimConfig, SimSummary};
use janken_core::{Classification, GameKind, GameSpec, NumericError};

use crate::artifacts::{
    with_manifest_ref, write_file, write_json, write_manifest, GameSource, RunManifest,
    MANIFEST_FILE,
};
use crate::{
    budget_from_env, parse_range, ClassifyArgs, CliError, CompareArgs, ExactArgs, FormatArg,
    SimulateArgs, DEFAULT_BUDGET,
};

/// Print the classification: the decay rate, its multiplicity, the
/// dichotomy kind, the winner mass(es), and the conclusive-round slope.
pub fn classify(args: &ClassifyArgs) -> Result<(), CliError> {
    let source = GameSource::load(&args.spec)?;
    let game = source.game()?;
    let class = game.classify();
    print_classification(&class);
    println!("h_nu={}", class.h_nu);
    Ok(())
}

fn print_classification(class: &Classification) {
    match &class.alpha {
        Some(alpha) => println!(
            "rho={} nu={} kind={} alpha={}",
            class.rho, class.nu, class.kind, alpha
        ),
        None => {
            println!("rho={} nu={} kind={}", class.rho, class.nu, class.kind);
            let alphas: Vec<String> = class.alphas.iter().map(|a| a.to_string()).collect();
            println!("alphas={}", alphas.join(","));
        }
    }
}

/// Build the requested tables and write them with a manifest.
pub fn exact(args: &ExactArgs) -> Result<(), CliError> {
    let source = GameSource::load(&args.spec)?;
    let game = source.game()?;
    let mode = NumericMode::from(args.mode);
    let req = TableRequest {
        horizon: args.horizon,
        moment_order: args.moments,
        cdf: args.levels,
        budget: Some(budget_from_env()?),
    };
    let (export, csv, cdf_csv) = build_all(game, &req, mode)?;

    let mut manifest = RunManifest::new(&source);
    manifest.numeric_mode = Some(mode);
    manifest.horizon = Some(export.horizon);
    manifest.moment_order = Some(export.moment_order);
    manifest.cdf_levels = export.cdf_levels;
    match args.format {
        FormatArg::Csv => {
            manifest.outputs.push("tables.csv");
            if cdf_csv.is_some() {
                manifest.outputs.push("cdf.csv");
            }
        }
        FormatArg::Json => manifest.outputs.push("tables.json"),
    }
    manifest.outputs.push(MANIFEST_FILE);

    match args.format {
        FormatArg::Csv => {
            write_file(&args.out, "tables.csv", &with_manifest_ref(&csv))?;
            if let Some(c) = &cdf_csv {
                write_file(&args.out, "cdf.csv", &with_manifest_ref(c))?;
            }
        }
        FormatArg::Json => {
            let doc = json!({ "manifest": &manifest, "tables": &export });
            write_json(&args.out, "tables.json", &doc)?;
        }
    }
    write_manifest(&args.out, &manifest)?;

    let levels_note = export
        .cdf_levels
        .map_or(String::new(), |l| format!(", cdf levels 0..={l}"));
    println!(
        "{mode} tables to horizon {}, moment order {}{levels_note}",
        export.horizon, export.moment_order
    );
    for name in &manifest.outputs {
        println!("wrote {}", args.out.join(name).display());
    }
    Ok(())
}

fn build_all(
    game: &GameSpec,
    req: &TableRequest,
    mode: NumericMode,
) -> Result<(TablesExport, String, Option<String>), CliError> {
    Ok(match mode {
        NumericMode::Rational => {
            let t = build_tables::<BigRational>(game, req)?;
            (t.export(), t.to_csv(), t.cdf_to_csv())
        }
        NumericMode::Float => {
            let t = build_tables::<f64>(game, req)?;
            (t.export(), t.to_csv(), t.cdf_to_csv())
        }
    })
}

/// Run seeded trials; games go through the engine, the semicircle pointing
/// game through its own closed-form check.
pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let source = GameSource::load(&args.spec)?;
    match &source.builtin {
        Builtin::Semicircle => simulate_semicircle(args, &source),
        Builtin::Game(_) => simulate_game(args, &source),
    }
}

fn simulate_game(args: &SimulateArgs, source: &GameSource) -> Result<(), CliError> {
    let game = source.game().expect("callers route the pointing game elsewhere");
    let cfg = SimConfig {
        n: args.n,
        trials: args.trials,
        seed: args.seed,
        mode: args.sim_mode.into(),
        round_cap: args.round_cap,
    };
    let summary = sim::simulate(game, &cfg)?;

    // The cross-check must not kill a healthy run: an overflow or budget
    // problem in the side computation only downgrades it to a note.
    let horizon = args.horizon.unwrap_or(args.n);
    let (check, note) = if horizon >= args.n {
        match exact_check(game, args.n, horizon, &summary) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(format!("exact cross-check skipped: {e}"))),
        }
    } else {
        let msg = format!("exact cross-check skipped: horizon {horizon} is below n={}", args.n);
        (None, Some(msg))
    };

    let mut manifest = RunManifest::new(source);
    manifest.players = Some(args.n);
    manifest.trials = Some(args.trials);
    manifest.seed = Some(args.seed);
    manifest.sim_mode = Some(cfg.mode);
    manifest.outputs = vec!["samples.csv", "summary.json", MANIFEST_FILE];

    let doc = json!({
        "schema": "janken.summary.v1",
        "manifest": &manifest,
        "summary": &summary,
        "exact_check": &check,
        "exact_check_note": &note,
    });

    let mut body = String::with_capacity(summary.samples.len() * 12 + 64);
    body.push_str("# schema: janken.samples.v1\n");
    let _ = writeln!(body, "# manifest: {MANIFEST_FILE}");
    body.push_str("trial,x,y,z\n");
    for (i, t) in summary.samples.iter().enumerate() {
        let _ = writeln!(body, "{},{},{},{}", i, t.x, t.y, t.z);
    }
    write_file(&args.out, "samples.csv", &body)?;
    write_json(&args.out, "summary.json", &doc)?;
    write_manifest(&args.out, &manifest)?;

    println!("n={} trials={} seed={} mode={}", args.n, args.trials, args.seed, cfg.mode);
    println!("x: mean={:.4} se={:.4}", summary.x.mean, summary.x.std_error);
    println!("y: mean={:.4} se={:.4}", summary.y.mean, summary.y.std_error);
    println!("z: mean={:.4} se={:.4}", summary.z.mean, summary.z.std_error);
    match (&check, &note) {
        (Some(c), _) => {
            println!(
                "exact (float, horizon {}): mu={:.4} y_mean={:.4} z_mean={:.4}",
                c.horizon, c.mu, c.y_mean, c.z_mean
            );
            println!(
                "gaps in se units: x={:.2} y={:.2} z={:.2}",
                c.x_gap_se, c.y_gap_se, c.z_gap_se
            );
        }
        (None, Some(msg)) => println!("{msg}"),
        (None, None) => {}
    }
    for name in &manifest.outputs {
        println!("wrote {}", args.out.join(name).display());
    }
    Ok(())
}

/// Float-table values lined up against a run's sample means.
#[derive(Serialize)]
struct ExactCheck {
    numeric_mode: NumericMode,
    horizon: usize,
    mu: f64,
    y_mean: f64,
    z_mean: f64,
    /// |sample mean - exact| / standard error, per measure.
    x_gap_se: f64,
    y_gap_se: f64,
    z_gap_se: f64,
}

fn exact_check(
    game: &GameSpec,
    n: usize,
    horizon: usize,
    s: &SimSummary,
) -> Result<ExactCheck, NumericError> {
    let req = TableRequest {
        horizon,
        moment_order: 1,
        cdf: CdfLevels::None,
        budget: Some(DEFAULT_BUDGET),
    };
    let t = build_tables::<f64>(game, &req)?;
    let gap = |mean: f64, exact: f64, se: f64| {
        if se > 0.0 {
            (mean - exact).abs() / se
        } else {
            (mean - exact).abs()
        }
    };
    Ok(ExactCheck {
        numeric_mode: NumericMode::Float,
        horizon,
        mu: t.mu[n],
        y_mean: t.y_mean[n],
        z_mean: t.z_mean[n],
        x_gap_se: gap(s.x.mean, t.mu[n], s.x.std_error),
        y_gap_se: gap(s.y.mean, t.y_mean[n], s.y.std_error),
        z_gap_se: gap(s.z.mean, t.z_mean[n], s.z.std_error),
    })
}

fn simulate_semicircle(args: &SimulateArgs, source: &GameSource) -> Result<(), CliError> {
    let s = sim::semicircle_game(args.n, args.trials, args.seed)?;
    // A round concludes with probability n/2^(n-1), so the repetition count
    // before the first success averages 2^(n-1)/n - 1.
    let expected = ((args.n - 1) as f64).exp2() / args.n as f64 - 1.0;
    let gap_se = if s.repetitions.std_error > 0.0 {
        (s.repetitions.mean - expected).abs() / s.repetitions.std_error
    } else {
        (s.repetitions.mean - expected).abs()
    };

    let mut manifest = RunManifest::new(source);
    manifest.players = Some(args.n);
    manifest.trials = Some(args.trials);
    manifest.seed = Some(args.seed);
    manifest.outputs = vec!["samples.csv", "summary.json", MANIFEST_FILE];

    let doc = json!({
        "schema": "janken.summary.v1",
        "manifest": &manifest,
        "semicircle": &s,
        "expected_mean": expected,
        "gap_se": gap_se,
    });

    let mut body = String::with_capacity(s.samples.len() * 8 + 64);
    body.push_str("# schema: janken.samples.v1\n");
    let _ = writeln!(body, "# manifest: {MANIFEST_FILE}");
    body.push_str("trial,repetitions\n");
    for (i, reps) in s.samples.iter().enumerate() {
        let _ = writeln!(body, "{i},{reps}");
    }
    write_file(&args.out, "samples.csv", &body)?;
    write_json(&args.out, "summary.json", &doc)?;
    write_manifest(&args.out, &manifest)?;

    println!("semicircle n={} trials={} seed={}", args.n, args.trials, args.seed);
    println!(
        "repetitions: mean={:.4} se={:.4} expected={:.4} gap={:.2} se",
        s.repetitions.mean, s.repetitions.std_error, expected, gap_se
    );
    for name in &manifest.outputs {
        println!("wrote {}", args.out.join(name).display());
    }
    Ok(())
}

/// Offsets around floor(log_m n) for the limit-CDF deviation block.
const LIMIT_ELL_LO: i64 = -2;
const LIMIT_ELL_HI: i64 = 20;

#[derive(Serialize)]
struct PredRow {
    quantity: String,
    n: usize,
    exact: f64,
    leading: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    correction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
    validity: &'static str,
}

#[derive(Serialize)]
struct SkipRow {
    quantity: String,
    note: String,
}

/// Line exact tables up against the leading-order growth laws over a player
/// range, reporting the exp-game scaled mean, the log-game fluctuation
/// profile, and the limit-CDF deviation where a limit law is known.
pub fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let source = GameSource::load(&args.spec)?;
    let game = source.game()?;
    let (lo, hi) = parse_range(&args.n)?;
    let class = game.classify();
    let mode = NumericMode::from(args.mode);
    let moments = args.moments.max(2);

    // CDF slices are only tabulated where a limit law is known to compare
    // against: games sharing the clique count law.
    let clique = uniform_clique_law(game);
    let cdf = match clique {
        Some(m) => {
            let k = asym::floor_log(m as u64, hi as u64) as i64;
            CdfLevels::Fixed((k + LIMIT_ELL_HI) as usize)
        }
        None => CdfLevels::None,
    };
    let req = TableRequest {
        horizon: hi,
        moment_order: moments,
        cdf,
        budget: Some(budget_from_env()?),
    };
    let export = match mode {
        NumericMode::Rational => build_tables::<BigRational>(game, &req)?.export(),
        NumericMode::Float => build_tables::<f64>(game, &req)?.export(),
    };

    let mut manifest = RunManifest::new(&source);
    manifest.numeric_mode = Some(mode);
    manifest.horizon = Some(hi);
    manifest.moment_order = Some(moments);
    manifest.cdf_levels = export.cdf_levels;
    manifest.n_range = Some(format!("{lo}..{hi}"));
    manifest.outputs.push("predictions.json");
    if class.kind == GameKind::Log {
        manifest.outputs.push("fluctuation.csv");
    }
    if clique.is_some() {
        manifest.outputs.push("limit_cdf.csv");
    }
    manifest.outputs.push(MANIFEST_FILE);

    println!("spec {} (digest {})", source.given, &source.digest[..16]);
    print_classification(&class);
    println!("h_nu={}", class.h_nu);
    println!("tables: {mode} mode, horizon {hi}, moment order {moments}");
    println!();

    // Exact vs predicted at the range endpoints.
    let ns: Vec<usize> = if lo == hi { vec![hi] } else { vec![lo, hi] };
    let mut rows: Vec<PredRow> = Vec::new();
    let mut skipped: Vec<SkipRow> = Vec::new();
    println!("{:<8} {:>8} {:>16} {:>16} {:>10}", "quantity", "n", "exact", "predicted", "ratio");
    let quantities =
        [Quantity::XMean, Quantity::XVar, Quantity::YMean, Quantity::YVar, Quantity::ZMean];
    for q in quantities {
        match predict(&class, q, hi as u64) {
            Err(e) => {
                println!("{:<8} skipped: {e}", q.to_string());
                skipped.push(SkipRow { quantity: q.to_string(), note: e.to_string() });
            }
            Ok(_) => {
                for &n in &ns {
                    let p = predict(&class, q, n as u64)
                        .expect("applicability does not depend on n");
                    let exact = exact_quantity(&export, q, n);
                    let predicted = p.correction.unwrap_or(p.leading);
                    let ratio = (predicted != 0.0).then(|| exact / predicted);
                    let ratio_text = ratio.map_or("-".to_string(), |r| format!("{r:.4}"));
                    println!(
                        "{:<8} {:>8} {:>16.6} {:>16.6} {:>10}",
                        q.to_string(),
                        n,
                        exact,
                        predicted,
                        ratio_text
                    );
                    rows.push(PredRow {
                        quantity: q.to_string(),
                        n,
                        exact,
                        leading: p.leading,
                        correction: p.correction,
                        ratio,
                        validity: p.validity,
                    });
                }
            }
        }
    }
    println!();

    let mut fluctuation_csv: Option<String> = None;
    match class.kind {
        GameKind::Exp => {
            // The scaled mean's approach to 1 is the whole leading story.
            let rho = rat_to_f64(&class.rho);
            for &n in &ns {
                let scaled = class.nu as f64 * rho.powf(n as f64) * export.mu[n];
                println!("nu*rho^n*mu_n = {scaled:.4} at n={n}");
            }
            println!("fluctuation profile: skipped (periodic residuals are a log-game report)");
        }
        GameKind::Log => {
            let alpha = rat_to_f64(class.alpha.as_ref().expect("log games carry alpha"));
            let refined = predict(&class, Quantity::XMean, hi as u64)
                .expect("x_mean applies to log games")
                .correction
                .is_some();
            let class_for_leading = class.clone();
            let leading = move |x: f64| {
                let p = predict(&class_for_leading, Quantity::XMean, x as u64)
                    .expect("x_mean applies to log games");
                p.correction.unwrap_or(p.leading)
            };
            let profile = fluctuation_profile(&export.mu, lo, hi, alpha, leading);
            let desc = if refined { "log2(n) + 1/2" } else { "ln(n)/ln(1/alpha)" };
            println!(
                "fluctuation amplitude = {:.3e} over n in [{lo}, {hi}] (mu_n residual vs {desc})",
                profile.amplitude
            );
            println!(
                "mean residual = {:.3e}, centered amplitude = {:.3e}",
                profile.mean_residual(),
                profile.centered_amplitude()
            );
            let mut body = String::from("# schema: janken.fluctuation.v1\n");
            let _ = writeln!(body, "# manifest: {MANIFEST_FILE}");
            body.push_str("phase,residual\n");
            for (phase, residual) in &profile.points {
                let _ = writeln!(body, "{phase},{residual}");
            }
            fluctuation_csv = Some(body);
        }
    }

    let mut limit_csv: Option<String> = None;
    if let Some(m) = clique {
        let cdf_rows = export.cdf.as_ref().expect("slices were requested for clique-law games");
        let k = asym::floor_log(m as u64, hi as u64) as i64;
        let mut body = String::from("# schema: janken.limitcdf.v1\n");
        let _ = writeln!(body, "# manifest: {MANIFEST_FILE}");
        body.push_str("ell,exact,limit,gap\n");
        let mut max_gap = 0.0f64;
        for ell in LIMIT_ELL_LO..=LIMIT_ELL_HI {
            let level = k + ell;
            let exact = if level < 0 { 0.0 } else { cdf_rows[level as usize][hi] };
            let limit = limit_cdf_acyclic_clique(m, hi as u64, ell);
            let gap = (exact - limit).abs();
            max_gap = max_gap.max(gap);
            let _ = writeln!(body, "{ell},{exact},{limit},{gap}");
        }
        println!(
            "limit CDF max deviation = {max_gap:.4} over ell in [{LIMIT_ELL_LO}, {LIMIT_ELL_HI}] at n={hi}"
        );
        limit_csv = Some(body);
    }

    let doc = json!({
        "schema": "janken.predictions.v1",
        "manifest": &manifest,
        "kind": class.kind.to_string(),
        "rows": rows,
        "skipped": skipped,
    });
    write_json(&args.out, "predictions.json", &doc)?;
    if let Some(body) = &fluctuation_csv {
        write_file(&args.out, "fluctuation.csv", body)?;
    }
    if let Some(body) = &limit_csv {
        write_file(&args.out, "limit_cdf.csv", body)?;
    }
    write_manifest(&args.out, &manifest)?;
    println!();
    for name in &manifest.outputs {
        println!("wrote {}", args.out.join(name).display());
    }
    Ok(())
}

fn exact_quantity(e: &TablesExport, q: Quantity, n: usize) -> f64 {
    match q {
        Quantity::XMean => e.mu[n],
        Quantity::XVar => e.var.as_ref().map_or(f64::NAN, |v| v[n]),
        Quantity::YMean => e.y_mean[n],
        Quantity::YVar => e.y_var.as_ref().map_or(f64::NAN, |v| v[n]),
        Quantity::ZMean => e.z_mean[n],
        Quantity::LimitCdf => f64::NAN,
    }
}
