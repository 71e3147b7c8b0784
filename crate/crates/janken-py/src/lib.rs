//! Python bindings for the leader-selection engine.
//!
//! One class, `Game`, wraps a validated game description and exposes the
//! classification, the exact tables, seeded simulation, and the growth-law
//! predictions; module functions cover the hand-less semicircle pointing
//! game and the clique limit CDF. Exact rationals cross the boundary as
//! strings ("2/3"), everything tabulated crosses as floats, and structured
//! results come back as plain dicts so callers can feed them straight into
//! pandas or json.

use std::str::FromStr;

use num::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use janken_core::asym::{self, Quantity};
use janken_core::builtins;
use janken_core::exact::{self, build_tables, CdfLevels, TableRequest, TablesExport};
use janken_core::sim::{self, MeasureStats, SimConfig, SimMode};
use janken_core::specfile;
use janken_core::{
    rat_to_f64, DominanceGraph, GameSpec, HandSet, NumericError, SimError, SpecError,
};

fn spec_err(e: SpecError) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.name()))
}

fn numeric_err(e: NumericError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn sim_err(e: SimError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn parse_probs(probs: Option<Vec<String>>, m: usize) -> PyResult<Vec<BigRational>> {
    match probs {
        None => Ok(GameSpec::uniform_probs(m)),
        Some(texts) => texts
            .iter()
            .map(|t| {
                BigRational::from_str(t)
                    .map_err(|e| PyValueError::new_err(format!("bad rational '{t}': {e}")))
            })
            .collect(),
    }
}

fn stats_dict<'py>(py: Python<'py>, s: &MeasureStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("mean", s.mean)?;
    d.set_item("variance", s.variance)?;
    d.set_item("std_error", s.std_error)?;
    Ok(d)
}

fn export_dict<'py>(py: Python<'py>, e: &TablesExport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("schema", e.schema)?;
    d.set_item("numeric_mode", e.numeric_mode.to_string())?;
    d.set_item("horizon", e.horizon)?;
    d.set_item("moment_order", e.moment_order)?;
    d.set_item("mu", e.mu.clone())?;
    if let Some(v) = &e.var {
        d.set_item("var", v.clone())?;
    }
    d.set_item("y_mean", e.y_mean.clone())?;
    if let Some(v) = &e.y_var {
        d.set_item("y_var", v.clone())?;
    }
    d.set_item("z_mean", e.z_mean.clone())?;
    d.set_item("no_tie", e.no_tie.clone())?;
    if let Some(levels) = e.cdf_levels {
        d.set_item("cdf_levels", levels)?;
        d.set_item("cdf", e.cdf.clone())?;
    }
    Ok(d)
}

/// A validated leader-selection game.
#[pyclass(frozen)]
struct Game {
    spec: GameSpec,
}

#[pymethods]
impl Game {
    /// Look up a named builtin, e.g. "rpsls", "ctls?p=1/3", "clique?m=4".
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Game> {
        Ok(Game { spec: builtins::builtin_game(name).map_err(spec_err)? })
    }

    /// Parse and validate a game-spec JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Game> {
        Ok(Game { spec: specfile::game_from_json(text).map_err(spec_err)? })
    }

    /// Build a game from dominance edges (winner, loser) on m hands,
    /// uniform probabilities unless rational strings are given.
    #[staticmethod]
    #[pyo3(signature = (m, edges, probs=None))]
    fn from_edges(m: usize, edges: Vec<(usize, usize)>, probs: Option<Vec<String>>) -> PyResult<Game> {
        let graph = DominanceGraph::new(m, edges).map_err(spec_err)?;
        let spec = GameSpec::from_dominance_graph(&graph, parse_probs(probs, m)?)
            .map_err(spec_err)?;
        Ok(Game { spec })
    }

    #[getter]
    fn m(&self) -> usize {
        self.spec.m
    }

    #[getter]
    fn probs(&self) -> Vec<String> {
        self.spec.probs.iter().map(|p| p.to_string()).collect()
    }

    /// The canonical explicit-form JSON (also the digest input).
    fn to_json(&self) -> String {
        specfile::game_to_json(&self.spec)
    }

    /// rho, nu, kind, the winner mass(es), and the conclusive-round slope.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = self.spec.classify();
        let d = PyDict::new(py);
        d.set_item("rho", c.rho.to_string())?;
        d.set_item("rho_float", rat_to_f64(&c.rho))?;
        d.set_item("nu", c.nu)?;
        d.set_item("kind", c.kind.to_string())?;
        d.set_item("alpha", c.alpha.as_ref().map(|a| a.to_string()))?;
        let alphas: Vec<String> = c.alphas.iter().map(|a| a.to_string()).collect();
        d.set_item("alphas", alphas)?;
        d.set_item("h_nu", c.h_nu)?;
        Ok(d)
    }

    /// Exact tables up to `horizon` players. mode is "rational" or "float";
    /// cdf_levels tabulates P(X_n <= ell) for ell = 0..=cdf_levels.
    #[pyo3(signature = (horizon, moment_order=2, mode="rational", cdf_levels=None, budget=None))]
    fn exact_tables<'py>(
        &self,
        py: Python<'py>,
        horizon: usize,
        moment_order: usize,
        mode: &str,
        cdf_levels: Option<usize>,
        budget: Option<u128>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let req = TableRequest {
            horizon,
            moment_order,
            cdf: cdf_levels.map_or(CdfLevels::None, CdfLevels::Fixed),
            budget,
        };
        let export = match mode {
            "rational" => build_tables::<BigRational>(&self.spec, &req)
                .map_err(numeric_err)?
                .export(),
            "float" => build_tables::<f64>(&self.spec, &req).map_err(numeric_err)?.export(),
            other => {
                return Err(PyValueError::new_err(format!(
                    "mode must be 'rational' or 'float', got '{other}'"
                )))
            }
        };
        export_dict(py, &export)
    }

    /// Seeded trials among n players; mode is "per-round" or "fast-forward".
    #[pyo3(signature = (n, trials, seed=0, mode="per-round", round_cap=1_000_000_000))]
    fn simulate<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        trials: u64,
        seed: u64,
        mode: &str,
        round_cap: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let mode = match mode {
            "per-round" => SimMode::PerRound,
            "fast-forward" => SimMode::FastForward,
            other => {
                return Err(PyValueError::new_err(format!(
                    "mode must be 'per-round' or 'fast-forward', got '{other}'"
                )))
            }
        };
        if n == 0 || trials == 0 {
            return Err(PyValueError::new_err("n and trials must be at least 1"));
        }
        let cfg = SimConfig { n, trials, seed, mode, round_cap };
        let s = sim::simulate(&self.spec, &cfg).map_err(sim_err)?;
        let d = PyDict::new(py);
        d.set_item("n", n)?;
        d.set_item("trials", trials)?;
        d.set_item("seed", seed)?;
        d.set_item("mode", mode.to_string())?;
        d.set_item("x", stats_dict(py, &s.x)?)?;
        d.set_item("y", stats_dict(py, &s.y)?)?;
        d.set_item("z", stats_dict(py, &s.z)?)?;
        d.set_item("tie_rounds_total", s.tie_rounds_total)?;
        Ok(d)
    }

    /// Probability that n draws use exactly the given hands.
    fn support_prob(&self, hands: Vec<usize>, n: usize) -> PyResult<f64> {
        for &h in &hands {
            if h >= self.spec.m {
                return Err(spec_err(SpecError::HandOutOfRange { hand: h, m: self.spec.m }));
            }
        }
        exact::support_prob::<f64>(&self.spec, HandSet::from_hands(hands), n)
            .map_err(numeric_err)
    }

    /// Probability that a round among n players is conclusive.
    fn no_tie_prob(&self, n: usize) -> f64 {
        exact::no_tie_prob::<f64>(&self.spec, n)
    }

    /// Leading-order growth law for one quantity at one n. quantity is one
    /// of "x_mean", "x_var", "y_mean", "y_var", "z_mean".
    fn predict<'py>(&self, py: Python<'py>, quantity: &str, n: u64) -> PyResult<Bound<'py, PyDict>> {
        let q = match quantity {
            "x_mean" => Quantity::XMean,
            "x_var" => Quantity::XVar,
            "y_mean" => Quantity::YMean,
            "y_var" => Quantity::YVar,
            "z_mean" => Quantity::ZMean,
            other => {
                return Err(PyValueError::new_err(format!(
                    "no quantity named '{other}'"
                )))
            }
        };
        if n < 2 {
            return Err(PyValueError::new_err("predictions need n >= 2"));
        }
        let class = self.spec.classify();
        let p = asym::predict(&class, q, n).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let d = PyDict::new(py);
        d.set_item("quantity", quantity)?;
        d.set_item("n", n)?;
        d.set_item("leading", p.leading)?;
        d.set_item("correction", p.correction)?;
        d.set_item("validity", p.validity)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let c = self.spec.classify();
        format!("Game(m={}, rho={}, nu={}, kind={})", self.spec.m, c.rho, c.nu, c.kind)
    }
}

/// The pointing game: n players point at random directions until all arms
/// fall in a common half circle. Returns repetition statistics next to the
/// closed-form expectation 2^(n-1)/n - 1.
#[pyfunction]
#[pyo3(signature = (n, trials, seed=0))]
fn semicircle(py: Python<'_>, n: usize, trials: u64, seed: u64) -> PyResult<Bound<'_, PyDict>> {
    if n == 0 || trials == 0 {
        return Err(PyValueError::new_err("n and trials must be at least 1"));
    }
    let s = sim::semicircle_game(n, trials, seed).map_err(sim_err)?;
    let d = PyDict::new(py);
    d.set_item("n", n)?;
    d.set_item("trials", trials)?;
    d.set_item("seed", seed)?;
    d.set_item("repetitions", stats_dict(py, &s.repetitions)?)?;
    d.set_item("expected_mean", ((n - 1) as f64).exp2() / n as f64 - 1.0)?;
    Ok(d)
}

/// Limit CDF of the survivor count for the uniform acyclic clique on m
/// hands: the probability of finishing within floor(log_m n) + ell rounds.
#[pyfunction]
fn limit_cdf_clique(m: usize, n: u64, ell: i64) -> PyResult<f64> {
    if m < 2 || n < 1 {
        return Err(PyValueError::new_err("the clique limit law needs m >= 2 and n >= 1"));
    }
    Ok(asym::limit_cdf_acyclic_clique(m, n, ell))
}

/// Registered builtin game names.
#[pyfunction]
fn builtin_names() -> Vec<&'static str> {
    builtins::BUILTIN_NAMES.to_vec()
}

#[pymodule]
fn janken_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Game>()?;
    m.add_function(wrap_pyfunction!(semicircle, m)?)?;
    m.add_function(wrap_pyfunction!(limit_cdf_clique, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    Ok(())
}
