//! Python bindings for `prefnet`.

use std::path::PathBuf;
use std::sync::Arc;

use prefnet::experiments::{Coordinate, Figure, SweepRecord};
use prefnet::{dynamics::DynamicsSpec, io, verify, GameKind, InitPolicy, Preference, UpdateRule};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: prefnet::Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyOSError::new_err(e.to_string())
    }
}

fn game(label: &str) -> PyResult<GameKind> {
    label.parse().map_err(to_py)
}

fn preference(bit: u8) -> PyResult<Preference> {
    match bit {
        0 => Ok(Preference::Zero),
        1 => Ok(Preference::One),
        other => Err(PyValueError::new_err(format!("preference must be 0 or 1, got {other}"))),
    }
}

/// Rewards for the liked (`alpha`) and disliked (`beta`) action.
#[pyclass(frozen, name = "PayoffParams")]
struct PyPayoffParams(prefnet::PayoffParams);

#[pymethods]
impl PyPayoffParams {
    #[new]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        prefnet::PayoffParams::new(alpha, beta).map(Self).map_err(to_py)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta()
    }

    #[getter]
    fn ratio(&self) -> f64 {
        self.0.ratio()
    }

    fn lower_threshold(&self, k: usize) -> f64 {
        prefnet::lower_threshold(k, &self.0)
    }

    fn upper_threshold(&self, k: usize) -> f64 {
        prefnet::upper_threshold(k, &self.0)
    }

    /// Payoff of an agent with preference `theta` playing `action` when `chi`
    /// of its `k` neighbors play 1.
    fn payoff(&self, theta: u8, action: u8, k: usize, chi: usize, game_kind: &str) -> PyResult<f64> {
        let stats = prefnet::NeighborhoodStats::new(k, chi).map_err(to_py)?;
        let x = match action {
            0 | 1 => prefnet::Action::from_bit(action == 1),
            other => return Err(PyValueError::new_err(format!("action must be 0 or 1, got {other}"))),
        };
        Ok(prefnet::payoff(preference(theta)?, x, stats, &self.0, game(game_kind)?))
    }

    fn __repr__(&self) -> String {
        format!("PayoffParams(alpha={}, beta={})", self.0.alpha(), self.0.beta())
    }
}

/// Undirected simple graph.
#[pyclass(frozen, name = "Graph")]
struct PyGraph(Arc<prefnet::Graph>);

#[pymethods]
impl PyGraph {
    #[staticmethod]
    fn erdos_renyi(n: usize, mean_degree: f64, seed: u64) -> PyResult<Self> {
        prefnet::generate_er(n, mean_degree, seed).map(|g| Self(Arc::new(g))).map_err(to_py)
    }

    #[staticmethod]
    fn barabasi_albert(n: usize, m_attach: usize, seed: u64) -> PyResult<Self> {
        prefnet::generate_ba(n, m_attach, seed).map(|g| Self(Arc::new(g))).map_err(to_py)
    }

    #[staticmethod]
    fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        prefnet::Graph::from_edges(n, edges).map(|g| Self(Arc::new(g))).map_err(to_py)
    }

    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        prefnet::Graph::from_edge_list(text).map(|g| Self(Arc::new(g))).map_err(to_py)
    }

    fn to_edge_list(&self) -> String {
        self.0.to_edge_list()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn degree(&self, i: usize) -> PyResult<usize> {
        self.0.degree(i).map_err(to_py)
    }

    fn neighbors(&self, i: usize) -> PyResult<Vec<usize>> {
        self.0.neighbors(i).map(<[usize]>::to_vec).map_err(to_py)
    }

    fn mean_degree(&self) -> f64 {
        self.0.mean_degree()
    }

    fn max_degree(&self) -> usize {
        self.0.max_degree()
    }

    fn __len__(&self) -> usize {
        self.0.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.0.n(), self.0.edge_count())
    }
}

#[pyfunction]
#[pyo3(signature = (theta, k, chi, params, game_kind = "cg"))]
fn best_response(theta: u8, k: usize, chi: usize, params: &PyPayoffParams, game_kind: &str) -> PyResult<u8> {
    let stats = prefnet::NeighborhoodStats::new(k, chi).map_err(to_py)?;
    Ok(prefnet::best_response_complete(preference(theta)?, stats, &params.0, game(game_kind)?).as_u8())
}

#[pyfunction]
#[pyo3(signature = (theta, k, rho, params, game_kind = "cg"))]
fn best_response_incomplete(theta: u8, k: usize, rho: f64, params: &PyPayoffParams, game_kind: &str) -> PyResult<u8> {
    Ok(prefnet::best_response_incomplete(preference(theta)?, k, rho, &params.0, game(game_kind)?).as_u8())
}

/// `"symmetric_satisfactory"`, `"ones_satisfied"` or `"zeros_satisfied"`.
#[pyfunction]
fn regime_predict(rho: f64, params: &PyPayoffParams) -> &'static str {
    match prefnet::regime_predict(rho, &params.0) {
        prefnet::Regime::SymmetricSatisfactory => "symmetric_satisfactory",
        prefnet::Regime::OnesSatisfied => "ones_satisfied",
        prefnet::Regime::ZerosSatisfied => "zeros_satisfied",
    }
}

/// Every pure Nash profile as `(actions, class_label)`.
#[pyfunction]
#[pyo3(signature = (graph, preferences, params, game_kind = "cg"))]
fn enumerate_equilibria(
    graph: &PyGraph,
    preferences: Vec<u8>,
    params: &PyPayoffParams,
    game_kind: &str,
) -> PyResult<Vec<(Vec<u32>, &'static str)>> {
    let prefs = preferences.into_iter().map(preference).collect::<PyResult<Vec<_>>>()?;
    let found = prefnet::enumerate_equilibria(&graph.0, &prefs, &params.0, game(game_kind)?).map_err(to_py)?;
    Ok(found
        .into_iter()
        .map(|(profile, class)| (profile.iter().map(|a| u32::from(a.as_u8())).collect(), class.label()))
        .collect())
}

/// One realization on a freshly generated graph; returns a dict with the
/// observables, class, termination and final profile.
#[pyfunction]
#[pyo3(signature = (
    topology = "er", n = 100, mean_degree = 10.0, m_attach = 3, game_kind = "cg",
    dynamics = "br", info = "complete", alpha = 0.8, beta = 0.5, rho0 = 0.5,
    init = "random", seed = 0, max_steps = 100, update_fraction = 1.0,
    convergence_window = 20, trajectory = false,
))]
#[allow(clippy::too_many_arguments)]
fn run<'py>(
    py: Python<'py>,
    topology: &str,
    n: usize,
    mean_degree: f64,
    m_attach: usize,
    game_kind: &str,
    dynamics: &str,
    info: &str,
    alpha: f64,
    beta: f64,
    rho0: f64,
    init: &str,
    seed: u64,
    max_steps: usize,
    update_fraction: f64,
    convergence_window: usize,
    trajectory: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let topology = match topology {
        "er" => prefnet::TopologySpec::Er { n, mean_degree },
        "ba" => prefnet::TopologySpec::Ba { n, m_attach },
        other => return Err(PyValueError::new_err(format!("unknown topology `{other}`"))),
    };
    topology.validate().map_err(to_py)?;
    if !(0.0..=1.0).contains(&rho0) {
        return Err(PyValueError::new_err(format!("rho0 must lie in [0, 1], got {rho0}")));
    }
    let rule = UpdateRule::from_labels(dynamics, info).map_err(to_py)?;
    let mut spec = DynamicsSpec::new(rule);
    spec.max_steps = max_steps;
    spec.update_fraction = update_fraction;
    spec.convergence_window = convergence_window;
    spec.record_trajectory = trajectory;
    spec.validate().map_err(to_py)?;
    let init: InitPolicy = init.parse().map_err(to_py)?;
    let coord = Coordinate {
        topology,
        game: game(game_kind)?,
        rule,
        params: prefnet::PayoffParams::new(alpha, beta).map_err(to_py)?,
        rho0,
    };
    let r = py
        .detach(|| prefnet::experiments::run_realization(&coord, &spec, init, 0, seed))
        .map_err(to_py)?;

    let d = record_dict(py, &r.record)?;
    let state = &r.result.final_state;
    // u32 so the lists reach Python as ints rather than bytes
    d.set_item("actions", state.actions().iter().map(|a| u32::from(a.as_u8())).collect::<Vec<_>>())?;
    d.set_item("preferences", state.preferences().iter().map(|t| u32::from(t.as_u8())).collect::<Vec<_>>())?;
    d.set_item("graph", PyGraph(r.graph))?;
    if let Some(t) = r.result.trajectory {
        d.set_item("trajectory", t.iter().map(|o| (o.d1, o.df)).collect::<Vec<_>>())?;
    }
    Ok(d)
}

fn record_dict<'py>(py: Python<'py>, r: &SweepRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("topology", &r.topology)?;
    d.set_item("n", r.n)?;
    d.set_item("mean_degree_or_m", r.mean_degree_or_m)?;
    d.set_item("game", r.game.label())?;
    d.set_item("dynamics", &r.dynamics)?;
    d.set_item("info", &r.info)?;
    d.set_item("alpha", r.alpha)?;
    d.set_item("beta", r.beta)?;
    d.set_item("ratio", r.ratio)?;
    d.set_item("rho0", r.rho0)?;
    d.set_item("realization", r.realization)?;
    d.set_item("seed", r.seed)?;
    d.set_item("steps", r.steps)?;
    d.set_item("termination", r.termination.label())?;
    d.set_item("d1", r.d1)?;
    d.set_item("df", r.df)?;
    d.set_item("class", r.class.map(|c| c.label()))?;
    Ok(d)
}

/// Runs a sweep described by a config document; returns one dict per
/// realization.
#[pyfunction]
fn sweep<'py>(py: Python<'py>, config: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = io::parse_config(config).map_err(to_py)?;
    let records = py.detach(|| prefnet::run_sweep(&cfg)).map_err(to_py)?;
    records.iter().map(|r| record_dict(py, r)).collect()
}

/// Runs a sweep config and writes the results CSV (and optionally the
/// aggregate CSV) atomically.
#[pyfunction]
#[pyo3(signature = (config, out, aggregate_out = None))]
fn sweep_to_file(py: Python<'_>, config: &str, out: PathBuf, aggregate_out: Option<PathBuf>) -> PyResult<usize> {
    let cfg = io::parse_config(config).map_err(to_py)?;
    py.detach(|| {
        let records = prefnet::run_sweep(&cfg)?;
        io::write_results(&records, &out)?;
        if let Some(path) = aggregate_out {
            io::write_atomic(&path, &io::aggregate_to_csv(&prefnet::aggregate(&records))?)?;
        }
        Ok(records.len())
    })
    .map_err(to_py)
}

/// Aggregate surface of a named figure analogue as a JSON document.
#[pyfunction]
#[pyo3(signature = (name, base_seed = 0, realizations = None))]
fn figure(py: Python<'_>, name: &str, base_seed: u64, realizations: Option<usize>) -> PyResult<String> {
    let fig: Figure = name.parse().map_err(to_py)?;
    let mut cfg = fig.config(base_seed);
    if let Some(r) = realizations {
        cfg.realizations = r;
    }
    cfg.validate().map_err(to_py)?;
    let bytes = py
        .detach(|| {
            let records = prefnet::run_sweep(&cfg)?;
            io::aggregate_to_json(&prefnet::aggregate(&records))
        })
        .map_err(to_py)?;
    String::from_utf8(bytes).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Config document behind a named figure analogue.
#[pyfunction]
#[pyo3(signature = (name, base_seed = 0))]
fn figure_config(name: &str, base_seed: u64) -> PyResult<String> {
    let fig: Figure = name.parse().map_err(to_py)?;
    Ok(io::config_to_toml(&fig.config(base_seed)))
}

/// Built-in oracle checks as `(name, passed, detail)` triples.
#[pyfunction]
fn run_checks(py: Python<'_>) -> Vec<(&'static str, bool, String)> {
    py.detach(verify::run_all)
        .into_iter()
        .map(|c| (c.name, c.passed, c.detail))
        .collect()
}

#[pymodule]
fn prefnet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPayoffParams>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(best_response, m)?)?;
    m.add_function(wrap_pyfunction!(best_response_incomplete, m)?)?;
    m.add_function(wrap_pyfunction!(regime_predict, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_equilibria, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_to_file, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    m.add_function(wrap_pyfunction!(figure_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
