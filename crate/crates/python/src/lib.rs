//! Python bindings. Profiles cross the boundary as lists of ints: 0/1
//! purchase flags in SGG, target node ids in SGG-AC.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sharegame::dynamics::{self, PickRule};
use sharegame::equilibria::{self, CostStats, EfficiencyReport};
use sharegame::netgraph::{self, FamilySpec};
use sharegame::optimum::{self, DEFAULT_NODE_BUDGET};
use sharegame::{cli, Error, Neighborhoods, OwnerSet, Profile, Variant};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Undirected simple graph on nodes `0..n`.
#[pyclass(module = "sharegame_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Graph {
    inner: netgraph::Graph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (n, edges))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = netgraph::Graph::from_edges(n, edges).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Named family such as "karate", "star:100" or "er:50:0.1".
    #[staticmethod]
    #[pyo3(signature = (name, seed = cli::DEFAULT_SEED))]
    fn family(name: &str, seed: u64) -> PyResult<Self> {
        let spec = cli::parse_family(name, seed).map_err(to_py)?;
        Self::from_spec(&spec)
    }

    /// Parses edge-list text; returns the graph and the original ids of
    /// its nodes.
    #[staticmethod]
    fn parse_edge_list(text: &str) -> PyResult<(Self, Vec<u64>)> {
        let loaded = netgraph::load_edge_list(text).map_err(to_py)?;
        Ok((
            Self {
                inner: loaded.graph,
            },
            loaded.original_ids,
        ))
    }

    #[staticmethod]
    fn read_edge_list(path: std::path::PathBuf) -> PyResult<(Self, Vec<u64>)> {
        let loaded = netgraph::read_edge_list(&path).map_err(to_py)?;
        Ok((
            Self {
                inner: loaded.graph,
            },
            loaded.original_ids,
        ))
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn neighbors(&self, i: usize) -> PyResult<Vec<usize>> {
        self.check_node(i)?;
        Ok(self.inner.neighbors(i).to_vec())
    }

    /// Closed k-hop neighborhood of `i`, sorted.
    fn k_hop(&self, i: usize, k: usize) -> PyResult<Vec<usize>> {
        self.inner.k_hop_neighborhood(i, k).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={})",
            self.inner.node_count(),
            self.inner.edge_count()
        )
    }
}

impl Graph {
    fn from_spec(spec: &FamilySpec) -> PyResult<Self> {
        Ok(Self {
            inner: netgraph::generate(spec).map_err(to_py)?,
        })
    }

    fn check_node(&self, i: usize) -> PyResult<()> {
        if i < self.inner.node_count() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("node {i} out of range")))
        }
    }
}

/// Game parameters; build with `GameConfig.sgg(...)` or `GameConfig.sgg_ac(...)`.
#[pyclass(module = "sharegame_py", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct GameConfig {
    inner: sharegame::GameConfig,
}

#[pymethods]
impl GameConfig {
    #[staticmethod]
    #[pyo3(signature = (k, b = 2.0, p = 1.0))]
    fn sgg(k: usize, b: f64, p: f64) -> PyResult<Self> {
        let inner = sharegame::GameConfig::sgg(k, b, p).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Exactly one of `a` (access cost) and `xi` (threshold) must be given.
    #[staticmethod]
    #[pyo3(signature = (k, b = 2.0, p = 1.0, *, a = None, xi = None))]
    fn sgg_ac(k: usize, b: f64, p: f64, a: Option<f64>, xi: Option<usize>) -> PyResult<Self> {
        let inner = match (a, xi) {
            (Some(a), None) => sharegame::GameConfig::sgg_ac(k, b, p, a),
            (None, Some(xi)) => sharegame::GameConfig::sgg_ac_with_xi(k, b, p, xi),
            _ => return Err(PyValueError::new_err("give exactly one of a= and xi=")),
        }
        .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn variant(&self) -> &'static str {
        self.inner.variant().as_str()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.benefit()
    }

    #[getter]
    fn p(&self) -> f64 {
        self.inner.price()
    }

    #[getter]
    fn a(&self) -> Option<f64> {
        self.inner.access_cost()
    }

    #[getter]
    fn xi(&self) -> Option<usize> {
        self.inner.xi()
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        match c.variant() {
            Variant::Sgg => format!(
                "GameConfig(SGG, k={}, b={}, p={})",
                c.k(),
                c.benefit(),
                c.price()
            ),
            Variant::SggAc => format!(
                "GameConfig(SGG-AC, k={}, b={}, p={}, a={}, xi={})",
                c.k(),
                c.benefit(),
                c.price(),
                c.access_cost().unwrap_or_default(),
                c.xi().unwrap_or_default()
            ),
        }
    }
}

/// A game on a graph. Holds its own copy of the graph.
#[pyclass(module = "sharegame_py", frozen)]
pub struct Game {
    graph: netgraph::Graph,
    cfg: sharegame::GameConfig,
}

#[pymethods]
impl Game {
    #[new]
    fn new(graph: &Graph, config: &GameConfig) -> Self {
        Self {
            graph: graph.inner.clone(),
            cfg: config.inner,
        }
    }

    #[getter]
    fn config(&self) -> GameConfig {
        GameConfig { inner: self.cfg }
    }

    #[getter]
    fn graph(&self) -> Graph {
        Graph {
            inner: self.graph.clone(),
        }
    }

    fn utility(&self, profile: Vec<usize>, i: usize) -> PyResult<f64> {
        self.with(profile, Some(i), |g, s| Ok(g.utility(&s, i)))
    }

    /// Utility of `i` after switching to `x`, everyone else fixed.
    fn deviation_utility(&self, profile: Vec<usize>, i: usize, x: usize) -> PyResult<f64> {
        self.with(profile, Some(i), |g, s| {
            if g.strategy_set(i).contains(&x) {
                Ok(g.deviation_utility(&s, i, x))
            } else {
                Err(PyValueError::new_err(format!(
                    "{x} is not a strategy of node {i}"
                )))
            }
        })
    }

    fn best_response_set(&self, profile: Vec<usize>, i: usize) -> PyResult<Vec<usize>> {
        self.with(profile, Some(i), |g, s| Ok(g.best_response_set(&s, i)))
    }

    fn followers(&self, profile: Vec<usize>, i: usize) -> PyResult<Vec<usize>> {
        self.with(profile, Some(i), |g, s| g.followers(&s, i).map_err(to_py))
    }

    fn is_nash(&self, profile: Vec<usize>) -> PyResult<bool> {
        self.with(profile, None, |g, s| Ok(g.is_nash(&s)))
    }

    /// Every node buys or uses an owner within range.
    fn is_in_t(&self, profile: Vec<usize>) -> PyResult<bool> {
        self.with(profile, None, |g, s| Ok(g.is_in_t(&s)))
    }

    fn social_cost(&self, profile: Vec<usize>) -> PyResult<f64> {
        self.with(profile, None, |g, s| g.social_cost(&s).map_err(to_py))
    }

    fn owners(&self, profile: Vec<usize>) -> PyResult<Vec<usize>> {
        self.with(profile, None, |_, s| Ok(s.owners().as_slice().to_vec()))
    }

    /// One run of best-response dynamics.
    fn dynamics<'py>(&self, py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let game = self.game();
        let out = py
            .detach(|| dynamics::best_response_dynamics(&game, seed))
            .map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("profile", out.profile.choices().to_vec())?;
        d.set_item("passes", out.passes)?;
        d.set_item("deviations", out.deviations)?;
        d.set_item("seed", out.seed)?;
        d.set_item(
            "case_counts",
            out.case_counts
                .iter()
                .map(|c| c.to_vec())
                .collect::<Vec<_>>(),
        )?;
        d.set_item(
            "social_cost",
            game.social_cost(&out.profile).map_err(to_py)?,
        )?;
        Ok(d)
    }

    /// An equilibrium built greedily; `seed=None` picks the lowest ids.
    #[pyo3(signature = (seed = None))]
    fn greedy_ne(&self, seed: Option<u64>) -> Vec<usize> {
        let rule = seed.map_or(PickRule::LowestId, PickRule::Random);
        dynamics::greedy_ne(&self.game(), rule).choices().to_vec()
    }

    /// Turns a dominating owner set into an SGG-AC equilibrium.
    fn stabilize(&self, owners: Vec<usize>) -> PyResult<Vec<usize>> {
        let s = dynamics::stabilize(&self.game(), &OwnerSet::new(owners)).map_err(to_py)?;
        Ok(s.choices().to_vec())
    }

    #[pyo3(signature = (runs = cli::DEFAULT_RUNS, seed = cli::DEFAULT_SEED))]
    fn cost_stats<'py>(
        &self,
        py: Python<'py>,
        runs: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let game = self.game();
        let stats = py
            .detach(|| equilibria::empirical_cost_stats(&game, runs, seed))
            .map_err(to_py)?;
        stats_dict(py, &stats)
    }

    /// Exact price of anarchy and stability on small graphs.
    #[pyo3(signature = (max_n = None))]
    fn exact_efficiency<'py>(
        &self,
        py: Python<'py>,
        max_n: Option<usize>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let limit = max_n.unwrap_or(match self.cfg.variant() {
            Variant::Sgg => equilibria::DEFAULT_MAX_N_SGG,
            Variant::SggAc => equilibria::DEFAULT_MAX_N_SGGAC,
        });
        let game = self.game();
        let report = py
            .detach(|| equilibria::exact_efficiency(&game, limit))
            .map_err(to_py)?;
        efficiency_dict(py, &report)
    }

    fn __repr__(&self) -> String {
        format!(
            "Game(n={}, {})",
            self.graph.node_count(),
            self.config().__repr__()
        )
    }
}

impl Game {
    fn game(&self) -> sharegame::Game<'_> {
        sharegame::Game::new(&self.graph, self.cfg)
    }

    fn with<T>(
        &self,
        choices: Vec<usize>,
        node: Option<usize>,
        f: impl FnOnce(&sharegame::Game<'_>, Profile) -> PyResult<T>,
    ) -> PyResult<T> {
        let game = self.game();
        let s = Profile::from_choices(self.cfg.variant(), choices);
        game.check_profile(&s).map_err(to_py)?;
        if let Some(i) = node {
            if i >= game.node_count() {
                return Err(PyValueError::new_err(format!("node {i} out of range")));
            }
        }
        f(&game, s)
    }
}

fn stats_dict<'py>(py: Python<'py>, s: &CostStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("runs", s.runs)?;
    d.set_item("mean", s.mean)?;
    d.set_item("std", s.std)?;
    d.set_item("min", s.min)?;
    d.set_item("max", s.max)?;
    d.set_item("mean_passes", s.mean_passes)?;
    Ok(d)
}

fn efficiency_dict<'py>(py: Python<'py>, r: &EfficiencyReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("opt_cost", r.opt_cost)?;
    d.set_item("worst_ne_cost", r.worst_ne_cost)?;
    d.set_item("best_ne_cost", r.best_ne_cost)?;
    d.set_item("poa", r.poa)?;
    d.set_item("pos", r.pos)?;
    d.set_item("exact", r.exact)?;
    Ok(d)
}

/// Minimum distance-k dominating set: `(owners, proven_optimal)`.
#[pyfunction]
#[pyo3(signature = (graph, k, budget = DEFAULT_NODE_BUDGET))]
fn min_dominating_set(
    py: Python<'_>,
    graph: &Graph,
    k: usize,
    budget: u64,
) -> PyResult<(Vec<usize>, bool)> {
    let r = py
        .detach(|| optimum::min_dominating_exact(&graph.inner, k, budget))
        .map_err(to_py)?;
    Ok((r.owners.as_slice().to_vec(), r.proven_optimal))
}

#[pyfunction]
fn greedy_dominating_set(graph: &Graph, k: usize) -> PyResult<Vec<usize>> {
    let hoods = Neighborhoods::new(&graph.inner, k).map_err(to_py)?;
    Ok(optimum::min_dominating_greedy(&hoods).as_slice().to_vec())
}

/// The covering integer program as LP-format text.
#[pyfunction]
#[pyo3(signature = (graph, k, p = 1.0))]
fn export_lp(graph: &Graph, k: usize, p: f64) -> PyResult<String> {
    let hoods = Neighborhoods::new(&graph.inner, k).map_err(to_py)?;
    Ok(optimum::export_ilp(&hoods, p))
}

/// All SGG equilibrium owner sets (k-independent dominating sets).
#[pyfunction]
#[pyo3(signature = (graph, k, max_n = equilibria::DEFAULT_MAX_N_SGG))]
fn sgg_equilibrium_owner_sets(graph: &Graph, k: usize, max_n: usize) -> PyResult<Vec<Vec<usize>>> {
    let hoods = Neighborhoods::new(&graph.inner, k).map_err(to_py)?;
    let sets = equilibria::enumerate_ne_owner_sets_sgg(&hoods, max_n).map_err(to_py)?;
    Ok(sets.iter().map(|s| s.as_slice().to_vec()).collect())
}

/// An SGG-AC equilibrium whose owners are exactly `owners`, if one exists.
#[pyfunction]
fn sggac_witness(
    graph: &Graph,
    k: usize,
    xi: usize,
    owners: Vec<usize>,
) -> PyResult<Option<Vec<usize>>> {
    let hoods = Neighborhoods::new(&graph.inner, k).map_err(to_py)?;
    Ok(equilibria::sggac_witness(&hoods, xi, &OwnerSet::new(owners)).map(|s| s.choices().to_vec()))
}

#[pyfunction]
fn derive_seed(master: u64, run: u64) -> u64 {
    dynamics::derive_seed(master, run)
}

#[pymodule]
pub fn sharegame_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<GameConfig>()?;
    m.add_class::<Game>()?;
    m.add_function(wrap_pyfunction!(min_dominating_set, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_dominating_set, m)?)?;
    m.add_function(wrap_pyfunction!(export_lp, m)?)?;
    m.add_function(wrap_pyfunction!(sgg_equilibrium_owner_sets, m)?)?;
    m.add_function(wrap_pyfunction!(sggac_witness, m)?)?;
    m.add_function(wrap_pyfunction!(derive_seed, m)?)?;
    Ok(())
}
