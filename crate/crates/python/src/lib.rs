//! Python bindings: graphs, slot selection, routing, reconfiguration and
//! whole simulation runs.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eon_itinerant::reconfig::{reconfigure_complete, reconfigure_proposed, Connection, Outcome, ReconfigAlg};
use eon_itinerant::routing::{route_demand, Path, RouteSetup, RoutingAlg, DEFAULT_K};
use eon_itinerant::simulator::{self, FailurePolicy, Metric, RunConfig};
use eon_itinerant::spectrum::{self, Policy, SliceSet, Slot};
use eon_itinerant::topology::{self, EonGraph};

fn err(e: eon_itinerant::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn bad(msg: String) -> PyErr {
    PyValueError::new_err(msg)
}

fn policy(name: &str) -> PyResult<Policy> {
    Policy::parse(name).ok_or_else(|| bad(format!("unknown policy `{name}`; allowed: first, fittest, random")))
}

fn routing(name: &str, k: usize) -> PyResult<RoutingAlg> {
    RoutingAlg::parse(name, k).ok_or_else(|| bad(format!("unknown routing `{name}`; allowed: optimal, yen, ldasp")))
}

fn reconfig_alg(name: &str) -> PyResult<ReconfigAlg> {
    ReconfigAlg::parse(name).ok_or_else(|| bad(format!("unknown reconfig `{name}`; allowed: proposed, complete")))
}

fn slot(g: &EonGraph, lo: usize, hi: usize) -> PyResult<Slot> {
    if lo >= hi || hi > g.n_slices() {
        return Err(bad(format!("slot {lo}..{hi} outside 0..{}", g.n_slices())));
    }
    Ok(Slot::new(lo, hi))
}

/// Network graph with per-link spectrum state.
#[pyclass(name = "Graph")]
pub struct PyGraph {
    inner: EonGraph,
}

#[pymethods]
impl PyGraph {
    /// Empty graph with `nodes` unplaced nodes; add links with `add_link`.
    #[new]
    fn new(nodes: usize, slices: usize) -> PyResult<Self> {
        if slices == 0 {
            return Err(bad("need at least one slice".into()));
        }
        Ok(PyGraph {
            inner: EonGraph::with_nodes(nodes, slices),
        })
    }

    /// Random Gabriel graph on a `width_km` x `height_km` area.
    #[staticmethod]
    #[pyo3(signature = (nodes, width_km=1000.0, height_km=1000.0, slices=400, seed=1))]
    fn generate(nodes: usize, width_km: f64, height_km: f64, slices: usize, seed: u64) -> PyResult<Self> {
        if nodes < 2 || !(width_km > 0.0 && height_km > 0.0) || slices == 0 {
            return Err(bad("need 2+ nodes, a positive area and 1+ slices".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(PyGraph {
            inner: topology::generate_gabriel(nodes, width_km, height_km, slices, &mut rng),
        })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        EonGraph::from_text(text).map(|inner| PyGraph { inner }).map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn add_link(&mut self, a: usize, b: usize, length_km: u64) -> PyResult<usize> {
        let n = self.inner.node_count();
        if a == b || a >= n || b >= n || length_km == 0 || self.inner.link_between(a, b).is_some() {
            return Err(bad(format!("invalid link {a}-{b} ({length_km} km)")));
        }
        Ok(self.inner.add_link(a, b, length_km))
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn link_count(&self) -> usize {
        self.inner.link_count()
    }

    #[getter]
    fn n_slices(&self) -> usize {
        self.inner.n_slices()
    }

    fn coords(&self) -> Vec<(f64, f64)> {
        self.inner.coords().iter().map(|p| (p.x, p.y)).collect()
    }

    /// `(a, b, length_km)` per link.
    fn links(&self) -> Vec<(usize, usize, u64)> {
        self.inner.links().iter().map(|l| (l.a, l.b, l.length_km)).collect()
    }

    /// Free slice indices of link `e`.
    fn free_slices(&self, e: usize) -> PyResult<Vec<usize>> {
        if e >= self.inner.link_count() {
            return Err(bad(format!("no link {e}")));
        }
        Ok(self.inner.available(e).iter().collect())
    }

    fn utilization(&self) -> f64 {
        self.inner.utilization()
    }

    /// Occupies `lo..hi` along the node path.
    fn allocate(&mut self, nodes: Vec<usize>, lo: usize, hi: usize) -> PyResult<()> {
        let p = path(&self.inner, &nodes)?;
        let s = slot(&self.inner, lo, hi)?;
        self.inner.allocate(&p, s).map_err(err)
    }

    fn release(&mut self, nodes: Vec<usize>, lo: usize, hi: usize) -> PyResult<()> {
        let p = path(&self.inner, &nodes)?;
        let s = slot(&self.inner, lo, hi)?;
        self.inner.release(&p, s).map_err(err)
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = topology::graph_stats(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("alpha", s.alpha)?;
        d.set_item("mean_sp_length_km", s.mean_sp_length_km)?;
        d.set_item("diameter_km", s.diameter_km)?;
        d.set_item("link_count", s.link_count)?;
        d.set_item("mean_degree", s.mean_degree)?;
        d.set_item("mean_link_length_km", s.mean_link_length_km)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(nodes={}, links={}, slices={})",
            self.inner.node_count(),
            self.inner.link_count(),
            self.inner.n_slices()
        )
    }
}

fn path(g: &EonGraph, nodes: &[usize]) -> PyResult<Path> {
    if nodes.iter().any(|&n| n >= g.node_count()) {
        return Err(bad(format!("node out of range in {nodes:?}")));
    }
    Path::from_nodes(g, nodes).ok_or_else(|| bad(format!("{nodes:?} is not a path of the graph")))
}

/// Slot of `width` slices chosen from the free indices `free` out of
/// `n_slices`, as `(lo, hi)` or None.
#[pyfunction]
#[pyo3(signature = (free, n_slices, width, policy="first", seed=0))]
fn select_slot(free: Vec<usize>, n_slices: usize, width: usize, policy: &str, seed: u64) -> PyResult<Option<(usize, usize)>> {
    if width == 0 || free.iter().any(|&i| i >= n_slices) {
        return Err(bad("width must be positive and indices below n_slices".into()));
    }
    let avail = SliceSet::from_indices(n_slices, free);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(spectrum::select_slot(&avail, width, self::policy(policy)?, &mut rng).map(|s| (s.lo, s.hi)))
}

type Route = (Vec<usize>, u64, (usize, usize));

/// Path and slot for a demand: `(nodes, length_km, (lo, hi))` or None.
#[pyfunction]
#[pyo3(signature = (graph, s, t, width, routing="optimal", policy="first", cap_km=None, k=DEFAULT_K, seed=0))]
#[allow(clippy::too_many_arguments)]
fn route(
    graph: &PyGraph,
    s: usize,
    t: usize,
    width: usize,
    routing: &str,
    policy: &str,
    cap_km: Option<u64>,
    k: usize,
    seed: u64,
) -> PyResult<Option<Route>> {
    let g = &graph.inner;
    if s >= g.node_count() || t >= g.node_count() || s == t || width == 0 || k == 0 {
        return Err(bad("need distinct nodes in range, width >= 1 and k >= 1".into()));
    }
    let setup = RouteSetup::new(self::routing(routing, k)?, self::policy(policy)?, cap_km.unwrap_or(u64::MAX));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(route_demand(g, s, t, width, &setup, &mut rng).map(|(p, slot)| (p.nodes().to_vec(), p.length_km(), (slot.lo, slot.hi))))
}

/// Moves the far end of a connection occupying `nodes` on `lo..hi` to
/// `t_new`. The graph must hold the connection; it is left unchanged.
#[pyfunction]
#[pyo3(signature = (graph, nodes, lo, hi, t_new, algorithm="proposed", routing="optimal", policy="first", cap_km=None, k=DEFAULT_K, seed=0))]
#[allow(clippy::too_many_arguments)]
fn reconfigure<'py>(
    py: Python<'py>,
    graph: &mut PyGraph,
    nodes: Vec<usize>,
    lo: usize,
    hi: usize,
    t_new: usize,
    algorithm: &str,
    routing: &str,
    policy: &str,
    cap_km: Option<u64>,
    k: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let g = &mut graph.inner;
    let p = path(g, &nodes)?;
    let s = slot(g, lo, hi)?;
    if p.is_empty() || t_new >= g.node_count() {
        return Err(bad("connection needs at least one link and t_new in range".into()));
    }
    if p.links().iter().any(|&e| g.available(e).contains_slot(s)) {
        return Err(bad("the graph does not hold this connection".into()));
    }
    let conn = Connection {
        id: 0,
        s: p.source(),
        t: p.target(),
        path: p,
        slot: s,
    };
    let setup = RouteSetup::new(self::routing(routing, k)?, self::policy(policy)?, cap_km.unwrap_or(u64::MAX));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = match reconfig_alg(algorithm)? {
        ReconfigAlg::Proposed => reconfigure_proposed(g, &conn, t_new, &setup, &mut rng),
        ReconfigAlg::Complete => reconfigure_complete(g, &conn, t_new, &setup, &mut rng).map_err(err)?,
    };
    let d = PyDict::new(py);
    let (outcome, via) = match r.outcome {
        Outcome::Bridged(v) => ("bridged", Some(v)),
        Outcome::Complete => ("complete", None),
        Outcome::Failed => ("failed", None),
    };
    d.set_item("outcome", outcome)?;
    d.set_item("via", via)?;
    d.set_item("path", r.new_path.as_ref().map(|p| p.nodes().to_vec()))?;
    d.set_item("slot", r.new_slot.map(|s| (s.lo, s.hi)))?;
    d.set_item("new_links", r.new_link_count)?;
    d.set_item("reused_links", r.reused_link_count)?;
    Ok(d)
}

/// Mean inter-arrival time in hours for offered load `mu`.
#[pyfunction]
fn lambda_for_load(mu: f64, alpha: f64, beta: f64, gamma: f64, n_links: usize, n_slices: usize) -> PyResult<f64> {
    eon_itinerant::traffic::lambda_for_load(mu, alpha, beta, gamma, n_links, n_slices).map_err(err)
}

/// One simulation run; returns metrics, counters and graph statistics.
#[pyfunction]
#[pyo3(signature = (
    load=1.0, seed=1, nodes=100, width_km=1000.0, height_km=1000.0, slices=400, horizon=100.0,
    routing="optimal", reconfig="proposed", policy="fittest", beta=10.0, gamma=10.0,
    hop_shift_mean=0.5, k=DEFAULT_K, warmup=0.0, keep_old_on_failure=false
))]
#[allow(clippy::too_many_arguments)]
fn run_simulation<'py>(
    py: Python<'py>,
    load: f64,
    seed: u64,
    nodes: usize,
    width_km: f64,
    height_km: f64,
    slices: usize,
    horizon: f64,
    routing: &str,
    reconfig: &str,
    policy: &str,
    beta: f64,
    gamma: f64,
    hop_shift_mean: f64,
    k: usize,
    warmup: f64,
    keep_old_on_failure: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = RunConfig {
        nodes,
        width_km,
        height_km,
        n_slices: slices,
        routing: self::routing(routing, k)?,
        reconfig: reconfig_alg(reconfig)?,
        policy: self::policy(policy)?,
        horizon_h: horizon,
        warmup_h: warmup,
        seed,
        on_reconfig_failure: if keep_old_on_failure {
            FailurePolicy::KeepOld
        } else {
            FailurePolicy::Teardown
        },
        ..RunConfig::default()
    };
    cfg.traffic.mu = load;
    cfg.traffic.beta_hours = beta;
    cfg.traffic.gamma = gamma;
    cfg.traffic.hop_shift_mean = hop_shift_mean;
    let report = py.detach(|| simulator::run(&cfg)).map_err(err)?;

    let metrics = PyDict::new(py);
    for m in Metric::ALL {
        metrics.set_item(m.name(), report.metrics.get(m))?;
    }
    let c = report.counts;
    let counts = PyDict::new(py);
    counts.set_item("arrivals", c.arrivals)?;
    counts.set_item("established", c.established)?;
    counts.set_item("reconfig_attempts", c.reconfig_attempts)?;
    counts.set_item("bridged", c.bridged)?;
    counts.set_item("fallback", c.fallback)?;
    counts.set_item("reconfig_failed", c.reconfig_failed)?;
    counts.set_item("teardowns", c.teardowns)?;
    let d = PyDict::new(py);
    d.set_item("seed", report.seed)?;
    d.set_item("config_digest", report.config_digest)?;
    d.set_item("lambda_h", report.lambda_h)?;
    d.set_item("cap_km", report.cap_km)?;
    d.set_item("alpha", report.graph.alpha)?;
    d.set_item("links", report.graph.link_count)?;
    d.set_item("metrics", metrics)?;
    d.set_item("counts", counts)?;
    Ok(d)
}

#[pymodule]
pub fn pyeon(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(select_slot, m)?)?;
    m.add_function(wrap_pyfunction!(route, m)?)?;
    m.add_function(wrap_pyfunction!(reconfigure, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_for_load, m)?)?;
    m.add_function(wrap_pyfunction!(run_simulation, m)?)?;
    Ok(())
}
