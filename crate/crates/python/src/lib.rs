//! Python bindings: graphs, generators, the distributed and centralized
//! algorithms, exact solvers and the lower-bound families.
//!
//! Exact values cross the boundary as `fractions.Fraction`.

use powergraph::centralized::{g2mvc_53, g2mvc_hybrid};
use powergraph::exact::{exact_mds_square, exact_mds_with, exact_mvc_square, exact_mvc_with, ExactConfig};
use powergraph::generators;
use powergraph::lowerbound::{self, bits_from_hex, Family, LowerBoundInstance};
use powergraph::mds::g2mds_logd;
use powergraph::mvc::{g2mvc_cc_voting, g2mvc_eps, g2mwvc_eps, g2mvc_trivial};
use powergraph::rational::parse_rational;
use powergraph::sim::{Model, RoundStats};
use powergraph::{is_feasible, ProblemKind, Rational, Solution};
use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(powergraph, PowergraphError, PyValueError, "Raised by every failing operation; `args[0]` is the error kind.");

fn core_err(e: powergraph::Error) -> PyErr {
    PowergraphError::new_err((e.kind(), e.to_string()))
}

fn graph_err(e: powergraph::GraphError) -> PyErr {
    core_err(e.into())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

/// Accepts an int, a `Fraction` or a string such as `"1/3"`.
fn rational_arg(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(i) = value.extract::<i64>() {
        return Ok(Rational::from_integer(i));
    }
    if let Ok(s) = value.extract::<String>() {
        return parse_rational(&s).map_err(|e| PyValueError::new_err(e.0));
    }
    let numer: i64 = value.getattr("numerator")?.extract()?;
    let denom: i64 = value.getattr("denominator")?.extract()?;
    if denom == 0 {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

fn model_arg(name: &str, bandwidth: Option<usize>) -> PyResult<Model> {
    let model = match name {
        "congest" => Model::congest(),
        "clique" => Model::clique(),
        other => return Err(PyValueError::new_err(format!("unknown model {other:?}"))),
    };
    Ok(match bandwidth {
        Some(words) => model.with_bandwidth(words),
        None => model,
    })
}

fn kind_arg(name: &str) -> PyResult<ProblemKind> {
    name.parse().map_err(|e: String| PyValueError::new_err(e))
}

/// Simple undirected graph with optional rational vertex weights.
#[pyclass(name = "Graph", module = "powergraph", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: powergraph::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, weights=None))]
    fn new(n: usize, edges: Vec<(usize, usize)>, weights: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let g = powergraph::Graph::from_edges(n, edges).map_err(graph_err)?;
        let g = match weights {
            Some(ws) => {
                let ws = ws.iter().map(rational_arg).collect::<PyResult<Vec<_>>>()?;
                g.with_weights(ws).map_err(graph_err)?
            }
            None => g,
        };
        Ok(Self { inner: g })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn is_weighted(&self) -> bool {
        self.inner.is_weighted()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.inner.n() {
            return Err(PyIndexError::new_err(v));
        }
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn weights<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        (0..self.inner.n()).map(|v| fraction(py, &self.inner.weight(v))).collect()
    }

    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn square(&self) -> Self {
        Self { inner: self.inner.square() }
    }

    fn without_weights(&self) -> Self {
        Self { inner: self.inner.clone().without_weights() }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let w = if self.inner.is_weighted() { ", weighted" } else { "" };
        format!("Graph(n={}, m={}{w})", self.inner.n(), self.inner.m())
    }
}

/// Output of an algorithm: members, exact value and communication cost.
#[pyclass(name = "Result", module = "powergraph", frozen, get_all)]
struct PyResult_ {
    members: Vec<usize>,
    value: Py<PyAny>,
    rounds: u64,
    messages: u64,
    max_message_bits: u64,
    violations: u64,
}

#[pymethods]
impl PyResult_ {
    fn __len__(&self) -> usize {
        self.members.len()
    }

    fn __repr__(&self) -> String {
        format!("Result(members={:?}, rounds={})", self.members, self.rounds)
    }
}

fn wrap(py: Python<'_>, sol: Solution, stats: RoundStats) -> PyResult<PyResult_> {
    Ok(PyResult_ {
        value: fraction(py, &sol.value)?.unbind(),
        members: sol.members,
        rounds: stats.rounds,
        messages: stats.messages,
        max_message_bits: stats.max_message_bits,
        violations: stats.violations,
    })
}

fn central(py: Python<'_>, sol: powergraph::Result<Solution>) -> PyResult<PyResult_> {
    wrap(py, sol.map_err(core_err)?, RoundStats::default())
}

#[pyfunction]
#[pyo3(signature = (g, eps, model="congest", bandwidth=None))]
fn mvc_eps(py: Python<'_>, g: &PyGraph, eps: &Bound<'_, PyAny>, model: &str, bandwidth: Option<usize>) -> PyResult<PyResult_> {
    let (sol, stats) = g2mvc_eps(&g.inner, &rational_arg(eps)?, model_arg(model, bandwidth)?).map_err(core_err)?;
    wrap(py, sol, stats)
}

#[pyfunction]
#[pyo3(signature = (g, eps, model="congest", bandwidth=None))]
fn mwvc_eps(py: Python<'_>, g: &PyGraph, eps: &Bound<'_, PyAny>, model: &str, bandwidth: Option<usize>) -> PyResult<PyResult_> {
    let (sol, stats) = g2mwvc_eps(&g.inner, &rational_arg(eps)?, model_arg(model, bandwidth)?).map_err(core_err)?;
    wrap(py, sol, stats)
}

#[pyfunction]
#[pyo3(signature = (g, eps, seed=0))]
fn mvc_cc_voting(py: Python<'_>, g: &PyGraph, eps: &Bound<'_, PyAny>, seed: u64) -> PyResult<PyResult_> {
    let (sol, stats) = g2mvc_cc_voting(&g.inner, &rational_arg(eps)?, seed).map_err(core_err)?;
    wrap(py, sol, stats)
}

#[pyfunction]
#[pyo3(signature = (g, r=1))]
fn mvc_trivial(py: Python<'_>, g: &PyGraph, r: usize) -> PyResult<PyResult_> {
    central(py, g2mvc_trivial(&g.inner, r))
}

#[pyfunction]
fn mvc_five_thirds(py: Python<'_>, g: &PyGraph) -> PyResult<PyResult_> {
    central(py, Ok(g2mvc_53(&g.inner).0))
}

#[pyfunction]
#[pyo3(signature = (g, model="congest"))]
fn mvc_hybrid(py: Python<'_>, g: &PyGraph, model: &str) -> PyResult<PyResult_> {
    let (sol, stats) = g2mvc_hybrid(&g.inner, model_arg(model, None)?).map_err(core_err)?;
    wrap(py, sol, stats)
}

#[pyfunction]
#[pyo3(signature = (g, seed=0))]
fn mds_logd(py: Python<'_>, g: &PyGraph, seed: u64) -> PyResult<PyResult_> {
    let (sol, stats) = g2mds_logd(&g.inner, seed).map_err(core_err)?;
    wrap(py, sol, stats)
}

/// Exact optimum for `kind` in `{"vc1", "vc2", "ds1", "ds2"}`.
#[pyfunction]
#[pyo3(signature = (g, kind, cap=64))]
fn exact(py: Python<'_>, g: &PyGraph, kind: &str, cap: usize) -> PyResult<PyResult_> {
    let cfg = ExactConfig::with_cap(cap);
    let sol = match kind_arg(kind)? {
        ProblemKind::Vc1 => exact_mvc_with(&g.inner, &cfg),
        ProblemKind::Vc2 => exact_mvc_square(&g.inner, &cfg),
        ProblemKind::Ds1 => exact_mds_with(&g.inner, &cfg),
        ProblemKind::Ds2 => exact_mds_square(&g.inner, &cfg),
    };
    central(py, sol)
}

#[pyfunction]
#[pyo3(name = "is_feasible")]
fn feasible(g: &PyGraph, kind: &str, members: Vec<usize>) -> PyResult<bool> {
    is_feasible(&g.inner, kind_arg(kind)?, &members).map_err(graph_err)
}

#[pyfunction]
fn path(n: usize) -> PyGraph {
    PyGraph { inner: generators::path(n) }
}

#[pyfunction]
fn cycle(n: usize) -> PyGraph {
    PyGraph { inner: generators::cycle(n) }
}

#[pyfunction]
fn star(leaves: usize) -> PyGraph {
    PyGraph { inner: generators::star(leaves) }
}

#[pyfunction]
fn complete(n: usize) -> PyGraph {
    PyGraph { inner: generators::complete(n) }
}

#[pyfunction]
#[pyo3(signature = (n, p, seed, connected=false))]
fn gnp(n: usize, p: f64, seed: u64, connected: bool) -> PyResult<PyGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PyValueError::new_err("p must lie in [0, 1]"));
    }
    let inner = if connected {
        generators::connected_gnp(n, p, seed)
    } else {
        generators::gnp(n, p, &mut generators::rng_from_seed(seed))
    };
    Ok(PyGraph { inner })
}

#[pyfunction]
fn random_tree(n: usize, seed: u64) -> PyGraph {
    PyGraph { inner: generators::random_tree(n, &mut generators::rng_from_seed(seed)) }
}

/// Copy of `g` with integer weights drawn uniformly from `1..=max_weight`.
#[pyfunction]
fn random_weights(g: &PyGraph, max_weight: i64, seed: u64) -> PyResult<PyGraph> {
    if max_weight < 1 {
        return Err(PyValueError::new_err("max_weight must be at least 1"));
    }
    let w = generators::random_weights(g.inner.n(), max_weight, &mut generators::rng_from_seed(seed));
    Ok(PyGraph { inner: g.inner.clone().with_weights(w).map_err(graph_err)? })
}

#[pyfunction]
#[pyo3(signature = (g, length=3, delete_original=true))]
fn dangling_transform(g: &PyGraph, length: usize, delete_original: bool) -> PyGraph {
    PyGraph { inner: lowerbound::dangling_transform(&g.inner, length, delete_original) }
}

#[pyfunction]
fn merged_dangling_transform(g: &PyGraph) -> PyResult<PyGraph> {
    Ok(PyGraph { inner: lowerbound::merged_dangling_transform(&g.inner).map_err(core_err)? })
}

/// A generated two-party instance with its communication split and
/// decision thresholds.
#[pyclass(name = "LowerBoundInstance", module = "powergraph", frozen)]
struct PyInstance {
    inner: LowerBoundInstance,
}

#[pymethods]
impl PyInstance {
    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family.as_str()
    }

    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph { inner: self.inner.graph.clone() }
    }

    #[getter]
    fn problem(&self) -> &'static str {
        self.inner.problem.as_str()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels.clone()
    }

    #[getter]
    fn alice(&self) -> Vec<usize> {
        self.inner.partition.alice.clone()
    }

    #[getter]
    fn bob(&self) -> Vec<usize> {
        self.inner.partition.bob.clone()
    }

    #[getter]
    fn cut(&self) -> Vec<(usize, usize)> {
        self.inner.cut.clone()
    }

    #[getter]
    fn cut_cap(&self) -> usize {
        self.inner.cut_cap
    }

    /// `(yes_at_most, no_at_least)`.
    #[getter]
    fn thresholds<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let t = &self.inner.thresholds;
        Ok((fraction(py, &t.yes_at_most)?, fraction(py, &t.no_at_least)?))
    }

    /// Solves the instance exactly and reports whether the threshold
    /// predicate agrees with set disjointness.
    #[pyo3(signature = (cap=400))]
    fn verify<'py>(&self, py: Python<'py>, cap: usize) -> PyResult<Bound<'py, PyDict>> {
        let r = lowerbound::verify_family(&self.inner, &ExactConfig::with_cap(cap)).map_err(core_err)?;
        let d = PyDict::new(py);
        d.set_item("value", fraction(py, &r.value)?)?;
        d.set_item("predicate", r.predicate)?;
        d.set_item("disj", r.disj)?;
        d.set_item("agreement", r.agreement)?;
        d.set_item("cut_size", r.cut_size)?;
        d.set_item("cut_within_cap", r.cut_within_cap)?;
        d.set_item("partition_sane", r.partition_sane)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("LowerBoundInstance({}, n={})", self.inner.family, self.inner.graph.n())
    }
}

/// Builds a lower-bound instance. `x` and `y` are hex strings (bit `i` is
/// bit `i` of the number); they hold `k²` bits for the path families and
/// `t²` bits for the set-system families.
#[pyfunction]
#[pyo3(signature = (family, x, y, k=2, t=2, ell=8, r=2, seed=0))]
#[allow(clippy::too_many_arguments)]
fn lower_bound(family: &str, x: &str, y: &str, k: usize, t: usize, ell: usize, r: usize, seed: u64) -> PyResult<PyInstance> {
    let family: Family = family.parse().map_err(|e: String| PyValueError::new_err(e))?;
    let side = if family.uses_set_system() { t } else { k };
    let bits = side.checked_mul(side).ok_or_else(|| PyValueError::new_err("size too large"))?;
    let x = bits_from_hex(x, bits).map_err(core_err)?;
    let y = bits_from_hex(y, bits).map_err(core_err)?;
    let inner = match family {
        Family::MvcBase => lowerbound::gen_mvc_base(k, &x, &y),
        Family::MvcSq => lowerbound::gen_mvc_square(k, &x, &y),
        Family::MwvcSq => lowerbound::gen_mwvc_square(k, &x, &y),
        Family::MdsBase => lowerbound::gen_mds_base(k, &x, &y),
        Family::MdsSqExact => lowerbound::gen_mds_square_exact(k, &x, &y),
        Family::MwdsSqApprox => lowerbound::gen_mwds_square_approx(t, ell, r, &x, &y, seed),
        Family::MdsSqApprox => lowerbound::gen_mds_square_approx_unweighted(t, ell, r, &x, &y, seed),
    }
    .map_err(core_err)?;
    Ok(PyInstance { inner })
}

#[pymodule]
#[pyo3(name = "powergraph")]
fn powergraph_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PowergraphError", m.py().get_type::<PowergraphError>())?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyResult_>()?;
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(mvc_eps, m)?)?;
    m.add_function(wrap_pyfunction!(mwvc_eps, m)?)?;
    m.add_function(wrap_pyfunction!(mvc_cc_voting, m)?)?;
    m.add_function(wrap_pyfunction!(mvc_trivial, m)?)?;
    m.add_function(wrap_pyfunction!(mvc_five_thirds, m)?)?;
    m.add_function(wrap_pyfunction!(mvc_hybrid, m)?)?;
    m.add_function(wrap_pyfunction!(mds_logd, m)?)?;
    m.add_function(wrap_pyfunction!(exact, m)?)?;
    m.add_function(wrap_pyfunction!(feasible, m)?)?;
    m.add_function(wrap_pyfunction!(path, m)?)?;
    m.add_function(wrap_pyfunction!(cycle, m)?)?;
    m.add_function(wrap_pyfunction!(star, m)?)?;
    m.add_function(wrap_pyfunction!(complete, m)?)?;
    m.add_function(wrap_pyfunction!(gnp, m)?)?;
    m.add_function(wrap_pyfunction!(random_tree, m)?)?;
    m.add_function(wrap_pyfunction!(random_weights, m)?)?;
    m.add_function(wrap_pyfunction!(dangling_transform, m)?)?;
    m.add_function(wrap_pyfunction!(merged_dangling_transform, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    Ok(())
}
