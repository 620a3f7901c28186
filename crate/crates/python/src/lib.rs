//! Python bindings.

use num_bigint::BigUint;
use pointconf::bounds::{catalog, tree_exponent as core_tree_exponent};
use pointconf::constructions::generate as core_generate;
use pointconf::counting::{count as core_count, DEFAULT_BUDGET};
use pointconf::graphs::{find_best_cover, make_family, max_matching, Edge};
use pointconf::harness::{fit_exponent as core_fit, run_experiment, ExperimentConfig};
use pointconf::{
    ConstructionKind, ConstructionSpec, CountQuery, Dim, Error, FamilyKind, FamilySpec, Method, Mode, Point,
    Semantics, Tolerance, WeightedGraph, Weights,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pointconf_py, BudgetExceeded, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    if e.is_budget() {
        BudgetExceeded::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn parse_mode(s: &str) -> PyResult<Mode> {
    match s {
        "distance" => Ok(Mode::Distance),
        "dot" => Ok(Mode::DotProduct),
        _ => Err(PyValueError::new_err(format!("mode must be 'distance' or 'dot', got {s:?}"))),
    }
}

fn parse_semantics(s: &str) -> PyResult<Semantics> {
    match s {
        "hom" => Ok(Semantics::Homomorphism),
        "injective" => Ok(Semantics::Injective),
        _ => Err(PyValueError::new_err(format!("semantics must be 'hom' or 'injective', got {s:?}"))),
    }
}

fn parse_method(s: &str) -> PyResult<Method> {
    match s {
        "auto" => Ok(Method::Auto),
        "bruteforce" => Ok(Method::BruteForce),
        "fastdp" => Ok(Method::FastDp),
        _ => Err(PyValueError::new_err(format!("unknown method {s:?}"))),
    }
}

fn weights_of(ws: Vec<f64>) -> Weights {
    match ws.as_slice() {
        [w] => Weights::Uniform(*w),
        _ => Weights::Explicit(ws),
    }
}

/// A finite set of points in the plane or in space.
#[pyclass(name = "PointSet", module = "pointconf_py", frozen)]
struct PyPointSet {
    inner: pointconf::PointSet,
}

#[pymethods]
impl PyPointSet {
    #[new]
    fn new(points: Vec<Vec<f64>>) -> PyResult<Self> {
        let pts = points.iter().map(|c| Point::from_slice(c)).collect::<Result<Vec<_>, _>>().map_err(to_py)?;
        let dim = match pts.first() {
            Some(p) => p.dim(),
            None => Dim::Two,
        };
        Ok(PyPointSet { inner: pointconf::PointSet::new(dim, pts).map_err(to_py)? })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyPointSet { inner: pointconf::io::read_points(path).map_err(to_py)? })
    }

    fn write(&self, path: &str) -> PyResult<()> {
        pointconf::io::write_points(path, &self.inner).map_err(to_py)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim().get()
    }

    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.points().iter().map(|p| p.coords().to_vec()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("PointSet(dim={}, n={})", self.inner.dim().get(), self.inner.len())
    }
}

/// A template graph with one weight per edge.
#[pyclass(name = "Graph", module = "pointconf_py", frozen)]
struct PyGraph {
    inner: WeightedGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertex_count: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        Ok(PyGraph { inner: WeightedGraph::from_triples(vertex_count, &edges).map_err(to_py)? })
    }

    /// `kind` is one of path, cycle, star, tree. Paths, cycles and stars use
    /// `k`; trees use `c` and `h`. A single weight applies to every edge.
    #[staticmethod]
    #[pyo3(signature = (kind, weights, k=None, c=None, h=None))]
    fn family(kind: &str, weights: Vec<f64>, k: Option<usize>, c: Option<usize>, h: Option<usize>) -> PyResult<Self> {
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| PyValueError::new_err(format!("{kind} needs {name}")))
        };
        let fk = match kind {
            "path" => FamilyKind::Path(need(k, "k")?),
            "cycle" => FamilyKind::Cycle(need(k, "k")?),
            "star" => FamilyKind::Star(need(k, "k")?),
            "tree" => FamilyKind::PerfectTree { c: need(c, "c")?, h: need(h, "h")? },
            _ => return Err(PyValueError::new_err(format!("unknown family {kind:?}"))),
        };
        let g = make_family(&FamilySpec::new(fk, weights_of(weights))).map_err(to_py)?;
        Ok(PyGraph { inner: g })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: pointconf::io::read_graph(path).map_err(to_py)? })
    }

    fn write(&self, path: &str) -> PyResult<()> {
        pointconf::io::write_graph(path, &self.inner).map_err(to_py)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner.edges().iter().map(|&Edge { u, v, w }| (u, v, w)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Graph(vertices={}, edges={})", self.inner.vertex_count(), self.inner.edge_count())
    }
}

/// Number of assignments of the template's vertices to points that satisfy
/// every edge.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (points, graph, mode="distance", semantics="hom", method="auto", epsilon=1e-9, budget=DEFAULT_BUDGET))]
fn count(
    py: Python<'_>,
    points: &PyPointSet,
    graph: &PyGraph,
    mode: &str,
    semantics: &str,
    method: &str,
    epsilon: f64,
    budget: u64,
) -> PyResult<BigUint> {
    let q = CountQuery::new(parse_mode(mode)?, parse_semantics(semantics)?)
        .with_method(parse_method(method)?)
        .with_tol(Tolerance::new(epsilon).map_err(to_py)?)
        .with_budget(budget);
    py.detach(|| core_count(&points.inner, &graph.inner, &q))
        .map(|r| r.count)
        .map_err(to_py)
}

#[allow(clippy::too_many_arguments)]
fn construction_spec(
    kind: &str,
    n: usize,
    dim: usize,
    seed: u64,
    mode: &str,
    weights: Vec<f64>,
    k: Option<usize>,
    c: Option<usize>,
    h: Option<usize>,
) -> PyResult<ConstructionSpec> {
    let mode = parse_mode(mode)?;
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| PyValueError::new_err(format!("{kind} needs {name}")));
    let kind = match kind {
        "star" => {
            let k = need(k, "k")?;
            let weights = if weights.len() == 1 { vec![weights[0]; k] } else { weights };
            ConstructionKind::StarSet { k, weights, mode }
        }
        "tree" => ConstructionKind::TreeSet { c: need(c, "c")?, h: need(h, "h")?, weights: weights_of(weights), mode },
        "triangle" => {
            let alphas: [f64; 3] = weights
                .as_slice()
                .try_into()
                .map_err(|_| PyValueError::new_err("triangle needs three weights"))?;
            ConstructionKind::CoincidentTriangle { alphas }
        }
        _ => return Err(PyValueError::new_err(format!("unknown construction {kind:?}"))),
    };
    Ok(ConstructionSpec { kind, n, dim: Dim::new(dim).map_err(to_py)?, seed })
}

/// Builds a construction; returns `(points, template)`.
#[pyfunction]
#[pyo3(signature = (kind, n, weights, dim=2, seed=0, mode="distance", k=None, c=None, h=None))]
#[allow(clippy::too_many_arguments)]
fn generate(
    kind: &str,
    n: usize,
    weights: Vec<f64>,
    dim: usize,
    seed: u64,
    mode: &str,
    k: Option<usize>,
    c: Option<usize>,
    h: Option<usize>,
) -> PyResult<(PyPointSet, PyGraph)> {
    let spec = construction_spec(kind, n, dim, seed, mode, weights, k, c, h)?;
    let built = core_generate(&spec).map_err(to_py)?;
    Ok((PyPointSet { inner: built.points }, PyGraph { inner: built.template }))
}

/// Best cover: dict with `s`, `t`, `exponent` as `(num, den)`, the blocks and
/// the leftover vertices.
#[pyfunction]
fn cover<'py>(py: Python<'py>, graph: &PyGraph) -> PyResult<Bound<'py, PyDict>> {
    let c = find_best_cover(&graph.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("s", c.s)?;
    d.set_item("t", c.t)?;
    d.set_item("exponent", (c.exponent.numer().clone(), c.exponent.denom().clone()))?;
    d.set_item("p2_blocks", c.p2_blocks)?;
    d.set_item("p3_blocks", c.p3_blocks)?;
    d.set_item("leftover", c.leftover)?;
    Ok(d)
}

/// Maximum matching as `(m, r, edges)`.
#[pyfunction]
fn matching(graph: &PyGraph) -> PyResult<(usize, usize, Vec<[usize; 2]>)> {
    let m = max_matching(&graph.inner).map_err(to_py)?;
    let edges = m.edges.iter().map(|&i| [graph.inner.edges()[i].u, graph.inner.edges()[i].v]).collect();
    Ok((m.m, m.r, edges))
}

/// Exponent bounds report as CSV text.
#[pyfunction]
#[pyo3(signature = (graph, mode="distance", dim=2))]
fn bounds(graph: &PyGraph, mode: &str, dim: usize) -> PyResult<String> {
    let report = catalog(&graph.inner, parse_mode(mode)?, Dim::new(dim).map_err(to_py)?).map_err(to_py)?;
    Ok(report.to_csv())
}

/// Tree exponent for `T(c, h)` as `(num, den, plus_epsilon)`.
#[pyfunction]
fn tree_exponent(c: usize, h: usize) -> PyResult<(num_bigint::BigInt, num_bigint::BigInt, bool)> {
    let t = core_tree_exponent(c, h).map_err(to_py)?;
    let e = t.closed_form;
    Ok((e.value.numer().clone(), e.value.denom().clone(), e.plus_epsilon))
}

/// Least-squares fit of `ln count` on `ln n`: `(slope, intercept, r_squared)`.
#[pyfunction]
fn fit_exponent(samples: Vec<(u64, BigUint)>) -> PyResult<(f64, f64, f64)> {
    let f = core_fit(&samples).map_err(to_py)?;
    Ok((f.slope, f.intercept, f.r_squared))
}

/// Runs a growth experiment and returns the CSV report.
#[pyfunction]
#[pyo3(signature = (kind, n_grid, weights, dim=2, seed=0, mode="distance", semantics="hom", k=None, c=None, h=None))]
#[allow(clippy::too_many_arguments)]
fn experiment(
    py: Python<'_>,
    kind: &str,
    n_grid: Vec<usize>,
    weights: Vec<f64>,
    dim: usize,
    seed: u64,
    mode: &str,
    semantics: &str,
    k: Option<usize>,
    c: Option<usize>,
    h: Option<usize>,
) -> PyResult<String> {
    let spec = construction_spec(kind, 0, dim, seed, mode, weights, k, c, h)?;
    let mut cfg = ExperimentConfig::new(spec, n_grid);
    cfg.semantics = parse_semantics(semantics)?;
    py.detach(|| run_experiment(&cfg)).map(|r| r.to_csv(false)).map_err(to_py)
}

#[pymodule]
fn pointconf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPointSet>()?;
    m.add_class::<PyGraph>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(cover, m)?)?;
    m.add_function(wrap_pyfunction!(matching, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(tree_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(fit_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(experiment, m)?)?;
    Ok(())
}
