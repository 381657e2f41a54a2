//! Python bindings for the matchroute library.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use matchroute::cliquecontract::route_via_clique_contraction;
use matchroute::hconn::{route_hconnected, ConnectedPartition};
use matchroute::maxroute::{max_routability, Mode};
use matchroute::oracle::{max_agreements_exact, routing_number_exact, routing_time_exact, SearchBudget};
use matchroute::reductions::{build_sat_instance, ccpp_solve_exact, CnfFormula};
use matchroute::treeroute::{route_tree, RootedTree};
use matchroute::{generate, twostep, Error, MatchingStep};

create_exception!(pymatchroute, BudgetExhausted, PyException);

fn err(e: Error) -> PyErr {
    if e.is_budget() {
        BudgetExhausted::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn budget(max_states: usize, time_limit: f64) -> PyResult<SearchBudget> {
    let limit = std::time::Duration::try_from_secs_f64(time_limit).map_err(|_| PyValueError::new_err("time_limit must be non-negative"))?;
    Ok(SearchBudget::default().with_states(max_states).with_time(limit))
}

/// Undirected simple graph on vertices `0..n`.
#[pyclass(name = "Graph", frozen)]
pub struct PyGraph(matchroute::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        matchroute::Graph::new(n, edges).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph(generate::path(n))
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        if n < 3 {
            return Err(PyValueError::new_err("a cycle needs at least 3 vertices"));
        }
        Ok(PyGraph(generate::cycle(n)))
    }

    #[staticmethod]
    fn star(n: usize) -> Self {
        PyGraph(generate::star(n))
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        PyGraph(generate::complete(n))
    }

    #[staticmethod]
    fn hypercube(dim: u32) -> PyResult<Self> {
        if dim > 20 {
            return Err(PyValueError::new_err("dimension above 20"));
        }
        Ok(PyGraph(generate::hypercube(dim)))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.0.n() {
            return Err(PyValueError::new_err("vertex out of range"));
        }
        Ok(self.0.neighbors(v).to_vec())
    }

    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.0.n(), self.0.m())
    }
}

/// Pebble `i` starts on vertex `i` and must end on `image[i]`.
#[pyclass(name = "Permutation", frozen)]
pub struct PyPermutation(matchroute::Permutation);

#[pymethods]
impl PyPermutation {
    #[new]
    fn new(image: Vec<usize>) -> PyResult<Self> {
        matchroute::Permutation::new(image).map(PyPermutation).map_err(err)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        PyPermutation(matchroute::Permutation::identity(n))
    }

    #[staticmethod]
    fn transposition(n: usize, a: usize, b: usize) -> PyResult<Self> {
        if a >= n || b >= n {
            return Err(PyValueError::new_err("vertex out of range"));
        }
        Ok(PyPermutation(matchroute::Permutation::transposition(n, a, b)))
    }

    #[getter]
    fn image(&self) -> Vec<usize> {
        self.0.image().to_vec()
    }

    fn inverse(&self) -> Self {
        PyPermutation(self.0.inverse())
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Permutation({:?})", self.0.image())
    }
}

/// A sequence of matchings, each a list of swapped vertex pairs.
#[pyclass(name = "Schedule", frozen)]
pub struct PySchedule(matchroute::Schedule);

#[pymethods]
impl PySchedule {
    #[new]
    fn new(steps: Vec<Vec<(usize, usize)>>) -> Self {
        PySchedule(matchroute::Schedule::new(steps.into_iter().map(MatchingStep::new).collect()))
    }

    fn steps(&self) -> Vec<Vec<(usize, usize)>> {
        self.0.steps().iter().map(|m| m.pairs().to_vec()).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Schedule(len={})", self.0.len())
    }
}

/// `(valid, reason)` for a schedule routing `pi` on `g`.
#[pyfunction]
fn verify_schedule(g: &PyGraph, pi: &PyPermutation, s: &PySchedule) -> (bool, Option<String>) {
    let r = matchroute::verify_schedule(&g.0, &pi.0, &s.0);
    let reason = r.reason.or_else(|| (!r.misplaced.is_empty()).then(|| format!("misplaced pebbles {:?}", r.misplaced)));
    (r.valid, reason)
}

/// Exact routing time with a witness schedule.
#[pyfunction]
#[pyo3(signature = (g, pi, max_states = 10_000_000, time_limit = 60.0))]
fn routing_time(g: &PyGraph, pi: &PyPermutation, max_states: usize, time_limit: f64) -> PyResult<(usize, PySchedule)> {
    let r = routing_time_exact(&g.0, &pi.0, budget(max_states, time_limit)?).map_err(err)?;
    Ok((r.value, PySchedule(r.witness)))
}

/// Exact routing number (maximum routing time over all permutations).
#[pyfunction]
#[pyo3(signature = (g, max_states = 10_000_000, time_limit = 60.0))]
fn routing_number(g: &PyGraph, max_states: usize, time_limit: f64) -> PyResult<usize> {
    routing_number_exact(&g.0, budget(max_states, time_limit)?).map_err(err)
}

/// A schedule of at most two steps, or `None` when more are needed.
#[pyfunction]
fn route_in_two(g: &PyGraph, pi: &PyPermutation) -> Option<PySchedule> {
    twostep::route_in_two(&g.0, &pi.0).map(PySchedule)
}

#[pyfunction]
#[pyo3(signature = (g, pi, root = 0))]
fn route_on_tree(g: &PyGraph, pi: &PyPermutation, root: usize) -> PyResult<PySchedule> {
    if root >= g.0.n() {
        return Err(PyValueError::new_err("root out of range"));
    }
    let t = RootedTree::new(&g.0, root).map_err(err)?;
    Ok(PySchedule(route_tree(&t, &pi.0)))
}

/// Routes through connected blocks; the first vertex of each block is its port.
#[pyfunction]
#[pyo3(signature = (g, pi, blocks, pipelined = false))]
fn route_hconn(g: &PyGraph, pi: &PyPermutation, blocks: Vec<Vec<usize>>, pipelined: bool) -> PyResult<PySchedule> {
    let part = ConnectedPartition::from_lines(&g.0, blocks).map_err(err)?;
    route_hconnected(&g.0, &pi.0, &part, pipelined).map(|r| PySchedule(r.schedule)).map_err(err)
}

/// Routes through a clique (a maximum clique when `clique` is `None`).
#[pyfunction]
#[pyo3(signature = (g, pi, clique = None))]
fn route_kappa(g: &PyGraph, pi: &PyPermutation, clique: Option<Vec<usize>>) -> PyResult<PySchedule> {
    route_via_clique_contraction(&g.0, &pi.0, clique.as_deref()).map(|r| PySchedule(r.schedule)).map_err(err)
}

/// `(m, schedule)`: the most pebbles placed within `k` steps.
#[pyfunction]
#[pyo3(signature = (g, pi, k, mode = "exact", seed = 0, max_states = 10_000_000))]
fn max_route(g: &PyGraph, pi: &PyPermutation, k: usize, mode: &str, seed: u64, max_states: usize) -> PyResult<(usize, PySchedule)> {
    let mode = match mode {
        "exact" => Mode::Exact,
        "greedy" => Mode::Greedy { seed },
        _ => return Err(PyValueError::new_err("mode must be \"exact\" or \"greedy\"")),
    };
    let r = max_routability(&g.0, &pi.0, k, mode, SearchBudget::default().with_states(max_states)).map_err(err)?;
    Ok((r.m, PySchedule(r.schedule)))
}

#[pyfunction]
#[pyo3(signature = (g, pi, k, max_states = 10_000_000))]
fn max_agreements(g: &PyGraph, pi: &PyPermutation, k: usize, max_states: usize) -> PyResult<usize> {
    max_agreements_exact(&g.0, &pi.0, k, SearchBudget::default().with_states(max_states)).map_err(err)
}

/// The three-step routing instance of a 3-CNF formula given as literal triples.
#[pyfunction]
#[pyo3(signature = (num_vars, clauses, chain_len = 1))]
fn sat_instance(num_vars: usize, clauses: Vec<[i32; 3]>, chain_len: usize) -> PyResult<(PyGraph, PyPermutation)> {
    let f = CnfFormula::new(num_vars, clauses).map_err(err)?;
    let inst = build_sat_instance(&f, chain_len).map_err(err)?;
    Ok((PyGraph(inst.graph), PyPermutation(inst.perm)))
}

/// Blocks of a valid colored partition with at most `t` vertices each, or `None`.
#[pyfunction]
#[pyo3(signature = (g, colors, t, max_states = 10_000_000))]
fn ccpp_solve(g: &PyGraph, colors: Vec<usize>, t: usize, max_states: usize) -> PyResult<Option<Vec<Vec<usize>>>> {
    ccpp_solve_exact(&g.0, &colors, t, SearchBudget::default().with_states(max_states)).map_err(err)
}

#[pymodule]
fn pymatchroute(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyPermutation>()?;
    m.add_class::<PySchedule>()?;
    m.add("BudgetExhausted", m.py().get_type::<BudgetExhausted>())?;
    m.add_function(wrap_pyfunction!(verify_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(routing_time, m)?)?;
    m.add_function(wrap_pyfunction!(routing_number, m)?)?;
    m.add_function(wrap_pyfunction!(route_in_two, m)?)?;
    m.add_function(wrap_pyfunction!(route_on_tree, m)?)?;
    m.add_function(wrap_pyfunction!(route_hconn, m)?)?;
    m.add_function(wrap_pyfunction!(route_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(max_route, m)?)?;
    m.add_function(wrap_pyfunction!(max_agreements, m)?)?;
    m.add_function(wrap_pyfunction!(sat_instance, m)?)?;
    m.add_function(wrap_pyfunction!(ccpp_solve, m)?)?;
    Ok(())
}
