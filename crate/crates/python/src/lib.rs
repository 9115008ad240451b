//! Python module `sasakian_py`: exact forms, lattice connections and the
//! report commands.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sasakian::exterior::{Blade, Form, Orientation, Q};
use sasakian::gauge::{self, CohomologyMethod, FlowConfig, RankCut};
use sasakian::lattice::{Connection as RsConnection, DerivativeMode, FloatLie, Grid};
use sasakian::reports::{self, Mutation, ReportError, RunConfig};
use sasakian::{sasaki, symbols};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn report_err(e: ReportError) -> PyErr {
    match e.exit() {
        reports::Exit::Usage => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// An exact form with rational coefficients in the coframe e1..e7 (e7 = eta).
#[pyclass(name = "Form", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyForm(Form<Q>);

#[pymethods]
impl PyForm {
    /// The blade e^{i1...ik} times `coeff` ("p/q" or an integer).
    #[new]
    #[pyo3(signature = (indices, coeff = "1"))]
    fn new(indices: Vec<usize>, coeff: &str) -> PyResult<Self> {
        let (b, s) = Blade::from_unsorted(&indices).ok_or_else(|| value_err("indices must be distinct and in 1..=7"))?;
        let c: Q = coeff.parse().map_err(|_| value_err(format!("bad rational '{coeff}'")))?;
        Ok(PyForm(Form::term(b, if s < 0 { -c } else { c })))
    }

    #[staticmethod]
    fn zero() -> Self {
        PyForm(Form::zero())
    }

    #[staticmethod]
    fn eta() -> Self {
        PyForm(sasaki::eta())
    }

    #[staticmethod]
    fn omega() -> Self {
        PyForm(sasaki::omega())
    }

    #[staticmethod]
    fn sigma() -> Self {
        PyForm(sasaki::sigma())
    }

    #[staticmethod]
    fn phi() -> Self {
        PyForm(sasaki::phi())
    }

    #[staticmethod]
    fn psi() -> Self {
        PyForm(sasaki::psi())
    }

    fn wedge(&self, other: &PyForm) -> Self {
        PyForm(self.0.wedge(&other.0))
    }

    #[pyo3(signature = (negative = false))]
    fn star(&self, negative: bool) -> Self {
        PyForm(self.0.hodge_star_oriented(if negative { Orientation::Negative } else { Orientation::Positive }))
    }

    fn l_sigma(&self) -> PyResult<Self> {
        sasaki::l_sigma(&self.0).map(PyForm).map_err(value_err)
    }

    /// (p1, p6, p8, pv) components of a 2-form.
    fn eigen_split(&self) -> PyResult<(Self, Self, Self, Self)> {
        let s = sasaki::eigen_split(&self.0).map_err(value_err)?;
        Ok((PyForm(s.p1), PyForm(s.p6), PyForm(s.p8), PyForm(s.pv)))
    }

    /// The exact inner product as "p/q".
    fn inner(&self, other: &PyForm) -> String {
        self.0.inner(&other.0).to_string()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn grades(&self) -> Vec<usize> {
        self.0.grades()
    }

    fn __add__(&self, other: &PyForm) -> Self {
        PyForm(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyForm) -> Self {
        PyForm(&self.0 - &other.0)
    }

    fn __neg__(&self) -> Self {
        PyForm(-&self.0)
    }

    fn scale(&self, coeff: &str) -> PyResult<Self> {
        let c: Q = coeff.parse().map_err(|_| value_err(format!("bad rational '{coeff}'")))?;
        Ok(PyForm(self.0.scale(&c)))
    }

    fn __repr__(&self) -> String {
        format!("Form({})", self.0.render())
    }
}

/// JSON of the exactness check of both symbol complexes at a covector.
#[pyfunction]
fn symbol_check(covector: &PyForm) -> PyResult<String> {
    let ext = symbols::build_symbol(symbols::Which::Extended, &covector.0).map_err(value_err)?.check();
    let quo = symbols::build_symbol(symbols::Which::Quotient, &covector.0).map_err(value_err)?.check();
    serde_json::to_string(&serde_json::json!({ "extended": ext, "quotient": quo })).map_err(value_err)
}

/// A connection on the periodic transverse grid.
#[pyclass(name = "Connection")]
struct PyConnection {
    grid: Grid,
    inner: RsConnection,
}

fn grid_and_lie(n: usize, algebra: &str, mode: &str) -> PyResult<(Grid, Arc<FloatLie>)> {
    let mode: DerivativeMode = mode.parse().map_err(value_err)?;
    let grid = Grid::new(n, mode).map_err(value_err)?;
    let lie = FloatLie::by_name(algebra).ok_or_else(|| value_err(format!("unknown algebra '{algebra}'")))?;
    Ok((grid, lie))
}

#[pymethods]
impl PyConnection {
    #[staticmethod]
    #[pyo3(signature = (n, algebra = "su2", mode = "spectral"))]
    fn flat(n: usize, algebra: &str, mode: &str) -> PyResult<Self> {
        let (grid, lie) = grid_and_lie(n, algebra, mode)?;
        let inner = RsConnection::zero(&grid, &lie);
        Ok(PyConnection { grid, inner })
    }

    /// Seeded uniform random coefficients in [-amplitude, amplitude].
    #[staticmethod]
    #[pyo3(signature = (n, seed, amplitude = 0.1, algebra = "su2", mode = "spectral"))]
    fn random(n: usize, seed: u64, amplitude: f64, algebra: &str, mode: &str) -> PyResult<Self> {
        let (grid, lie) = grid_and_lie(n, algebra, mode)?;
        let inner = RsConnection::random(&grid, &lie, &mut ChaCha8Rng::seed_from_u64(seed), amplitude);
        Ok(PyConnection { grid, inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.grid.n()
    }

    /// Energy decomposition as a dict-like JSON string.
    fn energy(&self) -> PyResult<String> {
        let e = gauge::energy_decomposition(&self.grid, &self.inner).map_err(value_err)?;
        serde_json::to_string(&e).map_err(value_err)
    }

    fn kappa(&self) -> PyResult<f64> {
        gauge::charge_kappa(&self.grid, &self.inner).map_err(value_err)
    }

    /// E(A) = |p(F)|^2 + |F_V|^2, zero exactly at selfdual contact instantons.
    fn sdci_energy(&self) -> PyResult<f64> {
        Ok(gauge::sdci_energy_of(&self.grid, &self.inner).map_err(value_err)?.0)
    }

    /// Runs the flow and returns (flowed connection, energy history, converged).
    #[pyo3(signature = (max_iter = 500, tol = 1e-8))]
    fn flow(&self, max_iter: usize, tol: f64) -> PyResult<(PyConnection, Vec<f64>, bool)> {
        let cfg = FlowConfig { max_iter, tol, ..FlowConfig::default() };
        let s = gauge::sdci_flow(&self.grid, &self.inner, &cfg).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        let converged = s.converged();
        Ok((PyConnection { grid: self.grid.clone(), inner: s.connection }, s.energy_history, converged))
    }

    /// Cohomology report as JSON; needs a constant connection for the Fourier method.
    #[pyo3(signature = (dense = false))]
    fn cohomology(&self, dense: bool) -> PyResult<String> {
        let method = if dense { CohomologyMethod::Dense } else { CohomologyMethod::Fourier };
        let r = gauge::cohomology_dims(&self.grid, &self.inner, method, RankCut::default())
            .map_err(|e| report_err(ReportError::Gauge(e)))?;
        serde_json::to_string(&r).map_err(value_err)
    }

    /// The connection 1-form as snapshot JSON.
    fn snapshot(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.snapshot()).map_err(value_err)
    }
}

fn config(text: Option<&str>) -> PyResult<RunConfig> {
    let cfg = match text {
        Some(t) => RunConfig::parse(t).map_err(report_err)?,
        None => RunConfig::default(),
    };
    cfg.validate().map_err(report_err)?;
    Ok(cfg)
}

/// verify-algebra report JSON; `config` is the flat key = value text.
#[pyfunction]
#[pyo3(signature = (config_text = None, flip_star = false))]
fn verify_algebra(config_text: Option<&str>, flip_star: bool) -> PyResult<String> {
    let mutation = if flip_star { Mutation::FlipStar } else { Mutation::None };
    Ok(reports::to_json(&reports::run_verify_algebra(&config(config_text)?, mutation).map_err(report_err)?))
}

#[pyfunction]
#[pyo3(signature = (config_text = None))]
fn verify_symbols(config_text: Option<&str>) -> PyResult<String> {
    Ok(reports::to_json(&reports::run_verify_symbols(&config(config_text)?).map_err(report_err)?))
}

#[pyfunction]
#[pyo3(signature = (config_text = None))]
fn run_cohomology(config_text: Option<&str>) -> PyResult<String> {
    Ok(reports::to_json(&reports::run_cohomology(&config(config_text)?).map_err(report_err)?))
}

/// Ids of the checks that fail under the implemented conventions.
#[pyfunction]
fn known_conflicts() -> Vec<&'static str> {
    reports::KNOWN_CONFLICTS.to_vec()
}

#[pymodule]
fn sasakian_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyForm>()?;
    m.add_class::<PyConnection>()?;
    m.add_function(wrap_pyfunction!(symbol_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(verify_symbols, m)?)?;
    m.add_function(wrap_pyfunction!(run_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(known_conflicts, m)?)?;
    Ok(())
}
