//! Python bindings. Structured results (reports, diagnostics) cross the
//! boundary as plain dicts and lists via their serde representation.

use gmhd_core::checker::admissibility::{g_admissibility, AdmissibilityKind};
use gmhd_core::checker::{
    check_hypotheses as core_check, check_special_cases, compute_a1 as core_a1, dominance_audit as core_audit,
    min_gamma as core_min_gamma, SpecialCase, SpecialParams, TheoremInstance,
};
use gmhd_core::estimates::{verify_integral_estimate, verify_semigroup_estimate};
use gmhd_core::nonlinear::{self, DealiasRule};
use gmhd_core::solver::{self, SolverConfig, Specs, Trajectory};
use gmhd_core::spectral::{self as sp};
use gmhd_core::{Error, GFunction, Grid, MultiplierSpec, SpectralField};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIOError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

create_exception!(gmhd_py, NonConvergenceError, PyException, "Picard iteration did not converge.");
create_exception!(gmhd_py, BlowupError, PyException, "Picard iterates exceeded the blowup threshold.");

fn err(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. } => NonConvergenceError::new_err(e.to_string()),
        Error::Blowup { .. } => BlowupError::new_err(e.to_string()),
        Error::Io(_) | Error::Snapshot(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializes through JSON into native Python objects.
fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(value_err)
}

fn parse<T: std::str::FromStr>(s: &str) -> PyResult<T>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(value_err)
}

#[pyclass(name = "Grid", skip_from_py_object, frozen, module = "gmhd_py")]
#[derive(Clone, Copy)]
struct PyGrid(Grid);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(dim: usize, n: usize) -> PyResult<Self> {
        Grid::new(dim, n).map(PyGrid).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.points_per_axis()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Grid(dim={}, n={})", self.0.dim(), self.0.points_per_axis())
    }
}

/// Symbol `-|k|^γ / g(|k|)` with `γ^- = γ - ε`.
#[pyclass(name = "MultiplierSpec", skip_from_py_object, frozen, module = "gmhd_py")]
#[derive(Clone, Copy)]
struct PyMultiplierSpec(MultiplierSpec);

#[pymethods]
impl PyMultiplierSpec {
    #[new]
    #[pyo3(signature = (gamma, g = "unit", epsilon = None))]
    fn new(gamma: f64, g: &str, epsilon: Option<f64>) -> PyResult<Self> {
        let g: GFunction = parse(g)?;
        match epsilon {
            Some(e) => MultiplierSpec::with_epsilon(gamma, g, e),
            None => MultiplierSpec::new(gamma, g),
        }
        .map(PyMultiplierSpec)
        .map_err(err)
    }

    #[getter]
    fn gamma_minus(&self) -> f64 {
        self.0.gamma_minus()
    }

    fn symbol(&self, k: Vec<i64>) -> f64 {
        sp::symbol_eval(&self.0, &k)
    }

    fn __repr__(&self) -> String {
        format!("MultiplierSpec({:?})", self.0)
    }
}

#[pyclass(name = "SpectralField", skip_from_py_object, module = "gmhd_py")]
#[derive(Clone)]
struct PyField(SpectralField);

#[pymethods]
impl PyField {
    #[staticmethod]
    fn zeros(grid: &PyGrid, components: usize) -> Self {
        PyField(SpectralField::zeros(grid.0, components))
    }

    /// Real field `a e^{ik·x} + c.c.`, one complex amplitude per component.
    #[staticmethod]
    fn real_mode(grid: &PyGrid, k: Vec<i64>, amplitude: Vec<Complex64>) -> PyResult<Self> {
        if k.len() != grid.0.dim() {
            return Err(value_err(format!("k needs {} entries", grid.0.dim())));
        }
        SpectralField::real_mode(grid.0, &k, &amplitude).map(PyField).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (grid, components, band, seed = 0))]
    fn random_band_limited(grid: &PyGrid, components: usize, band: i64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PyField(SpectralField::random_band_limited(grid.0, components, band, &mut rng))
    }

    /// Samples per component, in row-major grid order.
    #[staticmethod]
    fn from_physical(grid: &PyGrid, values: Vec<Vec<f64>>) -> PyResult<Self> {
        SpectralField::from_physical(grid.0, &values).map(PyField).map_err(err)
    }

    fn to_physical(&self) -> Vec<Vec<f64>> {
        self.0.to_physical_real()
    }

    fn coefficients(&self) -> Vec<Vec<Complex64>> {
        self.0.components().to_vec()
    }

    fn coef(&self, component: usize, k: Vec<i64>) -> PyResult<Complex64> {
        if component >= self.0.n_components() || k.len() != self.0.grid().dim() {
            return Err(value_err("component or wave vector out of range"));
        }
        Ok(self.0.coef(component, &k))
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid(self.0.grid())
    }

    #[getter]
    fn n_components(&self) -> usize {
        self.0.n_components()
    }

    fn energy(&self) -> f64 {
        self.0.energy()
    }

    fn l2_norm(&self) -> f64 {
        self.0.l2_norm()
    }

    fn inner(&self, other: &PyField) -> PyResult<f64> {
        self.0.check_same_shape(&other.0).map_err(err)?;
        Ok(self.0.inner(&other.0))
    }

    fn divergence_residual(&self) -> f64 {
        self.0.divergence_residual()
    }

    fn sobolev_norm(&self, r: f64, p: f64) -> PyResult<f64> {
        sp::sobolev_norm(&self.0, r, p).map_err(err)
    }

    fn scaled(&self, s: f64) -> Self {
        PyField(self.0.scaled(s))
    }

    fn __add__(&self, other: &PyField) -> PyResult<Self> {
        self.0.add(&other.0).map(PyField).map_err(err)
    }

    fn __sub__(&self, other: &PyField) -> PyResult<Self> {
        self.0.sub(&other.0).map(PyField).map_err(err)
    }

    fn __neg__(&self) -> Self {
        PyField(self.0.scaled(-1.0))
    }

    fn __repr__(&self) -> String {
        let g = self.0.grid();
        format!(
            "SpectralField(dim={}, n={}, components={})",
            g.dim(),
            g.points_per_axis(),
            self.0.n_components()
        )
    }
}

#[pyfunction]
fn leray_project(f: &PyField) -> PyField {
    PyField(sp::leray_project(&f.0))
}

#[pyfunction]
fn apply_multiplier(spec: &PyMultiplierSpec, f: &PyField) -> PyField {
    PyField(sp::apply_multiplier(&spec.0, &f.0))
}

#[pyfunction]
fn apply_semigroup(spec: &PyMultiplierSpec, t: f64, f: &PyField) -> PyResult<PyField> {
    sp::apply_semigroup(&spec.0, t, &f.0).map(PyField).map_err(err)
}

#[pyfunction]
fn apply_helmholtz_inverse(spec: &PyMultiplierSpec, f: &PyField) -> PyField {
    PyField(sp::apply_helmholtz_inverse(&spec.0, &f.0))
}

#[pyfunction]
#[pyo3(signature = (x, y, spec3, dealias = "two_thirds"))]
fn w1(x: &PyField, y: &PyField, spec3: &PyMultiplierSpec, dealias: &str) -> PyResult<PyField> {
    nonlinear::w1(&x.0, &y.0, &spec3.0, parse::<DealiasRule>(dealias)?).map(PyField).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (x, y, spec3, dealias = "two_thirds"))]
fn w2(x: &PyField, y: &PyField, spec3: &PyMultiplierSpec, dealias: &str) -> PyResult<PyField> {
    nonlinear::w2(&x.0, &y.0, &spec3.0, parse::<DealiasRule>(dealias)?).map(PyField).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (x, y, dealias = "two_thirds"))]
fn w3(x: &PyField, y: &PyField, dealias: &str) -> PyResult<PyField> {
    nonlinear::w3(&x.0, &y.0, parse::<DealiasRule>(dealias)?).map(PyField).map_err(err)
}

/// Fields at the nodes `t_1 < … < t_M` of a mild-solution solve.
#[pyclass(name = "Trajectory", frozen, module = "gmhd_py")]
struct PyTrajectory(Trajectory);

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn times(&self) -> Vec<f64> {
        self.0.times.clone()
    }

    /// `(u, B)` at node `m`, with `m = 0` the initial data.
    fn state(&self, m: usize) -> PyResult<(PyField, PyField)> {
        if m > self.0.len() {
            return Err(value_err(format!("node {m} out of range 0..={}", self.0.len())));
        }
        let (u, b) = self.0.state(m);
        Ok((PyField(u.clone()), PyField(b.clone())))
    }

    fn final_u(&self) -> PyField {
        PyField(self.0.final_u().clone())
    }

    fn final_b(&self) -> PyField {
        PyField(self.0.final_b().clone())
    }

    fn max_divergence_residual(&self) -> f64 {
        self.0.max_divergence_residual()
    }

    /// Per-node rows `t, div_residual, E_kin, E_mag, E_filtered`.
    #[pyo3(signature = (spec3, alpha = 1.0))]
    fn diagnostics<'py>(&self, py: Python<'py>, spec3: &PyMultiplierSpec, alpha: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &solver::diagnostics(&self.0, &spec3.0, alpha).map_err(err)?)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// Picard iteration for the mild formulation. `config` is a dict with any
/// subset of the solver options (`T`, `nodes`, `picard_tol`, `max_iters`,
/// `a1`, `alpha`, `nu1`, `nu2`, `dealias`, `norms`, `nonlinear`).
#[pyfunction]
#[pyo3(signature = (u0, b0, l1, l2, l3, config = None))]
fn picard_solve<'py>(
    py: Python<'py>,
    u0: &PyField,
    b0: &PyField,
    l1: &PyMultiplierSpec,
    l2: &PyMultiplierSpec,
    l3: &PyMultiplierSpec,
    config: Option<&Bound<'py, PyAny>>,
) -> PyResult<(PyTrajectory, Bound<'py, PyAny>)> {
    let cfg: SolverConfig = match config {
        Some(c) => from_py(c)?,
        None => SolverConfig::default(),
    };
    let specs = Specs {
        l1: l1.0,
        l2: l2.0,
        l3: l3.0,
    };
    let (u0, b0) = (u0.0.clone(), b0.0.clone());
    let (traj, diag) = py.detach(|| solver::picard_solve(&u0, &b0, &specs, &cfg)).map_err(err)?;
    Ok((PyTrajectory(traj), to_py(py, &diag)?))
}

/// Full hypothesis report for a dict with keys `n, r0, r1, r2, p0, p1, p2,
/// gamma1, gamma2, gamma3, epsilon`.
#[pyfunction]
fn check_hypotheses<'py>(py: Python<'py>, instance: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let inst: TheoremInstance = from_py(instance)?;
    inst.validate().map_err(err)?;
    to_py(py, &core_check(&inst))
}

#[pyfunction]
fn min_gamma(instance: &Bound<'_, PyAny>) -> PyResult<(f64, f64)> {
    let inst: TheoremInstance = from_py(instance)?;
    inst.validate().map_err(err)?;
    Ok(core_min_gamma(&inst))
}

#[pyfunction]
fn compute_a1(instance: &Bound<'_, PyAny>) -> PyResult<f64> {
    let inst: TheoremInstance = from_py(instance)?;
    core_a1(&inst).map_err(err)
}

#[pyfunction]
fn dominance_audit<'py>(py: Python<'py>, instance: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let inst: TheoremInstance = from_py(instance)?;
    to_py(py, &core_audit(&inst))
}

/// `kind` is `"thm_1_1"` or `"thm_1_2"`; `params` has keys `n, p, q, gamma1,
/// gamma2, gamma3, epsilon`.
#[pyfunction]
fn check_special_case<'py>(py: Python<'py>, kind: &str, params: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let kind: SpecialCase = parse(kind)?;
    let params: SpecialParams = from_py(params)?;
    params.to_instance(kind).validate().map_err(err)?;
    to_py(py, &check_special_cases(kind, &params))
}

#[pyfunction]
fn admissibility<'py>(py: Python<'py>, g: &str, kind: &str, x: f64) -> PyResult<Bound<'py, PyAny>> {
    let report = g_admissibility(parse(g)?, parse::<AdmissibilityKind>(kind)?, x).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (a, b, t, quad_points = 400))]
fn integral_estimate<'py>(py: Python<'py>, a: f64, b: f64, t: f64, quad_points: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &verify_integral_estimate(a, b, t, quad_points).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (spec, r1, p1, r2, p2, grid, t_values, trials = 8, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn semigroup_estimate<'py>(
    py: Python<'py>,
    spec: &PyMultiplierSpec,
    r1: f64,
    p1: f64,
    r2: f64,
    p2: f64,
    grid: &PyGrid,
    t_values: Vec<f64>,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| verify_semigroup_estimate(&spec.0, r1, p1, r2, p2, grid.0, &t_values, trials, seed))
        .map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn gmhd_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyMultiplierSpec>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyTrajectory>()?;
    m.add("NonConvergenceError", m.py().get_type::<NonConvergenceError>())?;
    m.add("BlowupError", m.py().get_type::<BlowupError>())?;
    m.add_function(wrap_pyfunction!(leray_project, m)?)?;
    m.add_function(wrap_pyfunction!(apply_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(apply_semigroup, m)?)?;
    m.add_function(wrap_pyfunction!(apply_helmholtz_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(w1, m)?)?;
    m.add_function(wrap_pyfunction!(w2, m)?)?;
    m.add_function(wrap_pyfunction!(w3, m)?)?;
    m.add_function(wrap_pyfunction!(picard_solve, m)?)?;
    m.add_function(wrap_pyfunction!(check_hypotheses, m)?)?;
    m.add_function(wrap_pyfunction!(min_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(compute_a1, m)?)?;
    m.add_function(wrap_pyfunction!(dominance_audit, m)?)?;
    m.add_function(wrap_pyfunction!(check_special_case, m)?)?;
    m.add_function(wrap_pyfunction!(admissibility, m)?)?;
    m.add_function(wrap_pyfunction!(integral_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(semigroup_estimate, m)?)?;
    Ok(())
}
