//! Python bindings: `import pyspinbath`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use spinbath::{dephasing, entanglement, mean_field, oracle, two_qubit};

fn to_py(e: spinbath::Error) -> PyErr {
    match e {
        spinbath::Error::NoConvergence { .. } | spinbath::Error::IdentityViolation { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

type Matrix = Vec<Vec<Complex64>>;

fn to_rows(rho: &spinbath::TwoQubitDensity) -> Matrix {
    (0..4).map(|i| (0..4).map(|j| rho.0[(i, j)]).collect()).collect()
}

fn from_rows(rows: &Matrix) -> PyResult<spinbath::TwoQubitDensity> {
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(PyValueError::new_err("expected a 4x4 matrix"));
    }
    Ok(spinbath::TwoQubitDensity(spinbath::linalg::CMat4::from_fn(|i, j| rows[i][j])))
}

fn state(amplitudes: [Complex64; 4]) -> PyResult<spinbath::PureState2Q> {
    spinbath::PureState2Q::normalized(amplitudes).map_err(to_py)
}

#[pyclass(name = "BathParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyBath(spinbath::BathParams);

#[pymethods]
impl PyBath {
    #[new]
    fn new(j: f64, w: f64, temperature: f64) -> PyResult<Self> {
        spinbath::BathParams::new(j, w, temperature).map(Self).map_err(to_py)
    }

    /// Temperature given as T/Tc with Tc = J/2.
    #[staticmethod]
    fn from_reduced_temperature(j: f64, w: f64, t_over_tc: f64) -> PyResult<Self> {
        spinbath::BathParams::from_reduced_temperature(j, w, t_over_tc).map(Self).map_err(to_py)
    }

    #[getter]
    fn j(&self) -> f64 {
        self.0.j
    }
    #[getter]
    fn w(&self) -> f64 {
        self.0.w
    }
    #[getter]
    fn temperature(&self) -> f64 {
        self.0.temperature
    }
    fn critical_temperature(&self) -> f64 {
        self.0.critical_temperature()
    }
    fn reduced_temperature(&self) -> f64 {
        self.0.reduced_temperature()
    }
    fn is_ordered(&self) -> bool {
        mean_field::is_ordered(&self.0)
    }
    fn __repr__(&self) -> String {
        format!("BathParams(j={}, w={}, temperature={})", self.0.j, self.0.w, self.0.temperature)
    }
}

#[pyclass(name = "OrderSolution", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PySolution(spinbath::OrderSolution);

#[pymethods]
impl PySolution {
    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta
    }
    #[getter]
    fn m(&self) -> f64 {
        self.0.m
    }
    #[getter]
    fn phase(&self) -> &'static str {
        self.0.phase.as_str()
    }
    fn is_ordered(&self) -> bool {
        self.0.is_ordered()
    }
    fn __repr__(&self) -> String {
        format!("OrderSolution(theta={}, m={}, phase='{}')", self.0.theta, self.0.m, self.0.phase.as_str())
    }
}

#[pyclass(name = "SystemParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PySystem(spinbath::SystemParams);

#[pymethods]
impl PySystem {
    #[new]
    #[pyo3(signature = (j0=1.0, mu0=0.0, xi0=0.0))]
    fn new(j0: f64, mu0: f64, xi0: f64) -> PyResult<Self> {
        spinbath::SystemParams::new(j0, mu0, xi0).map(Self).map_err(to_py)
    }
    #[getter]
    fn j0(&self) -> f64 {
        self.0.j0
    }
    #[getter]
    fn mu0(&self) -> f64 {
        self.0.mu0
    }
    #[getter]
    fn xi0(&self) -> f64 {
        self.0.xi0
    }
    fn __repr__(&self) -> String {
        format!("SystemParams(j0={}, mu0={}, xi0={})", self.0.j0, self.0.mu0, self.0.xi0)
    }
}

#[pyclass(name = "DephasingCoeffs", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyCoeffs(spinbath::DephasingCoeffs);

#[pymethods]
impl PyCoeffs {
    #[getter]
    fn a(&self) -> Complex64 {
        self.0.a
    }
    #[getter]
    fn b(&self) -> Complex64 {
        self.0.b
    }
    #[getter]
    fn mode(&self) -> String {
        self.0.mode.label()
    }
    fn __repr__(&self) -> String {
        format!("DephasingCoeffs(a={}, b={}, mode='{}')", self.0.a, self.0.b, self.0.mode.label())
    }
}

fn mode(n: Option<u64>) -> spinbath::CoeffMode {
    n.map_or(spinbath::CoeffMode::Asymptotic, spinbath::CoeffMode::Finite)
}

#[pyfunction]
#[pyo3(signature = (bath, tol=mean_field::DEFAULT_TOL))]
fn solve_order(bath: PyBath, tol: f64) -> PyResult<PySolution> {
    mean_field::solve_order(&bath.0, tol).map(PySolution).map_err(to_py)
}

/// `r(t)` for a bath of `n` spins; `with_field` multiplies by `e^{iμ₀t}`.
#[pyfunction]
#[pyo3(signature = (t, n, bath, sol, sys, with_field=false))]
fn coherence_factor(t: f64, n: u64, bath: PyBath, sol: PySolution, sys: PySystem, with_field: bool) -> PyResult<Complex64> {
    let f = if with_field { dephasing::coherence_factor_with_field } else { dephasing::coherence_factor_finite };
    f(t, n, &sol.0, &bath.0, &sys.0).map_err(to_py)
}

#[pyfunction]
fn coherence_magnitude_asymptotic(t: f64, bath: PyBath, sol: PySolution, sys: PySystem) -> f64 {
    dephasing::coherence_magnitude_asymptotic(t, &sol.0, &bath.0, &sys.0)
}

#[pyfunction]
fn coherence_time(bath: PyBath, sol: PySolution, sys: PySystem) -> PyResult<f64> {
    dephasing::coherence_time(&sol.0, &bath.0, &sys.0).map_err(to_py)
}

/// `A(t)`, `B(t)`; finite mode when `n` is given, asymptotic otherwise.
#[pyfunction]
#[pyo3(signature = (t, bath, sol, sys, n=None))]
fn dephasing_coeffs(t: f64, bath: PyBath, sol: PySolution, sys: PySystem, n: Option<u64>) -> PyResult<PyCoeffs> {
    dephasing::dephasing_coeffs(t, mode(n), &sol.0, &bath.0, &sys.0).map(PyCoeffs).map_err(to_py)
}

/// Reduced two-qubit density matrix as nested lists, basis `|00>,|01>,|10>,|11>`.
#[pyfunction]
fn evolve_reduced(amplitudes: [Complex64; 4], t: f64, xi0: f64, coeffs: PyCoeffs) -> PyResult<Matrix> {
    two_qubit::evolve_reduced(&state(amplitudes)?, t, xi0, &coeffs.0).map(|r| to_rows(&r)).map_err(to_py)
}

#[pyfunction]
fn concurrence(rho: Matrix) -> PyResult<f64> {
    entanglement::concurrence(&from_rows(&rho)?).map(|v| v.c).map_err(to_py)
}

#[pyfunction]
fn pure_concurrence(amplitudes: [Complex64; 4]) -> PyResult<f64> {
    two_qubit::pure_concurrence(&state(amplitudes)?).map_err(to_py)
}

fn oracle_config(
    n: usize,
    bath: PyBath,
    sys: PySystem,
    amplitudes: [Complex64; 4],
    times: Vec<f64>,
) -> PyResult<oracle::OracleConfig> {
    oracle::OracleConfig::new(n, bath.0, sys.0, state(amplitudes)?, times).map_err(to_py)
}

/// Exact reduced states for a bath of `n` spins; `dense` selects the
/// full-Hilbert-space path.
#[pyfunction]
#[pyo3(signature = (n, bath, sys, amplitudes, times, dense=false))]
fn simulate_exact(
    n: usize,
    bath: PyBath,
    sys: PySystem,
    amplitudes: [Complex64; 4],
    times: Vec<f64>,
    dense: bool,
) -> PyResult<Vec<Matrix>> {
    let cfg = oracle_config(n, bath, sys, amplitudes, times)?;
    let out = if dense { oracle::simulate_dense(&cfg) } else { oracle::simulate_exact(&cfg) };
    Ok(out.map_err(to_py)?.iter().map(to_rows).collect())
}

/// Exact `(A, B, D)` per time from single-spin traces.
#[pyfunction]
fn extract_coeffs(
    n: usize,
    bath: PyBath,
    sys: PySystem,
    amplitudes: [Complex64; 4],
    times: Vec<f64>,
) -> PyResult<Vec<(Complex64, Complex64, Complex64)>> {
    let cfg = oracle_config(n, bath, sys, amplitudes, times)?;
    Ok(oracle::extract_coeffs_raw(&cfg).map_err(to_py)?.into_iter().map(|c| (c.a, c.b, c.d)).collect())
}

#[pyfunction]
fn single_qubit_coherence_exact(n: usize, bath: PyBath, sys: PySystem, times: Vec<f64>) -> PyResult<Vec<Complex64>> {
    oracle::single_qubit_coherence_exact(n, &bath.0, &sys.0, &times).map_err(to_py)
}

#[pymodule]
fn pyspinbath(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBath>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PySystem>()?;
    m.add_class::<PyCoeffs>()?;
    m.add_function(wrap_pyfunction!(solve_order, m)?)?;
    m.add_function(wrap_pyfunction!(coherence_factor, m)?)?;
    m.add_function(wrap_pyfunction!(coherence_magnitude_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(coherence_time, m)?)?;
    m.add_function(wrap_pyfunction!(dephasing_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_reduced, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(pure_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_exact, m)?)?;
    m.add_function(wrap_pyfunction!(extract_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(single_qubit_coherence_exact, m)?)?;
    Ok(())
}
