//! Python bindings: special functions, transforms, spherical means and the
//! certification checks (reports are returned as JSON strings).

use ::growthfx::euclid::{self, Dimension, ExponentPair, RadialFunction, RadialProfile};
use ::growthfx::hyp;
use ::growthfx::quad::GridSpec;
use ::growthfx::run::{self, Command, Defaults, Params, RunConfig};
use ::growthfx::specfun::{self, SpectralPoint};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: ::growthfx::Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for ::growthfx::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// Jacobi order `(α, β)`.
#[pyclass(name = "OrderPair", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyOrder(specfun::OrderPair);

#[pymethods]
impl PyOrder {
    #[new]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(PyOrder(specfun::OrderPair::new(alpha, beta).py()?))
    }

    /// Order of the real hyperbolic space `H^n`.
    #[staticmethod]
    fn real_hyperbolic(n: u32) -> PyResult<Self> {
        Ok(PyOrder(specfun::OrderPair::real_hyperbolic(n).py()?))
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
    fn rho(&self) -> f64 {
        self.0.rho()
    }

    fn __repr__(&self) -> String {
        format!("OrderPair(alpha={}, beta={})", self.0.alpha(), self.0.beta())
    }
}

/// Evaluation grid, e.g. `Grid("log:1e-3:1e2:200")`.
#[pyclass(name = "Grid", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyGrid(GridSpec);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyGrid(spec.parse().py()?))
    }

    fn nodes(&self) -> Vec<f64> {
        self.0.nodes()
    }

    fn __len__(&self) -> usize {
        self.0.points
    }

    fn __repr__(&self) -> String {
        format!("Grid(\"{}\")", self.0)
    }
}

/// Radial profile: `Profile("gaussian")`, `Profile.bump(2.0)`, or sampled data.
#[pyclass(name = "Profile", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProfile(RadialProfile);

#[pymethods]
impl PyProfile {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(PyProfile(RadialProfile::by_name(name).py()?))
    }

    #[staticmethod]
    fn gaussian(scale: f64) -> PyResult<Self> {
        Ok(PyProfile(RadialProfile::gaussian(scale).py()?))
    }

    #[staticmethod]
    fn ball(radius: f64) -> PyResult<Self> {
        Ok(PyProfile(RadialProfile::ball(radius).py()?))
    }

    #[staticmethod]
    fn bump(radius: f64) -> PyResult<Self> {
        Ok(PyProfile(RadialProfile::bump(radius).py()?))
    }

    #[staticmethod]
    fn sampled(r: Vec<f64>, values: Vec<f64>) -> PyResult<Self> {
        Ok(PyProfile(RadialProfile::sampled(r, values).py()?))
    }

    fn __call__(&self, r: f64) -> f64 {
        self.0.eval(r)
    }
}

#[pyfunction]
fn bessel_j_norm(alpha: f64, x: f64) -> PyResult<f64> {
    specfun::bessel_j_norm(alpha, x).py()
}

#[pyfunction]
fn one_minus_j(alpha: f64, x: f64) -> PyResult<f64> {
    specfun::one_minus_j(alpha, x).py()
}

#[pyfunction]
#[pyo3(signature = (alpha, x, tol = 1e-13))]
fn mehler_j(alpha: f64, x: f64, tol: f64) -> PyResult<f64> {
    specfun::mehler_j(alpha, x, tol).py()
}

/// `φ_λ(t)` for `λ = mu + i eta`.
#[pyfunction]
#[pyo3(signature = (order, mu, t, eta = 0.0, ode = false))]
fn jacobi_phi(order: &PyOrder, mu: f64, t: f64, eta: f64, ode: bool) -> PyResult<Complex64> {
    let lam = SpectralPoint::new(mu, eta);
    if ode {
        specfun::jacobi_phi_ode(&order.0, lam, t).py()
    } else {
        specfun::jacobi_phi(&order.0, lam, t).py()
    }
}

#[pyfunction]
fn delta_density(order: &PyOrder, t: f64) -> f64 {
    specfun::delta_density(&order.0, t)
}

#[pyfunction]
fn c_function_density(order: &PyOrder, mu: f64) -> PyResult<f64> {
    specfun::c_function_density(&order.0, mu).py()
}

#[pyfunction]
fn fourier_radial(f: &PyProfile, n: u32, xi: f64) -> PyResult<f64> {
    euclid::fourier_radial(&f.0, &Dimension::new(n).py()?, xi).py()
}

#[pyfunction]
fn spherical_mean(f: &PyProfile, n: u32, t: f64, r: f64) -> PyResult<f64> {
    euclid::spherical_mean_radial(&f.0, &Dimension::new(n).py()?, t, r).py()
}

#[pyfunction]
fn diff_norm(f: &PyProfile, n: u32, p: f64, t: f64) -> PyResult<f64> {
    euclid::diff_norm(&f.0, &Dimension::new(n).py()?, p, t).py()
}

#[pyfunction]
fn growth_lhs(f: &PyProfile, n: u32, p: f64, t: f64) -> PyResult<f64> {
    euclid::growth_lhs(&f.0, &Dimension::new(n).py()?, &ExponentPair::new(p).py()?, t).py()
}

#[pyfunction]
fn tail_lhs(f: &PyProfile, n: u32, p: f64, t: f64) -> PyResult<f64> {
    euclid::tail_lhs(&f.0, &Dimension::new(n).py()?, &ExponentPair::new(p).py()?, t).py()
}

#[pyfunction]
#[pyo3(signature = (f, order, mu, eta = 0.0))]
fn jacobi_transform(f: &PyProfile, order: &PyOrder, mu: f64, eta: f64) -> PyResult<Complex64> {
    hyp::jacobi_transform(&f.0, &order.0, SpectralPoint::new(mu, eta)).py()
}

/// Roundtrip `f -> f̂ -> f` on the default spectral grid, evaluated at `ts`.
#[pyfunction]
fn jacobi_roundtrip(f: &PyProfile, order: &PyOrder, ts: Vec<f64>) -> PyResult<Vec<f64>> {
    hyp::HypSpectralTable::real_line(&f.0, &order.0).py()?.inverse_many(&ts).py()
}

#[pyfunction]
fn spherical_mean_hyp(f: &PyProfile, order: &PyOrder, t: f64, s: f64) -> PyResult<f64> {
    hyp::spherical_mean_hyp(&f.0, &order.0, t, s).py()
}

#[pyfunction]
fn diff_norm_hyp(f: &PyProfile, order: &PyOrder, p: f64, t: f64) -> PyResult<f64> {
    hyp::diff_norm_hyp(&f.0, &order.0, p, t).py()
}

#[pyfunction]
fn theorem6_lhs(f: &PyProfile, order: &PyOrder, t: f64) -> PyResult<f64> {
    hyp::theorem6_lhs(&f.0, &order.0, t).py()
}

#[pyfunction]
#[pyo3(signature = (f, order, p, t, eta = 0.0))]
fn theorem5_lhs(f: &PyProfile, order: &PyOrder, p: f64, t: f64, eta: f64) -> PyResult<f64> {
    hyp::theorem5_lhs(&f.0, &order.0, p, eta, t).py()
}

/// Runs one check (`"certify-bessel"`, `"verify-hyp"`, ...) with optional
/// parameter overrides given as a JSON object; returns `(exit_code, report_json)`.
#[pyfunction]
#[pyo3(signature = (command, params = None))]
fn run_check(py: Python<'_>, command: &str, params: Option<&str>) -> PyResult<(i32, String)> {
    let mut cfg = RunConfig::new(command.parse::<Command>().py()?);
    if let Some(text) = params {
        cfg.params = serde_json::from_str::<Params>(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    }
    let defaults = Defaults::load().py()?;
    let outcome = py.detach(|| run::run(&cfg, &defaults));
    match (outcome.report, outcome.error) {
        (Some(r), _) => Ok((outcome.exit, r.to_json().py()?)),
        (None, Some(e)) => Err(py_err(e)),
        (None, None) => Err(PyValueError::new_err("check produced no report")),
    }
}

#[pymodule(name = "growthfx")]
fn growthfx_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOrder>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyProfile>()?;
    m.add("SCHEMA_VERSION", ::growthfx::certify::SCHEMA_VERSION)?;
    m.add("INVERSION_CONVENTION", hyp::INVERSION_CONVENTION)?;
    m.add_function(wrap_pyfunction!(bessel_j_norm, m)?)?;
    m.add_function(wrap_pyfunction!(one_minus_j, m)?)?;
    m.add_function(wrap_pyfunction!(mehler_j, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_phi, m)?)?;
    m.add_function(wrap_pyfunction!(delta_density, m)?)?;
    m.add_function(wrap_pyfunction!(c_function_density, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_radial, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_mean, m)?)?;
    m.add_function(wrap_pyfunction!(diff_norm, m)?)?;
    m.add_function(wrap_pyfunction!(growth_lhs, m)?)?;
    m.add_function(wrap_pyfunction!(tail_lhs, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_transform, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_roundtrip, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_mean_hyp, m)?)?;
    m.add_function(wrap_pyfunction!(diff_norm_hyp, m)?)?;
    m.add_function(wrap_pyfunction!(theorem6_lhs, m)?)?;
    m.add_function(wrap_pyfunction!(theorem5_lhs, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    Ok(())
}
