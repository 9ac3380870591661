//! Python module `secplan`.

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use secplan_core as core;
use secplan_core::montecarlo::IntervalMethod;

fn to_py(err: core::Error) -> PyErr {
    match err {
        core::Error::InsufficientData(_) => PyRuntimeError::new_err(err.to_string()),
        e if e.is_numerical() => PyArithmeticError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(
    name = "SystemParams",
    module = "secplan",
    from_py_object,
    get_all,
    set_all
)]
#[derive(Clone, Copy)]
pub struct PySystemParams {
    alpha: f64,
    p_t: f64,
    beta_t: f64,
    beta_e: f64,
    epsilon: f64,
    sigma2_p: f64,
    sigma2_s: f64,
    lambda_e: f64,
    d: f64,
}

impl PySystemParams {
    fn core(&self) -> core::SystemParams {
        core::SystemParams {
            alpha: self.alpha,
            p_t: self.p_t,
            beta_t: self.beta_t,
            beta_e: self.beta_e,
            epsilon: self.epsilon,
            sigma2_p: self.sigma2_p,
            sigma2_s: self.sigma2_s,
            lambda_e: self.lambda_e,
            d: self.d,
        }
    }

    /// Validated core parameters; attributes may have been set from Python.
    fn checked(&self) -> PyResult<core::SystemParams> {
        let p = self.core();
        p.validate().map_err(to_py)?;
        Ok(p)
    }
}

impl From<core::SystemParams> for PySystemParams {
    fn from(p: core::SystemParams) -> Self {
        Self {
            alpha: p.alpha,
            p_t: p.p_t,
            beta_t: p.beta_t,
            beta_e: p.beta_e,
            epsilon: p.epsilon,
            sigma2_p: p.sigma2_p,
            sigma2_s: p.sigma2_s,
            lambda_e: p.lambda_e,
            d: p.d,
        }
    }
}

#[pymethods]
impl PySystemParams {
    /// Defaults are the reference operating point.
    #[new]
    #[pyo3(signature = (alpha=4.0, p_t=1.0, beta_t=2.0, beta_e=1.0, epsilon=0.9, sigma2_p=1.0, sigma2_s=1.0, lambda_e=0.1, d=1.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        alpha: f64,
        p_t: f64,
        beta_t: f64,
        beta_e: f64,
        epsilon: f64,
        sigma2_p: f64,
        sigma2_s: f64,
        lambda_e: f64,
        d: f64,
    ) -> PyResult<Self> {
        let p = Self {
            alpha,
            p_t,
            beta_t,
            beta_e,
            epsilon,
            sigma2_p,
            sigma2_s,
            lambda_e,
            d,
        };
        p.checked()?;
        Ok(p)
    }

    fn validate(&self) -> PyResult<()> {
        self.checked().map(|_| ())
    }

    fn with_lambda_e(&self, lambda_e: f64) -> Self {
        self.core().with_lambda_e(lambda_e).into()
    }

    fn with_d(&self, d: f64) -> Self {
        self.core().with_d(d).into()
    }

    fn __repr__(&self) -> String {
        format!(
            "SystemParams(alpha={}, p_t={}, beta_t={}, beta_e={}, epsilon={}, sigma2_p={}, sigma2_s={}, lambda_e={}, d={})",
            self.alpha, self.p_t, self.beta_t, self.beta_e, self.epsilon, self.sigma2_p, self.sigma2_s, self.lambda_e, self.d
        )
    }
}

#[pyclass(name = "OptimalDesign", module = "secplan", frozen, get_all)]
pub struct PyOptimalDesign {
    /// `"guard-zone"` or `"artificial-noise"`.
    technique: &'static str,
    parameter: f64,
    p_cov: f64,
    p_sec: f64,
    constraint_active: bool,
}

impl From<core::OptimalDesign> for PyOptimalDesign {
    fn from(d: core::OptimalDesign) -> Self {
        Self {
            technique: d.technique.label(),
            parameter: d.parameter,
            p_cov: d.metrics.p_cov,
            p_sec: d.metrics.p_sec,
            constraint_active: d.constraint_active,
        }
    }
}

#[pymethods]
impl PyOptimalDesign {
    fn __repr__(&self) -> String {
        format!(
            "OptimalDesign(technique={:?}, parameter={}, p_cov={}, p_sec={}, constraint_active={})",
            self.technique, self.parameter, self.p_cov, self.p_sec, self.constraint_active
        )
    }
}

#[pyclass(name = "SelectionVerdict", module = "secplan", frozen, get_all)]
pub struct PySelectionVerdict {
    f_value: f64,
    h_value: f64,
    g_value: f64,
    better: &'static str,
    gz_design: Py<PyOptimalDesign>,
    an_design: Py<PyOptimalDesign>,
}

#[pyclass(name = "McEstimate", module = "secplan", frozen, get_all)]
pub struct PyMcEstimate {
    mean: f64,
    half_width: f64,
    n_effective: u64,
    /// `"normal"` or `"clopper-pearson"`.
    method: &'static str,
}

impl From<core::McEstimate> for PyMcEstimate {
    fn from(e: core::McEstimate) -> Self {
        Self {
            mean: e.mean,
            half_width: e.half_width,
            n_effective: e.n_effective,
            method: match e.method {
                IntervalMethod::Normal => "normal",
                IntervalMethod::ClopperPearson => "clopper-pearson",
            },
        }
    }
}

#[pymethods]
impl PyMcEstimate {
    fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.half_width
    }

    fn __repr__(&self) -> String {
        format!(
            "McEstimate(mean={}, half_width={}, n_effective={}, method={:?})",
            self.mean, self.half_width, self.n_effective, self.method
        )
    }
}

#[pyclass(name = "GzEstimates", module = "secplan", frozen, get_all)]
pub struct PyGzEstimates {
    p_active: Py<PyMcEstimate>,
    p_cov: Py<PyMcEstimate>,
    p_sec: Py<PyMcEstimate>,
    p_sec_unconditioned: Py<PyMcEstimate>,
    window_radius: f64,
}

#[pyclass(name = "AnEstimates", module = "secplan", frozen, get_all)]
pub struct PyAnEstimates {
    p_cov: Py<PyMcEstimate>,
    p_sec: Py<PyMcEstimate>,
    window_radius: f64,
}

fn gz(r_g: f64) -> PyResult<core::GuardZoneDesign> {
    core::GuardZoneDesign::new(r_g).map_err(to_py)
}

fn an(gamma: f64) -> PyResult<core::NoiseSplitDesign> {
    core::NoiseSplitDesign::new(gamma).map_err(to_py)
}

#[pyfunction]
fn p_active(params: PySystemParams, r_g: f64) -> PyResult<f64> {
    core::p_active(&params.checked()?, &gz(r_g)?).map_err(to_py)
}

#[pyfunction]
fn p_cov_gz(params: PySystemParams, r_g: f64) -> PyResult<f64> {
    core::p_cov_gz(&params.checked()?, &gz(r_g)?).map_err(to_py)
}

#[pyfunction]
fn p_sec_gz(params: PySystemParams, r_g: f64) -> PyResult<f64> {
    core::p_sec_gz(&params.checked()?, &gz(r_g)?).map_err(to_py)
}

#[pyfunction]
fn p_cov_an(params: PySystemParams, gamma: f64) -> PyResult<f64> {
    core::p_cov_an(&params.checked()?, &an(gamma)?).map_err(to_py)
}

#[pyfunction]
fn p_sec_an(params: PySystemParams, gamma: f64) -> PyResult<f64> {
    core::p_sec_an(&params.checked()?, &an(gamma)?).map_err(to_py)
}

#[pyfunction]
fn lambda_threshold(params: PySystemParams) -> PyResult<f64> {
    core::lambda_threshold(&params.checked()?).map_err(to_py)
}

#[pyfunction]
fn optimal_guard_radius(params: PySystemParams) -> PyResult<PyOptimalDesign> {
    core::optimal_guard_radius(&params.checked()?)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
fn optimal_power_split(params: PySystemParams) -> PyResult<PyOptimalDesign> {
    core::optimal_power_split(&params.checked()?)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
fn selection_function(py: Python<'_>, params: PySystemParams) -> PyResult<PySelectionVerdict> {
    let v = core::selection_function(&params.checked()?).map_err(to_py)?;
    Ok(PySelectionVerdict {
        f_value: v.f_value,
        h_value: v.h_value,
        g_value: v.g_value,
        better: v.better.label(),
        gz_design: Py::new(py, PyOptimalDesign::from(v.gz_design))?,
        an_design: Py::new(py, PyOptimalDesign::from(v.an_design))?,
    })
}

#[pyfunction]
fn selection_value(params: PySystemParams, d: f64) -> PyResult<f64> {
    core::selection_value(&params.checked()?, d).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (params, bracket=None))]
fn critical_distance(params: PySystemParams, bracket: Option<(f64, f64)>) -> PyResult<f64> {
    core::critical_distance(&params.checked()?, bracket)
        .map(|c| c.d_star)
        .map_err(to_py)
}

#[pyfunction]
fn upper_incomplete_gamma(a: f64, x: f64) -> PyResult<f64> {
    core::upper_incomplete_gamma(a, x, core::NumericTolerance::default()).map_err(to_py)
}

#[pyfunction]
fn inverse_upper_incomplete_gamma(a: f64, target: f64) -> PyResult<f64> {
    core::inverse_upper_incomplete_gamma(a, target, core::NumericTolerance::default())
        .map_err(to_py)
}

fn trial_config(
    n_trials: u64,
    seed: u64,
    window_radius: Option<f64>,
    tail_prob: f64,
) -> PyResult<core::TrialConfig> {
    let cfg = core::TrialConfig {
        n_trials,
        seed,
        window_radius,
        tail_prob,
    };
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

/// Guard-zone Monte-Carlo estimates. Runs without holding the GIL.
#[pyfunction]
#[pyo3(signature = (params, r_g, n_trials=1_000_000, seed=0, window_radius=None, tail_prob=1e-4))]
fn run_gz_trials(
    py: Python<'_>,
    params: PySystemParams,
    r_g: f64,
    n_trials: u64,
    seed: u64,
    window_radius: Option<f64>,
    tail_prob: f64,
) -> PyResult<PyGzEstimates> {
    let cfg = trial_config(n_trials, seed, window_radius, tail_prob)?;
    let design = gz(r_g)?;
    let p = params.checked()?;
    let est = py
        .detach(|| core::run_gz_trials(&p, &design, &cfg))
        .map_err(to_py)?;
    Ok(PyGzEstimates {
        p_active: Py::new(py, PyMcEstimate::from(est.p_active))?,
        p_cov: Py::new(py, PyMcEstimate::from(est.p_cov))?,
        p_sec: Py::new(py, PyMcEstimate::from(est.p_sec))?,
        p_sec_unconditioned: Py::new(py, PyMcEstimate::from(est.p_sec_unconditioned))?,
        window_radius: est.window_radius,
    })
}

/// Artificial-noise Monte-Carlo estimates. Runs without holding the GIL.
#[pyfunction]
#[pyo3(signature = (params, gamma, n_trials=1_000_000, seed=0, window_radius=None, tail_prob=1e-4))]
fn run_an_trials(
    py: Python<'_>,
    params: PySystemParams,
    gamma: f64,
    n_trials: u64,
    seed: u64,
    window_radius: Option<f64>,
    tail_prob: f64,
) -> PyResult<PyAnEstimates> {
    let cfg = trial_config(n_trials, seed, window_radius, tail_prob)?;
    let design = an(gamma)?;
    let p = params.checked()?;
    let est = py
        .detach(|| core::run_an_trials(&p, &design, &cfg))
        .map_err(to_py)?;
    Ok(PyAnEstimates {
        p_cov: Py::new(py, PyMcEstimate::from(est.p_cov))?,
        p_sec: Py::new(py, PyMcEstimate::from(est.p_sec))?,
        window_radius: est.window_radius,
    })
}

#[pymodule]
fn secplan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemParams>()?;
    m.add_class::<PyOptimalDesign>()?;
    m.add_class::<PySelectionVerdict>()?;
    m.add_class::<PyMcEstimate>()?;
    m.add_class::<PyGzEstimates>()?;
    m.add_class::<PyAnEstimates>()?;
    m.add_function(wrap_pyfunction!(p_active, m)?)?;
    m.add_function(wrap_pyfunction!(p_cov_gz, m)?)?;
    m.add_function(wrap_pyfunction!(p_sec_gz, m)?)?;
    m.add_function(wrap_pyfunction!(p_cov_an, m)?)?;
    m.add_function(wrap_pyfunction!(p_sec_an, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_guard_radius, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_power_split, m)?)?;
    m.add_function(wrap_pyfunction!(selection_function, m)?)?;
    m.add_function(wrap_pyfunction!(selection_value, m)?)?;
    m.add_function(wrap_pyfunction!(critical_distance, m)?)?;
    m.add_function(wrap_pyfunction!(upper_incomplete_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_upper_incomplete_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(run_gz_trials, m)?)?;
    m.add_function(wrap_pyfunction!(run_an_trials, m)?)?;
    Ok(())
}
