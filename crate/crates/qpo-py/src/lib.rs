//! Python bindings: growth profiles, smoothed-order construction, unit-disc
//! diagnostics, strip maps, and the experiment harness.
//!
//! Build the importable module with
//! `cargo build -p qpo-py --release --features extension-module`
//! and place the resulting `libqpo_py.so` on `sys.path` as `qpo_py.so`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

use qpo_core::disc::{
    disc_orders, integral_mean_p, max_modulus, mean_orders, AnalyticFunctionModel, ClosedForm,
};
use qpo_core::grid::{DiscGrid, GridSpec};
use qpo_core::growth::GrowthFunction;
use qpo_core::harness;
use qpo_core::qpo::{
    build_qpo_with_rule, eta_necessity_sweep, verify_qpo, AssociatedMajorant, EpsRule,
    PiecewiseProximateOrder, SequenceLedger,
};
use qpo_core::strip::{
    mean_proximate_order_l, omega_from_l, warschawski_map, LSampler, ProximateOrderFunction,
    StripProfile as CoreStripProfile,
};
use qpo_core::QpoError;

fn to_py_err(e: QpoError) -> PyErr {
    match e {
        QpoError::Domain(_) | QpoError::Parameter(_) | QpoError::Config(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Renders a JSON value into native Python objects via the json module.
fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v)
        .map_err(|e| PyRuntimeError::new_err(format!("serialization failed: {e}")))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A positive, non-decreasing growth profile on [domain_start, domain_end].
#[pyclass]
struct GrowthProfile {
    inner: GrowthFunction,
}

#[pymethods]
impl GrowthProfile {
    /// The oscillating-index profile whose growth index swings between
    /// `lambda_` and `rho` forever (log-log sawtooth with ramp-length knees).
    #[staticmethod]
    #[pyo3(signature = (lambda_, rho, ramp=0.01, t_max=1e8))]
    fn counterexample(lambda_: f64, rho: f64, ramp: f64, t_max: f64) -> PyResult<Self> {
        Ok(GrowthProfile {
            inner: GrowthFunction::build_counterexample(lambda_, rho, ramp, t_max)
                .map_err(to_py_err)?,
        })
    }

    /// The pure power profile coeff · t^exponent.
    #[staticmethod]
    fn power(coeff: f64, exponent: f64, t_min: f64, t_max: f64) -> PyResult<Self> {
        Ok(GrowthProfile {
            inner: GrowthFunction::power(coeff, exponent, t_min, t_max).map_err(to_py_err)?,
        })
    }

    fn eval(&self, t: f64) -> PyResult<f64> {
        self.inner.eval(t).map_err(to_py_err)
    }

    fn log_eval(&self, t: f64) -> PyResult<f64> {
        self.inner.log_eval(t).map_err(to_py_err)
    }

    /// Local growth index d log A / d log t.
    fn growth_index(&self, t: f64) -> PyResult<f64> {
        self.inner.growth_index(t).map_err(to_py_err)
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        (self.inner.domain_start(), self.inner.domain_end())
    }

    /// Estimated (upper, lower) order of log A over a log-uniform grid.
    #[pyo3(signature = (points_per_decade=32))]
    fn estimate_orders(&self, points_per_decade: usize) -> PyResult<(f64, f64)> {
        let grid = GridSpec::new(
            self.inner.domain_start().max(std::f64::consts::E),
            self.inner.domain_end(),
            points_per_decade,
        )
        .map_err(to_py_err)?;
        let est = self.inner.estimate_orders(&grid).map_err(to_py_err)?;
        Ok((est.rho_hat, est.lambda_hat))
    }
}

/// A smoothed order function sigma together with its associated majorant.
#[pyclass]
struct QuasiOrder {
    sigma: PiecewiseProximateOrder,
    majorant: AssociatedMajorant,
    ledger: SequenceLedger,
}

#[pymethods]
impl QuasiOrder {
    fn sigma(&self, t: f64) -> PyResult<f64> {
        self.sigma.eval(t).map_err(to_py_err)
    }

    /// The non-decreasing majorant A*(t) sandwiched under t^sigma.
    fn majorant(&self, t: f64) -> PyResult<f64> {
        self.majorant.eval(&self.sigma, t).map_err(to_py_err)
    }

    /// |sigma'(t)| · t · log t.
    fn derivative_witness(&self, t: f64) -> PyResult<f64> {
        self.sigma.derivative_witness(t).map_err(to_py_err)
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        self.sigma.domain()
    }

    /// Anchor/excursion bookkeeping as a JSON-compatible dict.
    fn ledger<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.ledger.to_json())
    }

    /// Re-checks the defining properties against a growth profile; returns
    /// the property report as a dict of named checks. The sample grid spans
    /// the profile's domain (points outside the order's domain are dropped);
    /// the asymptotic checks need the full construction horizon to pass.
    #[pyo3(signature = (profile, points_per_decade=60))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        profile: PyRef<'_, GrowthProfile>,
        points_per_decade: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let grid = GridSpec::new(
            profile.inner.domain_start().max(std::f64::consts::E),
            profile.inner.domain_end(),
            points_per_decade,
        )
        .map_err(to_py_err)?;
        let report = verify_qpo(&self.sigma, &self.majorant, &profile.inner, &grid)
            .map_err(to_py_err)?;
        json_to_py(py, &report.to_json())
    }
}

/// Constructs the smoothed order for a growth profile with target limit
/// levels `rho` (upper) and `lambda_ + eta` (lower).
#[pyfunction]
#[pyo3(signature = (profile, rho, lambda_, eta, t_max=1e8, points_per_decade=200, eps1=None))]
fn build_order(
    profile: PyRef<'_, GrowthProfile>,
    rho: f64,
    lambda_: f64,
    eta: f64,
    t_max: f64,
    points_per_decade: usize,
    eps1: Option<f64>,
) -> PyResult<QuasiOrder> {
    let grid = GridSpec::new(
        profile.inner.domain_start().max(std::f64::consts::E),
        t_max.min(profile.inner.domain_end()),
        points_per_decade,
    )
    .map_err(to_py_err)?;
    let (sigma, majorant, ledger) = build_qpo_with_rule(
        &profile.inner,
        rho,
        lambda_,
        eta,
        EpsRule { eps1 },
        &grid,
        t_max,
    )
    .map_err(to_py_err)?;
    Ok(QuasiOrder {
        sigma,
        majorant,
        ledger,
    })
}

/// Sweeps the oscillation depth eta and returns one dict per value with the
/// measured derivative witness and its analytic blow-up floor.
#[pyfunction]
#[pyo3(signature = (lambda_, rho, etas, t_max=1e8, points_per_decade=200))]
fn eta_sweep<'py>(
    py: Python<'py>,
    lambda_: f64,
    rho: f64,
    etas: Vec<f64>,
    t_max: f64,
    points_per_decade: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let rows =
        eta_necessity_sweep(lambda_, rho, &etas, t_max, points_per_decade).map_err(to_py_err)?;
    let value = serde_json::to_value(&rows)
        .map_err(|e| PyRuntimeError::new_err(format!("serialization failed: {e}")))?;
    json_to_py(py, &value)
}

/// An analytic function on the unit disc, usable up to |z| ≤ r_max.
#[pyclass]
struct DiscFunction {
    inner: AnalyticFunctionModel,
}

impl DiscFunction {
    fn grid(&self, eps_min: f64, points_per_decade: usize, n_theta: usize) -> PyResult<DiscGrid> {
        DiscGrid::geometric(0.5, eps_min, points_per_decade, n_theta).map_err(to_py_err)
    }
}

#[pymethods]
impl DiscFunction {
    /// f(z) = exp((1−z)^{−power}).
    #[staticmethod]
    #[pyo3(signature = (power, r_max=0.9999))]
    fn exp_inv_power(power: f64, r_max: f64) -> PyResult<Self> {
        Ok(DiscFunction {
            inner: AnalyticFunctionModel::closed_form(ClosedForm::ExpInvPower { power }, r_max)
                .map_err(to_py_err)?,
        })
    }

    /// f(z) = exp((1+z)/(1−z)).
    #[staticmethod]
    #[pyo3(signature = (r_max=0.9999))]
    fn exp_mobius(r_max: f64) -> PyResult<Self> {
        Ok(DiscFunction {
            inner: AnalyticFunctionModel::closed_form(ClosedForm::ExpMobius, r_max)
                .map_err(to_py_err)?,
        })
    }

    /// f(z) = (1−z)^{−power} − 1 (vanishes at the origin).
    #[staticmethod]
    #[pyo3(signature = (power, r_max=0.9999))]
    fn inv_power_minus_one(power: f64, r_max: f64) -> PyResult<Self> {
        Ok(DiscFunction {
            inner: AnalyticFunctionModel::closed_form(
                ClosedForm::InvPowerMinusOne { power },
                r_max,
            )
            .map_err(to_py_err)?,
        })
    }

    /// f(z) = Σ coeffs[k] z^k.
    #[staticmethod]
    #[pyo3(signature = (coeffs, r_max=0.9999))]
    fn power_series(coeffs: Vec<Complex64>, r_max: f64) -> PyResult<Self> {
        Ok(DiscFunction {
            inner: AnalyticFunctionModel::power_series(&coeffs, r_max).map_err(to_py_err)?,
        })
    }

    fn eval(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.eval(z).map_err(to_py_err)
    }

    fn log_modulus(&self, z: Complex64) -> PyResult<f64> {
        self.inner.log_modulus(z).map_err(to_py_err)
    }

    /// L^p mean of |log |f|| on the circle of radius r.
    #[pyo3(signature = (r, p, n_theta=256))]
    fn integral_mean(&self, r: f64, p: f64, n_theta: usize) -> PyResult<f64> {
        integral_mean_p(&self.inner, r, p, n_theta).map_err(to_py_err)
    }

    /// (log max |f|, maximizing angle) on the circle of radius r.
    #[pyo3(signature = (r, n_theta=256))]
    fn log_max_modulus(&self, r: f64, n_theta: usize) -> PyResult<(f64, f64)> {
        let m = max_modulus(&self.inner, r, n_theta).map_err(to_py_err)?;
        Ok((m.log_value, m.theta))
    }

    /// Estimated (upper, lower) order of log log M(r) against log 1/(1−r).
    #[pyo3(signature = (eps_min=1e-3, points_per_decade=16, n_theta=256))]
    fn max_orders(
        &self,
        eps_min: f64,
        points_per_decade: usize,
        n_theta: usize,
    ) -> PyResult<(f64, f64)> {
        let grid = self.grid(eps_min, points_per_decade, n_theta)?;
        let d = disc_orders(&self.inner, &grid).map_err(to_py_err)?;
        Ok((d.sigma_m, d.lambda_m))
    }

    /// Estimated (upper, lower) order of the p-mean of log |f|.
    #[pyo3(signature = (p, eps_min=1e-3, points_per_decade=16, n_theta=256))]
    fn mean_orders(
        &self,
        p: f64,
        eps_min: f64,
        points_per_decade: usize,
        n_theta: usize,
    ) -> PyResult<(f64, f64)> {
        let grid = self.grid(eps_min, points_per_decade, n_theta)?;
        let m = mean_orders(&self.inner, p, &grid).map_err(to_py_err)?;
        Ok((m.rho_p, m.lambda_p))
    }
}

/// A half-strip image domain { |Im ζ| < omega(Re ζ) } built from an order
/// sampler, with its boundary-tracking conformal map.
#[pyclass(name = "StripProfile")]
struct PyStripProfile {
    inner: CoreStripProfile,
}

#[pymethods]
impl PyStripProfile {
    /// `sampler_json` picks the order function, e.g.
    /// `{"kind": "constant", "value": 2.0}`,
    /// `{"kind": "two_level", "first": 1.0, "second": 2.0, "split": 100.0}`,
    /// `{"kind": "sin_log_log_log", "base": 1.5, "amplitude": 0.5}`.
    #[new]
    fn new(sampler_json: &str, q: f64, t_max: f64) -> PyResult<Self> {
        let kind: LSampler = serde_json::from_str(sampler_json)
            .map_err(|e| PyValueError::new_err(format!("sampler_json: {e}")))?;
        let l = ProximateOrderFunction::new(kind, t_max).map_err(to_py_err)?;
        Ok(PyStripProfile {
            inner: omega_from_l(l, q).map_err(to_py_err)?,
        })
    }

    /// Half-width of the image strip at abscissa u = log t.
    fn omega(&self, u: f64) -> PyResult<f64> {
        self.inner.omega(u).map_err(to_py_err)
    }

    #[getter]
    fn u_max(&self) -> f64 {
        self.inner.u_max()
    }

    #[getter]
    fn integrable(&self) -> bool {
        self.inner.integrable
    }

    /// The conformal map of the straight half-strip onto the image domain,
    /// evaluated at u + iv.
    fn map(&self, u: f64, v: f64) -> PyResult<Complex64> {
        warschawski_map(&self.inner, u, v).map_err(to_py_err)
    }

    /// Running mean L(r) of the order function against log r.
    fn mean_order(&self, r: f64) -> PyResult<f64> {
        mean_proximate_order_l(&self.inner.l, r).map_err(to_py_err)
    }
}

/// Runs one experiment from a JSON configuration string (same schema as the
/// CLI's `run` subcommand); writes its artifacts and returns the manifest as
/// a dict.
#[pyfunction]
fn run_experiment<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let cfg = harness::parse_config_str(config_json).map_err(to_py_err)?;
    let manifest = harness::run_experiment(&cfg).map_err(to_py_err)?;
    let value = serde_json::to_value(&manifest)
        .map_err(|e| PyRuntimeError::new_err(format!("serialization failed: {e}")))?;
    json_to_py(py, &value)
}

#[pymodule]
fn qpo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<GrowthProfile>()?;
    m.add_class::<QuasiOrder>()?;
    m.add_class::<DiscFunction>()?;
    m.add_class::<PyStripProfile>()?;
    m.add_function(wrap_pyfunction!(build_order, m)?)?;
    m.add_function(wrap_pyfunction!(eta_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
