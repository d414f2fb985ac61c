//! Python bindings.

// pyo3 0.22 argument extraction trips this lint inside its macros
#![allow(clippy::useless_conversion)]

use std::collections::HashMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use spherecap::certifier::{run_certificate, CertConfig, CertError, Outcome};
use spherecap::interval::{Interval, IntervalError, Precision};
use spherecap::legendre::{LegendreError, LegendreQuery, TailRatio};
use spherecap::spectrum::{self, Bc, Geometry, SpectrumError};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn interval_err(e: IntervalError) -> PyErr {
    value_err(e)
}

fn legendre_err(e: LegendreError) -> PyErr {
    value_err(e)
}

fn spectrum_err(e: SpectrumError) -> PyErr {
    match e {
        SpectrumError::Domain(_) => value_err(e),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn cert_err(e: CertError) -> PyErr {
    match e {
        CertError::Config(_) | CertError::Legendre(_) => value_err(e),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn precision(bits: u32) -> PyResult<Precision> {
    Precision::new(bits).map_err(interval_err)
}

/// Outward-rounded interval with arbitrary-precision endpoints.
#[pyclass(name = "Interval", module = "pyspherecap")]
#[derive(Clone)]
struct PyInterval {
    inner: Interval,
}

#[pymethods]
impl PyInterval {
    /// `Interval("0.1")`, `Interval("1", "2")` or `Interval("1:2")`.
    #[new]
    #[pyo3(signature = (lo, hi = None, precision_bits = 256))]
    fn new(lo: &str, hi: Option<&str>, precision_bits: u32) -> PyResult<Self> {
        let p = precision(precision_bits)?;
        let inner = match hi {
            Some(h) => Interval::from_decimal(lo, h, p),
            None => Interval::parse(lo, p),
        }
        .map_err(interval_err)?;
        Ok(PyInterval { inner })
    }

    #[getter]
    fn lo(&self) -> String {
        self.inner.to_decimal_strings(25).0
    }

    #[getter]
    fn hi(&self) -> String {
        self.inner.to_decimal_strings(25).1
    }

    #[getter]
    fn precision_bits(&self) -> u32 {
        self.inner.prec()
    }

    fn width(&self) -> f64 {
        self.inner.width_f64()
    }

    fn mid(&self) -> f64 {
        self.inner.mid_f64()
    }

    fn contains(&self, x: f64) -> bool {
        self.inner.contains_f64(x)
    }

    fn contains_zero(&self) -> bool {
        self.inner.contains_zero()
    }

    /// `"+"`, `"-"` or `"0"` when the interval straddles zero.
    fn sign(&self) -> &'static str {
        match self.inner.sign().signum() {
            1 => "+",
            -1 => "-",
            _ => "0",
        }
    }

    fn sqrt(&self) -> PyResult<Self> {
        Ok(PyInterval {
            inner: self.inner.sqrt().map_err(interval_err)?,
        })
    }

    fn __add__(&self, o: &Self) -> Self {
        PyInterval {
            inner: &self.inner + &o.inner,
        }
    }

    fn __sub__(&self, o: &Self) -> Self {
        PyInterval {
            inner: &self.inner - &o.inner,
        }
    }

    fn __mul__(&self, o: &Self) -> Self {
        PyInterval {
            inner: &self.inner * &o.inner,
        }
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        Ok(PyInterval {
            inner: self.inner.div(&o.inner).map_err(interval_err)?,
        })
    }

    fn __neg__(&self) -> Self {
        PyInterval { inner: -&self.inner }
    }

    fn __repr__(&self) -> String {
        format!("Interval({:?}, {:?})", self.lo(), self.hi())
    }
}

/// Rigorous enclosures of `P, dP, Q, dQ` over a `(λ, ρ)` box given as decimal or `lo:hi` strings.
#[pyfunction]
#[pyo3(signature = (ell, lam, rho, precision_bits = 256, order = 100, gamma = "3/2"))]
fn eval_all(
    ell: u32,
    lam: &str,
    rho: &str,
    precision_bits: u32,
    order: usize,
    gamma: &str,
) -> PyResult<HashMap<&'static str, PyInterval>> {
    let p = precision(precision_bits)?;
    let gamma: TailRatio = gamma.parse().map_err(value_err)?;
    let q = LegendreQuery::new(
        ell,
        Interval::parse(lam, p).map_err(interval_err)?,
        Interval::parse(rho, p).map_err(interval_err)?,
    )
    .with_order(order)
    .with_gamma(gamma);
    let ev = spherecap::legendre::eval_all(&q).map_err(legendre_err)?;
    let wrap = |i: &Interval| PyInterval { inner: i.clone() };
    Ok(HashMap::from([
        ("p", wrap(&ev.p)),
        ("dp", wrap(&ev.dp)),
        ("q", wrap(&ev.q)),
        ("dq", wrap(&ev.dq)),
    ]))
}

/// Runs a certificate profile; returns `(outcome, certificate JSON)`.
#[pyfunction]
#[pyo3(signature = (profile = "ell8", precision_bits = None))]
fn certify(py: Python<'_>, profile: &str, precision_bits: Option<u32>) -> PyResult<(String, String)> {
    let mut cfg = match profile {
        "ell8" => CertConfig::ell8(),
        "ell6" => py.allow_threads(CertConfig::ell6).map_err(cert_err)?,
        other => return Err(value_err(format!("unknown profile {other:?}"))),
    };
    if let Some(b) = precision_bits {
        cfg.precision_bits = b;
    }
    let cert = py.allow_threads(|| run_certificate(&cfg)).map_err(cert_err)?;
    let outcome = match cert.outcome() {
        Outcome::Certified => "certified",
        Outcome::Failed => "failed",
        Outcome::Inconclusive => "inconclusive",
    };
    Ok((outcome.into(), cert.to_json()))
}

/// Floating-point `(P, dP, Q, dQ)`.
#[pyfunction]
fn eval_float(ell: u32, lam: f64, rho: f64) -> PyResult<(f64, f64, f64, f64)> {
    let e = spectrum::eval_float(ell, lam, rho).map_err(spectrum_err)?;
    Ok((e.p, e.dp, e.q, e.dq))
}

fn bc(s: &str) -> PyResult<Bc> {
    s.parse().map_err(value_err)
}

fn geometry(s: &str) -> PyResult<Geometry> {
    s.parse().map_err(value_err)
}

#[pyfunction]
fn scan_eigenvalues(py: Python<'_>, a: f64, ell: u32, bc_name: &str, lambda_max: f64) -> PyResult<Vec<f64>> {
    let b = bc(bc_name)?;
    py.allow_threads(|| spectrum::scan_eigenvalues(a, ell, b, lambda_max))
        .map_err(spectrum_err)
}

#[pyfunction]
fn ode_spectrum(
    py: Python<'_>,
    geometry_name: &str,
    ell: u32,
    bc_name: &str,
    param: f64,
    lambda_max: f64,
) -> PyResult<Vec<f64>> {
    let (g, b) = (geometry(geometry_name)?, bc(bc_name)?);
    py.allow_threads(|| spectrum::ode_spectrum(g, ell, b, param, lambda_max))
        .map_err(spectrum_err)
}

/// Samples `(a or r, λ)` of one eigenvalue branch.
#[pyfunction]
fn trace_curve(
    py: Python<'_>,
    geometry_name: &str,
    ell: u32,
    bc_name: &str,
    branch: usize,
    grid: Vec<f64>,
) -> PyResult<Vec<(f64, f64)>> {
    let (g, b) = (geometry(geometry_name)?, bc(bc_name)?);
    let c = py
        .allow_threads(|| spectrum::trace_curve(g, ell, b, branch, &grid))
        .map_err(spectrum_err)?;
    Ok(c.samples)
}

/// Crossings of Dirichlet mode `ℓ` with zonal Neumann branches, as JSON.
#[pyfunction]
#[pyo3(signature = (geometry_name, ell, grid, dirichlet_branches = 1, neumann_branches = 6))]
fn crossings(
    py: Python<'_>,
    geometry_name: &str,
    ell: u32,
    grid: Vec<f64>,
    dirichlet_branches: usize,
    neumann_branches: usize,
) -> PyResult<String> {
    let g = geometry(geometry_name)?;
    let (found, _) = py
        .allow_threads(|| spectrum::search_crossings(g, ell, &grid, dirichlet_branches, neumann_branches))
        .map_err(spectrum_err)?;
    serde_json::to_string(&found).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// `(b★, [(φ, θ)])` for the series-range crossing of mode `ℓ`.
#[pyfunction]
#[pyo3(signature = (ell, s, samples = 360))]
fn boundary_shape(py: Python<'_>, ell: u32, s: f64, samples: usize) -> PyResult<(f64, Vec<(f64, f64)>)> {
    let c = py
        .allow_threads(|| spherecap::certifier::find_series_crossing(ell))
        .map_err(cert_err)?;
    let sh = spectrum::boundary_shape(&c, s, samples).map_err(spectrum_err)?;
    Ok((sh.b_star, sh.samples))
}

#[pymodule]
fn pyspherecap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInterval>()?;
    m.add_function(wrap_pyfunction!(eval_all, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(eval_float, m)?)?;
    m.add_function(wrap_pyfunction!(scan_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(ode_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(trace_curve, m)?)?;
    m.add_function(wrap_pyfunction!(crossings, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_shape, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
