//! Python bindings for `magnus-tls`.

use std::path::PathBuf;

use magnus_tls as tls;
use num_complex::Complex64;
use tls::cli::{self as driver, DetuningScale, ExperimentConfig};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(err: tls::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn cli_error(err: driver::CliError) -> PyErr {
    match err {
        driver::CliError::Io { .. } => PyIOError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn order_of(order: u32) -> PyResult<tls::Order> {
    tls::Order::try_from(order).map_err(value_error)
}

#[pyclass(name = "BlochVector", module = "magnus_tls", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyBlochVector(tls::BlochVector);

#[pymethods]
impl PyBlochVector {
    #[new]
    fn new(s1: f64, s2: f64, s3: f64) -> Self {
        Self(tls::BlochVector::new(s1, s2, s3))
    }

    #[staticmethod]
    fn ground() -> Self {
        Self(tls::BlochVector::ground())
    }

    #[staticmethod]
    fn excited() -> Self {
        Self(tls::BlochVector::excited())
    }

    /// Builds the vector from density-matrix entries ρ₀₀, ρ₁₁ and ρ₀₁.
    #[staticmethod]
    fn from_density(rho00: f64, rho11: f64, rho01: Complex64) -> PyResult<Self> {
        let rho = tls::DensityMatrix::new(rho00, rho11, rho01).map_err(value_error)?;
        Ok(Self(tls::bloch_from_density(&rho)))
    }

    #[getter]
    fn s1(&self) -> f64 {
        self.0.s1
    }

    #[getter]
    fn s2(&self) -> f64 {
        self.0.s2
    }

    #[getter]
    fn s3(&self) -> f64 {
        self.0.s3
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Returns (ρ₀₀, ρ₁₁, ρ₀₁); fails outside the Bloch ball.
    #[allow(clippy::wrong_self_convention)]
    fn to_density(&self) -> PyResult<(f64, f64, Complex64)> {
        let rho = tls::density_from_bloch(&self.0).map_err(value_error)?;
        Ok((rho.rho00(), rho.rho11(), rho.rho01()))
    }

    fn __repr__(&self) -> String {
        format!("BlochVector({}, {}, {})", self.0.s1, self.0.s2, self.0.s3)
    }
}

#[pyclass(name = "Pulse", module = "magnus_tls", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyPulse(tls::Pulse);

#[pymethods]
impl PyPulse {
    /// `width` is τ for gaussians and the full duration otherwise.
    #[new]
    #[pyo3(signature = (shape, peak, center, width))]
    fn new(shape: &str, peak: f64, center: f64, width: f64) -> PyResult<Self> {
        let shape: tls::PulseShape = shape.parse().map_err(value_error)?;
        tls::Pulse::with_shape(shape, peak, center, width).map(Self).map_err(value_error)
    }

    fn normalize_area(&self, target: f64) -> PyResult<Self> {
        self.0.normalize_area(target).map(Self).map_err(value_error)
    }

    #[getter]
    fn shape(&self) -> &'static str {
        self.0.shape().name()
    }

    #[getter]
    fn peak(&self) -> f64 {
        self.0.peak()
    }

    #[getter]
    fn support(&self) -> (f64, f64) {
        self.0.support()
    }

    fn area(&self) -> f64 {
        self.0.area()
    }

    fn __call__(&self, t: f64) -> f64 {
        self.0.evaluate(t)
    }

    /// Uniform grid over the pulse support.
    fn nodes(&self, count: usize) -> PyResult<Vec<f64>> {
        Ok(self.0.window_grid(count).map_err(value_error)?.nodes().collect())
    }

    fn __repr__(&self) -> String {
        format!("Pulse(shape={}, peak={}, center={}, width={})", self.0.shape(), self.0.peak(), self.0.center(), self.0.width())
    }
}

type Series = (Vec<f64>, Vec<(f64, f64, f64)>);

fn unpack(traj: tls::Trajectory) -> Series {
    let times = traj.grid().nodes().collect();
    let states = traj.states().iter().map(|s| (s.s1, s.s2, s.s3)).collect();
    (times, states)
}

fn setup(pulse: &PyPulse, nodes: usize) -> PyResult<tls::TimeGrid> {
    pulse.0.window_grid(nodes).map_err(value_error)
}

/// Magnus coefficients on the pulse window, as a dict of equal-length lists.
#[pyfunction]
#[pyo3(signature = (pulse, detuning, order=3, nodes=2001))]
fn coefficients<'py>(py: Python<'py>, pulse: &PyPulse, detuning: f64, order: u32, nodes: usize) -> PyResult<Bound<'py, PyDict>> {
    let grid = setup(pulse, nodes)?;
    let cfg = tls::DriveConfig::new(pulse.0, detuning);
    let coeffs = py.detach(|| tls::build_coefficients(&cfg, &grid, order_of(order)?).map_err(value_error))?;
    let out = PyDict::new(py);
    let column = |f: fn(&tls::MagnusCoefficients) -> f64| coeffs.iter().map(f).collect::<Vec<_>>();
    out.set_item("t", column(|c| c.t))?;
    out.set_item("eta", column(|c| c.eta))?;
    out.set_item("zeta", column(|c| c.zeta))?;
    out.set_item("lambda", column(|c| c.lambda))?;
    out.set_item("lambda1", column(|c| c.lambda1))?;
    out.set_item("lambda2", column(|c| c.lambda2))?;
    Ok(out)
}

/// Closed-form Magnus trajectory: returns (times, [(S1, S2, S3), ...]).
#[pyfunction]
#[pyo3(signature = (pulse, detuning, order=3, nodes=2001, initial=None))]
fn magnus_trajectory(
    py: Python<'_>,
    pulse: &PyPulse,
    detuning: f64,
    order: u32,
    nodes: usize,
    initial: Option<PyBlochVector>,
) -> PyResult<Series> {
    let grid = setup(pulse, nodes)?;
    let cfg = tls::DriveConfig::new(pulse.0, detuning);
    let s0 = initial.map_or_else(tls::BlochVector::ground, |s| s.0);
    let order = order_of(order)?;
    py.detach(|| {
        let coeffs = tls::build_coefficients(&cfg, &grid, order)?;
        tls::closed_form_trajectory(&coeffs, &grid, &s0)
    })
    .map(unpack)
    .map_err(value_error)
}

/// RK4 solution of the Bloch equation.
#[pyfunction]
#[pyo3(signature = (pulse, detuning, nodes=2001, initial=None))]
fn bloch_trajectory(py: Python<'_>, pulse: &PyPulse, detuning: f64, nodes: usize, initial: Option<PyBlochVector>) -> PyResult<Series> {
    let grid = setup(pulse, nodes)?;
    let cfg = tls::DriveConfig::new(pulse.0, detuning);
    let s0 = initial.map_or_else(tls::BlochVector::ground, |s| s.0);
    py.detach(|| tls::integrate_bloch(&cfg, &grid, &s0)).map(unpack).map_err(value_error)
}

/// RK4 solution of the von Neumann equation, reported as Bloch vectors.
#[pyfunction]
#[pyo3(signature = (pulse, detuning, nodes=2001))]
fn von_neumann_trajectory(py: Python<'_>, pulse: &PyPulse, detuning: f64, nodes: usize) -> PyResult<Series> {
    let grid = setup(pulse, nodes)?;
    let cfg = tls::DriveConfig::new(pulse.0, detuning);
    py.detach(|| tls::integrate_von_neumann(&cfg, &grid, &tls::DensityMatrix::ground())).map(unpack).map_err(value_error)
}

/// Rotation matrix exp(G) for the exponent built from (η, ζ, λ).
#[pyfunction]
fn expm_skew(eta: f64, zeta: f64, lambda: f64) -> [[f64; 3]; 3] {
    let exponent = tls::MagnusExponent::from_coefficients(eta, zeta, lambda, tls::Order::Third, 0.0);
    let r = tls::expm_skew(&exponent);
    let m = r.matrix();
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

/// Full Δ sweep against the numerical reference. Returns one dict per
/// (Δ, order) row. Files are written only when `out_dir` is given.
#[pyfunction]
#[pyo3(signature = (
    shape="gaussian", width=1.0, center=6.0, area=std::f64::consts::FRAC_PI_2,
    detunings=vec![0.0], orders=vec![1, 2, 3], nodes=2001, scale="absolute", out_dir=None
))]
#[allow(clippy::too_many_arguments)]
fn run_comparison<'py>(
    py: Python<'py>,
    shape: &str,
    width: f64,
    center: f64,
    area: f64,
    detunings: Vec<f64>,
    orders: Vec<u32>,
    nodes: usize,
    scale: &str,
    out_dir: Option<PathBuf>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let detuning_scale = match scale {
        "absolute" => DetuningScale::Absolute,
        "peak" => DetuningScale::Peak,
        other => return Err(PyValueError::new_err(format!("scale must be 'absolute' or 'peak', got '{other}'"))),
    };
    let emit = out_dir.is_some();
    let cfg = ExperimentConfig {
        pulse_shape: shape.parse().map_err(value_error)?,
        pulse_width: width,
        pulse_center: center,
        pulse_area: area,
        detunings,
        detuning_scale,
        orders: orders.into_iter().map(order_of).collect::<PyResult<_>>()?,
        grid_nodes: nodes,
        out_dir: out_dir.unwrap_or_default(),
        emit_trajectories: emit,
        emit_summary: emit,
        emit_plots: emit,
    };
    let comparison = py.detach(|| {
        let comparison = driver::run_comparison(&cfg)?;
        driver::emit_outputs(&comparison, &cfg)?;
        Ok(comparison)
    });
    let comparison = comparison.map_err(cli_error)?;
    comparison
        .report
        .rows
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("delta", row.delta)?;
            d.set_item("order", row.order.as_u32())?;
            d.set_item("max_err", row.max_err)?;
            d.set_item("rho00", row.magnus_final.rho00)?;
            d.set_item("rho11", row.magnus_final.rho11)?;
            d.set_item("numeric_rho00", row.numeric_final.rho00)?;
            d.set_item("numeric_rho11", row.numeric_final.rho11)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "magnus_tls")]
fn magnus_tls_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBlochVector>()?;
    m.add_class::<PyPulse>()?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(magnus_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(bloch_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(von_neumann_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(expm_skew, m)?)?;
    m.add_function(wrap_pyfunction!(run_comparison, m)?)?;
    Ok(())
}
