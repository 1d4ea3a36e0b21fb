//! Python module `bbcap`: channel specs, kernels, broadband factors, reports
//! and the Gaussian-state oracle.

use bbcap_core as core;
use bbcap_core::{ModeParams, ModeSolveRequest, NoiseModel, PhysicalInputs, Quantity};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(bbcap, CapacityError, PyValueError, "Raised when a capacity computation fails.");

fn err(e: core::CapacityError) -> PyErr {
    CapacityError::new_err(format!("{}: {e}", e.kind()))
}

fn quantity(name: &str) -> PyResult<Quantity> {
    name.parse().map_err(err)
}

/// Broadband channel: noise model, efficiency and noise parameters.
#[pyclass(name = "ChannelSpec", module = "bbcap", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyChannelSpec(core::ChannelSpec);

#[pymethods]
impl PyChannelSpec {
    #[new]
    #[pyo3(signature = (model, eta, nbar = 0.0, rho_t = 0.0))]
    fn new(model: &str, eta: f64, nbar: f64, rho_t: f64) -> PyResult<Self> {
        let spec = match model.parse::<NoiseModel>().map_err(err)? {
            NoiseModel::Loss => core::ChannelSpec::loss(eta),
            NoiseModel::WhiteNoise => core::ChannelSpec::white(eta, nbar),
            NoiseModel::Thermal => core::ChannelSpec::thermal(eta, rho_t),
            NoiseModel::Dephasing => core::ChannelSpec::dephasing(eta),
        };
        spec.validate().map_err(err)?;
        Ok(Self(spec))
    }

    #[staticmethod]
    fn loss(eta: f64) -> PyResult<Self> {
        Self::new("loss", eta, 0.0, 0.0)
    }

    #[staticmethod]
    fn white(eta: f64, nbar: f64) -> PyResult<Self> {
        Self::new("white", eta, nbar, 0.0)
    }

    #[staticmethod]
    fn thermal(eta: f64, rho_t: f64) -> PyResult<Self> {
        Self::new("thermal", eta, 0.0, rho_t)
    }

    #[staticmethod]
    fn dephasing(eta: f64) -> PyResult<Self> {
        Self::new("dephasing", eta, 0.0, 0.0)
    }

    #[getter]
    fn model(&self) -> &'static str {
        self.0.model.as_str()
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.0.eta
    }

    #[getter]
    fn nbar(&self) -> f64 {
        self.0.nbar
    }

    #[getter]
    fn rho_t(&self) -> f64 {
        self.0.rho_t
    }

    fn __repr__(&self) -> String {
        format!(
            "ChannelSpec(model='{}', eta={}, nbar={}, rho_t={})",
            self.0.model, self.0.eta, self.0.nbar, self.0.rho_t
        )
    }
}

/// Solved broadband problem for one quantity.
#[pyclass(name = "SpectrumSolution", module = "bbcap", frozen, get_all)]
struct PySpectrumSolution {
    quantity: String,
    y0: f64,
    f_value: f64,
    w_integral: f64,
    factor: f64,
    support: Vec<(f64, f64)>,
}

#[pymethods]
impl PySpectrumSolution {
    fn __repr__(&self) -> String {
        format!("SpectrumSolution(quantity='{}', factor={}, y0={})", self.quantity, self.factor, self.y0)
    }
}

/// Every capacity factor of a channel plus the noiseless rate `R_C`.
#[pyclass(name = "CapacityReport", module = "bbcap", frozen)]
struct PyCapacityReport(core::CapacityReport);

#[pymethods]
impl PyCapacityReport {
    #[getter]
    fn rc_bits_per_sec(&self) -> f64 {
        self.0.rc_bits_per_sec
    }

    #[getter]
    fn y0(&self) -> (f64, f64, f64) {
        (self.0.y0_ce, self.0.y0_c, self.0.y0_q)
    }

    /// `(name, factor)` pairs: ce, c_lower, c_upper, q_lower, q_alt, qe.
    fn factors(&self) -> Vec<(&'static str, f64)> {
        self.0.factors().to_vec()
    }

    /// Capacity in bits over the transmission time.
    fn absolute(&self, factor: f64) -> f64 {
        self.0.absolute(factor)
    }
}

/// Single-mode Gaussian state.
#[pyclass(name = "GaussianModeState", module = "bbcap", frozen)]
struct PyGaussianModeState(core::GaussianModeState);

#[pymethods]
impl PyGaussianModeState {
    #[new]
    #[pyo3(signature = (n0, r = 0.0, c = 0.0, m = 0.0))]
    fn new(n0: f64, r: f64, c: f64, m: f64) -> PyResult<Self> {
        core::make_state(n0, r, c, m).map(Self).map_err(err)
    }

    #[staticmethod]
    fn thermal(n: f64) -> PyResult<Self> {
        core::GaussianModeState::thermal(n).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (lam_plus, lam_minus, m = 0.0))]
    fn from_eigenvalues(lam_plus: f64, lam_minus: f64, m: f64) -> PyResult<Self> {
        core::GaussianModeState::from_eigenvalues(lam_plus, lam_minus, m).map(Self).map_err(err)
    }

    fn eigenvalues(&self) -> (f64, f64) {
        self.0.eigenvalues()
    }

    fn mean_photons(&self) -> f64 {
        self.0.mean_photons()
    }
}

fn mode(n: f64, nbar: f64, eta: f64) -> PyResult<ModeParams> {
    ModeParams::new(n, nbar, eta).map_err(err)
}

/// Bosonic entropy `g(x)` in bits.
#[pyfunction]
fn g_entropy(x: f64) -> PyResult<f64> {
    core::g_entropy(x).map_err(err)
}

/// Single-mode kernel `ce`, `c_lower` or `q_lower`.
#[pyfunction]
fn kernel(quantity_name: &str, n: f64, nbar: f64, eta: f64) -> PyResult<f64> {
    core::kernel(quantity(quantity_name)?, &mode(n, nbar, eta)?).map_err(err)
}

/// Kernel of the dephasing channel (reservoir occupation equal to `n`).
#[pyfunction]
fn kernel_dephasing(quantity_name: &str, n: f64, eta: f64) -> PyResult<f64> {
    core::kernel_dephasing(quantity(quantity_name)?, n, eta).map_err(err)
}

/// Optimal occupation at scaled frequency `x`: `(n, clamped)`.
#[pyfunction]
#[pyo3(signature = (quantity_name, spec, x, y0 = 0.0))]
fn mode_occupation(quantity_name: &str, spec: PyRef<'_, PyChannelSpec>, x: f64, y0: f64) -> PyResult<(f64, bool)> {
    let req = ModeSolveRequest { quantity: quantity(quantity_name)?, spec: spec.0, x, y0 };
    let p = core::mode_occupation(&req).map_err(err)?;
    Ok((p.n, p.clamped))
}

/// Occupations on the given frequencies as `(x, n, clamped)` tuples.
#[pyfunction]
fn occupation_profile(
    quantity_name: &str,
    spec: PyRef<'_, PyChannelSpec>,
    y0: f64,
    xs: Vec<f64>,
) -> PyResult<Vec<(f64, f64, bool)>> {
    let pts = core::occupation_profile(quantity(quantity_name)?, &spec.0, y0, &xs).map_err(err)?;
    Ok(pts.into_iter().map(|p| (p.x, p.n, p.clamped)).collect())
}

#[pyfunction]
fn solve_y0(quantity_name: &str, spec: PyRef<'_, PyChannelSpec>) -> PyResult<f64> {
    core::solve_y0(quantity(quantity_name)?, &spec.0).map_err(err)
}

/// Broadband capacity factor in units of `𝒯·R_C`.
#[pyfunction]
fn capacity_factor(
    py: Python<'_>,
    quantity_name: &str,
    spec: PyRef<'_, PyChannelSpec>,
) -> PyResult<PySpectrumSolution> {
    let q = quantity(quantity_name)?;
    let s = spec.0;
    let sol = py.detach(|| core::capacity_factor(q, &s)).map_err(err)?;
    Ok(PySpectrumSolution {
        quantity: q.as_str().to_string(),
        y0: sol.y0,
        f_value: sol.f_value,
        w_integral: sol.w_integral,
        factor: sol.factor,
        support: sol.support,
    })
}

/// Closed-form coherent-state factor (loss, white and thermal noise).
#[pyfunction]
fn analytic_k(spec: PyRef<'_, PyChannelSpec>) -> PyResult<f64> {
    core::analytic_k(&spec.0).map_err(err)
}

#[pyfunction]
fn q_alt_bound(ce_factor: f64) -> f64 {
    core::q_alt_bound(ce_factor)
}

#[pyfunction]
#[pyo3(signature = (spec, power, temperature = 0.0, time = 1.0))]
fn capacity_report(
    py: Python<'_>,
    spec: PyRef<'_, PyChannelSpec>,
    power: f64,
    temperature: f64,
    time: f64,
) -> PyResult<PyCapacityReport> {
    let inputs = PhysicalInputs::new(power, temperature, time).map_err(err)?;
    let s = spec.0;
    py.detach(|| core::capacity_report(&s, &inputs)).map(PyCapacityReport).map_err(err)
}

/// Noiseless rate `R_C` in bits/s.
#[pyfunction]
fn rate_rc(power: f64) -> PyResult<f64> {
    core::rate_rc(&PhysicalInputs::new(power, 0.0, 1.0).map_err(err)?).map_err(err)
}

/// `R_T/R_C` for a bath temperature and input power.
#[pyfunction]
fn thermal_ratio(power: f64, temperature: f64) -> PyResult<f64> {
    Ok(core::thermal_ratio(&PhysicalInputs::new(power, temperature, 1.0).map_err(err)?))
}

#[pyfunction]
fn critical_temperature(power: f64) -> f64 {
    core::critical_temperature(power)
}

#[pyfunction]
fn mutual_information(state: PyRef<'_, PyGaussianModeState>, nbar: f64, eta: f64) -> PyResult<f64> {
    core::mutual_information(&state.0, &mode(0.0, nbar, eta)?).map_err(err)
}

#[pyfunction]
fn coherent_information(state: PyRef<'_, PyGaussianModeState>, nbar: f64, eta: f64) -> PyResult<f64> {
    core::coherent_information(&state.0, &mode(0.0, nbar, eta)?).map_err(err)
}

/// Mutual information along `λ₊ − λ₋` at fixed mean photon number `n`.
///
/// Returns `(samples, argmax_diff, achieved_at_zero)`.
#[pyfunction]
#[pyo3(signature = (n, nbar, eta, grid_size = 101))]
fn verify_no_squeezing(n: f64, nbar: f64, eta: f64, grid_size: usize) -> PyResult<(Vec<(f64, f64)>, f64, bool)> {
    let scan = core::verify_no_squeezing(n, &mode(0.0, nbar, eta)?, grid_size).map_err(err)?;
    Ok((scan.samples, scan.argmax_diff, scan.achieved_at_zero))
}

#[pymodule]
fn bbcap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add_class::<PyChannelSpec>()?;
    m.add_class::<PySpectrumSolution>()?;
    m.add_class::<PyCapacityReport>()?;
    m.add_class::<PyGaussianModeState>()?;
    m.add_function(wrap_pyfunction!(g_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(kernel, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_dephasing, m)?)?;
    m.add_function(wrap_pyfunction!(mode_occupation, m)?)?;
    m.add_function(wrap_pyfunction!(occupation_profile, m)?)?;
    m.add_function(wrap_pyfunction!(solve_y0, m)?)?;
    m.add_function(wrap_pyfunction!(capacity_factor, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_k, m)?)?;
    m.add_function(wrap_pyfunction!(q_alt_bound, m)?)?;
    m.add_function(wrap_pyfunction!(capacity_report, m)?)?;
    m.add_function(wrap_pyfunction!(rate_rc, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(critical_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(coherent_information, m)?)?;
    m.add_function(wrap_pyfunction!(verify_no_squeezing, m)?)?;
    Ok(())
}
