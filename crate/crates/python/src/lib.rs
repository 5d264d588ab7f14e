use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use biphoton::dispersion::{self, CrystalSpec, DispersionSummary, PumpSpec};
use biphoton::grid::MismatchMode;
use biphoton::spectral::{self, BridgeOptions, CorrelationThresholds, FreqAxes};
use biphoton::temporal::{self, Setup};

fn to_py(e: biphoton::Error) -> PyErr {
    match e {
        biphoton::Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn setup_from(name: &str) -> PyResult<Setup> {
    match name {
        "standard" => Ok(Setup::Standard),
        "synthesizer" => Ok(Setup::Synthesizer),
        _ => Err(PyValueError::new_err(format!(
            "setup must be 'standard' or 'synthesizer', got {name:?}"
        ))),
    }
}

fn mismatch_from(name: &str) -> PyResult<MismatchMode> {
    match name {
        "linear" => Ok(MismatchMode::Linear),
        "exact" => Ok(MismatchMode::Exact),
        _ => Err(PyValueError::new_err(format!(
            "mismatch must be 'linear' or 'exact', got {name:?}"
        ))),
    }
}

/// Uniaxial crystal: built-in Sellmeier set, length in um, optional cut angle in radians.
#[pyclass(frozen, skip_from_py_object, name = "Crystal")]
#[derive(Clone)]
struct PyCrystal(CrystalSpec);

#[pymethods]
impl PyCrystal {
    #[new]
    #[pyo3(signature = (name = "BBO", length_um = 2000.0, cut_angle = None))]
    fn new(name: &str, length_um: f64, cut_angle: Option<f64>) -> PyResult<Self> {
        let c = CrystalSpec::builtin(name, length_um).map_err(to_py)?;
        Ok(Self(c.with_cut_angle(cut_angle).map_err(to_py)?))
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn length_um(&self) -> f64 {
        self.0.length_um()
    }

    #[getter]
    fn window_um(&self) -> (f64, f64) {
        self.0.window()
    }

    fn with_length(&self, length_um: f64) -> PyResult<Self> {
        Ok(Self(self.0.with_length(length_um).map_err(to_py)?))
    }

    fn phase_matching_angle(&self, pump_wavelength_um: f64) -> PyResult<f64> {
        dispersion::phase_matching_angle(&self.0, pump_wavelength_um).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Crystal({:?}, length_um={})", self.0.name(), self.0.length_um())
    }
}

/// Gaussian pump, or cw. Bandwidths and durations are intensity FWHM.
#[pyclass(frozen, skip_from_py_object, name = "Pump")]
#[derive(Clone, Copy)]
struct PyPump(PumpSpec);

#[pymethods]
impl PyPump {
    #[staticmethod]
    fn from_bandwidth_nm(center_um: f64, bandwidth_nm: f64) -> PyResult<Self> {
        Ok(Self(
            PumpSpec::from_bandwidth_nm(center_um, bandwidth_nm).map_err(to_py)?,
        ))
    }

    #[staticmethod]
    fn from_duration_fs(center_um: f64, duration_fs: f64) -> PyResult<Self> {
        Ok(Self(PumpSpec::from_duration_fs(center_um, duration_fs).map_err(to_py)?))
    }

    #[staticmethod]
    fn cw(center_um: f64) -> PyResult<Self> {
        Ok(Self(PumpSpec::cw(center_um).map_err(to_py)?))
    }

    #[getter]
    fn center_wavelength_um(&self) -> f64 {
        self.0.center_wavelength_um()
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.0.sigma()
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.0.omega()
    }

    #[getter]
    fn is_cw(&self) -> bool {
        self.0.is_cw()
    }

    fn __repr__(&self) -> String {
        if self.0.is_cw() {
            format!("Pump.cw({})", self.0.center_wavelength_um())
        } else {
            format!(
                "Pump(center_um={}, sigma={})",
                self.0.center_wavelength_um(),
                self.0.sigma()
            )
        }
    }
}

/// Inverse group velocities (fs/um) and walk-off coefficients at the degenerate point.
#[pyclass(frozen, skip_from_py_object, name = "Dispersion")]
#[derive(Clone, Copy)]
struct PyDispersion(DispersionSummary);

#[pymethods]
impl PyDispersion {
    #[getter]
    fn inv_u_o(&self) -> f64 {
        self.0.inv_u_o
    }
    #[getter]
    fn inv_u_e(&self) -> f64 {
        self.0.inv_u_e
    }
    #[getter]
    fn inv_u_p(&self) -> f64 {
        self.0.inv_u_p
    }
    #[getter]
    fn d_plus(&self) -> f64 {
        self.0.d_plus
    }
    #[getter]
    fn d_big(&self) -> f64 {
        self.0.d_big
    }
    #[getter]
    fn dl(&self) -> f64 {
        self.0.dl
    }
    #[getter]
    fn theta_pm(&self) -> f64 {
        self.0.theta_pm
    }
    #[getter]
    fn length_um(&self) -> f64 {
        self.0.length_um
    }

    fn ridge_slope(&self) -> PyResult<f64> {
        self.0.ridge_slope().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Dispersion(d_plus={}, d_big={}, dl={})",
            self.0.d_plus, self.0.d_big, self.0.dl
        )
    }
}

#[pyfunction]
fn dispersion_params(crystal: &PyCrystal, pump: &PyPump) -> PyResult<PyDispersion> {
    Ok(PyDispersion(
        dispersion::dispersion_params(&crystal.0, &pump.0).map_err(to_py)?,
    ))
}

/// Pump wavelength (um) where D+ vanishes, searched over [lo_um, hi_um].
#[pyfunction]
#[pyo3(signature = (crystal, lo_um = 0.6, hi_um = 0.9))]
fn find_symmetric_pump_wavelength(crystal: &PyCrystal, lo_um: f64, hi_um: f64) -> PyResult<f64> {
    dispersion::find_symmetric_pump_wavelength(&crystal.0, (lo_um, hi_um)).map_err(to_py)
}

#[pyfunction]
fn pi_wavefunction(t_plus: f64, t_minus: f64, disp: &PyDispersion, pump: &PyPump) -> PyResult<Complex64> {
    temporal::pi_wavefunction(t_plus, t_minus, &disp.0, &pump.0).map_err(to_py)
}

/// Normalized coincidence rate at each delay; angles in radians.
#[pyfunction]
#[pyo3(signature = (taus, disp, pump, theta1, theta2, setup = "synthesizer", nodes = 1024))]
#[allow(clippy::too_many_arguments)]
fn interference_scan<'py>(
    py: Python<'py>,
    taus: Vec<f64>,
    disp: &PyDispersion,
    pump: &PyPump,
    theta1: f64,
    theta2: f64,
    setup: &str,
    nodes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let setup = setup_from(setup)?;
    let p = py
        .detach(|| temporal::interference_scan(&taus, &disp.0, &pump.0, theta1, theta2, setup, nodes))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("taus", p.taus)?;
    d.set_item("rates", p.rates)?;
    d.set_item("visibility", p.visibility)?;
    d.set_item("warnings", p.warnings)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (disp, pump, tau, nodes = 1024))]
fn werner_epsilon(disp: &PyDispersion, pump: &PyPump, tau: f64, nodes: usize) -> PyResult<f64> {
    Ok(temporal::werner_epsilon(&disp.0, &pump.0, tau, nodes)
        .map_err(to_py)?
        .epsilon)
}

/// Pearson correlation, Schmidt number and marginals of the joint spectrum.
#[pyfunction]
#[pyo3(signature = (crystal, pump, nodes = 512, mismatch = "linear"))]
fn spectral_diagnostics<'py>(
    py: Python<'py>,
    crystal: &PyCrystal,
    pump: &PyPump,
    nodes: usize,
    mismatch: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let mode = mismatch_from(mismatch)?;
    let (axes, diag) = py
        .detach(|| -> biphoton::Result<_> {
            let disp = dispersion::dispersion_params(&crystal.0, &pump.0)?;
            let axes = FreqAxes::auto(&disp, &pump.0, nodes)?;
            let jsa = spectral::joint_spectral_amplitude(&axes, &crystal.0, &pump.0, &disp, mode, &[])?;
            Ok((
                axes,
                spectral::spectral_diagnostics(&jsa, &CorrelationThresholds::default())?,
            ))
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("omega", axes.omega_o.values())?;
    d.set_item("pearson_rho", diag.pearson_rho)?;
    d.set_item("schmidt_number", diag.schmidt_number)?;
    d.set_item("classification", format!("{:?}", diag.classification).to_lowercase())?;
    d.set_item("marginal_signal", diag.marginal_signal)?;
    d.set_item("marginal_idler", diag.marginal_idler)?;
    Ok(d)
}

/// Time-domain wavefunction from the joint spectrum by 2D FFT. Returns the t+ and t-
/// axes and the amplitude as rows over t+.
#[pyfunction]
#[pyo3(signature = (crystal, pump, nodes = 256))]
fn time_domain_wavefunction<'py>(
    py: Python<'py>,
    crystal: &PyCrystal,
    pump: &PyPump,
    nodes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let grid = py
        .detach(|| -> biphoton::Result<_> {
            let disp = dispersion::dispersion_params(&crystal.0, &pump.0)?;
            let axes = spectral::bridge_axes(&disp, &pump.0, &[], nodes)?;
            let jsa = spectral::joint_spectral_amplitude(&axes, &crystal.0, &pump.0, &disp, MismatchMode::Linear, &[])?;
            spectral::time_domain_wavefunction(&jsa, &BridgeOptions::default())
        })
        .map_err(to_py)?;
    let rows: Vec<Vec<Complex64>> = grid.values.outer_iter().map(|r| r.to_vec()).collect();
    let d = PyDict::new(py);
    d.set_item("t_plus", grid.t_plus.values())?;
    d.set_item("t_minus", grid.t_minus.values())?;
    d.set_item("values", rows)?;
    Ok(d)
}

#[pyfunction]
fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    biphoton::scenarios::list_scenarios()
}

/// Runs a scenario, writes its bundle under `out_root/<id>`, and returns the report.
#[pyfunction]
fn run_scenario<'py>(py: Python<'py>, id: &str, out_root: std::path::PathBuf) -> PyResult<Bound<'py, PyDict>> {
    let report = py
        .detach(|| biphoton::scenarios::run_scenario(id, &out_root))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("id", &report.id)?;
    d.set_item("passed", report.passed)?;
    let rows: Vec<(String, f64, bool)> = report
        .assertions
        .iter()
        .map(|a| (a.name.clone(), a.value, a.passed))
        .collect();
    d.set_item("assertions", rows)?;
    Ok(d)
}

#[pymodule]
fn pybiphoton(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCrystal>()?;
    m.add_class::<PyPump>()?;
    m.add_class::<PyDispersion>()?;
    m.add_function(wrap_pyfunction!(dispersion_params, m)?)?;
    m.add_function(wrap_pyfunction!(find_symmetric_pump_wavelength, m)?)?;
    m.add_function(wrap_pyfunction!(pi_wavefunction, m)?)?;
    m.add_function(wrap_pyfunction!(interference_scan, m)?)?;
    m.add_function(wrap_pyfunction!(werner_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_diagnostics, m)?)?;
    m.add_function(wrap_pyfunction!(time_domain_wavefunction, m)?)?;
    m.add_function(wrap_pyfunction!(list_scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
