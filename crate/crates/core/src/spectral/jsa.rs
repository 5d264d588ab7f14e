use std::f64::consts::{LN_2, PI};

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{wavenumber, CrystalSpec, DispersionSummary, Polarization, PumpSpec};
use crate::error::{Error, Result};
use crate::grid::{Axis, FreqGrid, FreqGridMeta, MismatchMode, SpectrumGrid};
use crate::units::{omega_from_wavelength, omega_width_from_wavelength_width, wavelength_from_omega};

pub const DEFAULT_FREQ_NODES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterShape {
    Gaussian,
    Rectangular,
    None,
}

/// Which photon a filter acts on: signal is the o-ray, idler the e-ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterTarget {
    Signal,
    Idler,
    Both,
}

/// Spectral filter with an intensity-FWHM bandwidth in nm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSpec {
    pub shape: FilterShape,
    pub center_wavelength_um: f64,
    pub bandwidth_nm: f64,
    pub applies_to: FilterTarget,
}

impl FilterSpec {
    pub fn new(
        shape: FilterShape,
        center_wavelength_um: f64,
        bandwidth_nm: f64,
        applies_to: FilterTarget,
    ) -> Result<Self> {
        if !(center_wavelength_um.is_finite() && center_wavelength_um > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "filter center wavelength must be positive, got {center_wavelength_um} um"
            )));
        }
        if shape != FilterShape::None && !(bandwidth_nm.is_finite() && bandwidth_nm > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "filter bandwidth must be positive, got {bandwidth_nm} nm"
            )));
        }
        Ok(Self {
            shape,
            center_wavelength_um,
            bandwidth_nm,
            applies_to,
        })
    }

    pub fn gaussian(center_wavelength_um: f64, bandwidth_nm: f64, applies_to: FilterTarget) -> Result<Self> {
        Self::new(FilterShape::Gaussian, center_wavelength_um, bandwidth_nm, applies_to)
    }

    pub fn center_omega(&self) -> f64 {
        omega_from_wavelength(self.center_wavelength_um)
    }

    /// Intensity FWHM in rad/fs.
    pub fn omega_fwhm(&self) -> f64 {
        omega_width_from_wavelength_width(self.center_wavelength_um, self.bandwidth_nm * 1e-3)
    }

    /// Amplitude transmission at `omega`.
    pub fn transmission(&self, omega: f64) -> f64 {
        self.transmission_at_detuning(omega - self.center_omega())
    }

    /// Amplitude transmission at detuning `x` from the filter center.
    pub fn transmission_at_detuning(&self, x: f64) -> f64 {
        let width = self.omega_fwhm();
        match self.shape {
            FilterShape::None => 1.0,
            FilterShape::Gaussian => (-2.0 * LN_2 * x * x / (width * width)).exp(),
            FilterShape::Rectangular => {
                let half = 0.5 * width;
                if x.abs() < half {
                    1.0
                } else if x.abs() == half {
                    0.5
                } else {
                    0.0
                }
            }
        }
    }

    /// Amplitude 1/e half-width of the filter's time response, fs.
    pub fn time_halfwidth(&self) -> f64 {
        match self.shape {
            FilterShape::None => 0.0,
            FilterShape::Gaussian => 2.0 * (2.0 * LN_2).sqrt() / self.omega_fwhm(),
            FilterShape::Rectangular => 2.0 * PI / self.omega_fwhm(),
        }
    }

    fn acts_on_e(&self) -> bool {
        matches!(self.applies_to, FilterTarget::Idler | FilterTarget::Both)
    }

    fn acts_on_o(&self) -> bool {
        matches!(self.applies_to, FilterTarget::Signal | FilterTarget::Both)
    }
}

/// Pump spectral amplitude exp{-(w - W_p)^2 / sigma^2}; a cw pump is an indicator at W_p.
pub fn pump_envelope(omega_sum: f64, pump: &PumpSpec) -> f64 {
    let x = omega_sum - pump.omega();
    if pump.is_cw() {
        return if x == 0.0 { 1.0 } else { 0.0 };
    }
    let s = pump.sigma();
    (-x * x / (s * s)).exp()
}

/// Delta = k_p^e(w_e + w_o) - k_o(w_o) - k_e(w_e) at angle `theta_pm`, rad/um.
pub fn phase_mismatch_exact(omega_e: f64, omega_o: f64, crystal: &CrystalSpec, theta_pm: f64) -> Result<f64> {
    let lp = wavelength_from_omega(omega_e + omega_o);
    let le = wavelength_from_omega(omega_e);
    let lo = wavelength_from_omega(omega_o);
    Ok(wavenumber(crystal, lp, Polarization::Extraordinary, theta_pm)?
        - wavenumber(crystal, lo, Polarization::Ordinary, theta_pm)?
        - wavenumber(crystal, le, Polarization::Extraordinary, theta_pm)?)
}

/// First-order mismatch in the detunings from degeneracy:
/// -D+ (nu_o + nu_e) - (D/2)(nu_o - nu_e).
pub fn phase_mismatch_linear(nu_e: f64, nu_o: f64, disp: &DispersionSummary) -> f64 {
    -disp.d_plus * (nu_o + nu_e) - 0.5 * disp.d_big * (nu_o - nu_e)
}

#[inline]
fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Frequency axes for a joint spectral amplitude, rad/fs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqAxes {
    pub omega_e: Axis,
    pub omega_o: Axis,
}

impl FreqAxes {
    pub fn new(omega_e: Axis, omega_o: Axis) -> Self {
        Self { omega_e, omega_o }
    }

    /// Square grid of `nodes` per axis over +-`half_span` around `center`.
    pub fn around(center: f64, half_span: f64, nodes: usize) -> Result<Self> {
        let a = Axis::spanning(center - half_span, center + half_span, nodes)?;
        Ok(Self { omega_e: a, omega_o: a })
    }

    /// Default: +-4 max(sigma_p, 2 pi 0.886 / |D L|) around the degenerate frequency.
    pub fn auto(disp: &DispersionSummary, pump: &PumpSpec, nodes: usize) -> Result<Self> {
        let sinc_width = 2.0 * PI * 0.886 / disp.dl.abs();
        let half = 4.0 * pump.sigma().max(sinc_width);
        if !half.is_finite() {
            return Err(Error::DegenerateDispersion);
        }
        Self::around(0.5 * pump.omega(), half, nodes)
    }
}

/// f(w_e, w_o) = sinc(Delta L / 2) E_p(w_e + w_o) times the filter transmissions.
pub fn joint_spectral_amplitude(
    axes: &FreqAxes,
    crystal: &CrystalSpec,
    pump: &PumpSpec,
    disp: &DispersionSummary,
    mode: MismatchMode,
    filters: &[FilterSpec],
) -> Result<FreqGrid> {
    if pump.is_cw() {
        return Err(Error::InvalidParameter(
            "a cw pump has a delta-function joint spectrum; use a pulsed pump".into(),
        ));
    }
    let (ne, no) = (axes.omega_e.len, axes.omega_o.len);
    let centre = 0.5 * pump.omega();
    let length = disp.length_um;
    let filt_o: Vec<f64> = (0..no)
        .map(|j| {
            let w = axes.omega_o.value(j);
            filters
                .iter()
                .filter(|f| f.acts_on_o())
                .map(|f| f.transmission(w))
                .product()
        })
        .collect();
    let rows = (0..ne)
        .into_par_iter()
        .map(|i| {
            let we = axes.omega_e.value(i);
            let filt_e: f64 = filters
                .iter()
                .filter(|f| f.acts_on_e())
                .map(|f| f.transmission(we))
                .product();
            let mut vals = Vec::with_capacity(no);
            let mut half = Vec::with_capacity(no);
            for (j, fo) in filt_o.iter().enumerate() {
                let wo = axes.omega_o.value(j);
                let delta = match mode {
                    MismatchMode::Exact => phase_mismatch_exact(we, wo, crystal, disp.theta_pm)?,
                    MismatchMode::Linear => phase_mismatch_linear(we - centre, wo - centre, disp),
                };
                let x = 0.5 * delta * length;
                half.push(x);
                vals.push(Complex64::new(
                    sinc(x) * pump_envelope(we + wo, pump) * filt_e * fo,
                    0.0,
                ));
            }
            Ok((vals, half))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut values = Array2::zeros((ne, no));
    let mut half_mismatch = Array2::zeros((ne, no));
    for (i, (v, h)) in rows.into_iter().enumerate() {
        values.row_mut(i).assign(&ndarray::Array1::from(v));
        half_mismatch.row_mut(i).assign(&ndarray::Array1::from(h));
    }
    Ok(FreqGrid {
        omega_e: axes.omega_e,
        omega_o: axes.omega_o,
        values,
        half_mismatch,
        meta: FreqGridMeta {
            mode,
            pump: *pump,
            dispersion: *disp,
            filters: filters.to_vec(),
            warnings: Vec::new(),
        },
    })
}

/// S = |f|^2, optionally scaled so its trapezoidal integral is 1.
pub fn joint_spectrum(jsa: &FreqGrid, normalize: bool) -> Result<SpectrumGrid> {
    let mut s = SpectrumGrid {
        omega_e: jsa.omega_e,
        omega_o: jsa.omega_o,
        values: jsa.values.mapv(|v| v.norm_sqr()),
        normalized: false,
    };
    if normalize {
        let total = s.integral();
        if !(total > 0.0) {
            return Err(Error::InvalidGrid("joint spectrum is identically zero".into()));
        }
        s.values.mapv_inplace(|v| v / total);
        s.normalized = true;
    }
    Ok(s)
}
