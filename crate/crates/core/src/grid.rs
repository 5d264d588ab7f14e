//! Uniformly sampled complex grids in time (t+, t-) and frequency (w_e, w_o).

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{DispersionSummary, PumpSpec};
use crate::error::{Error, Result};
use crate::quadrature;

/// `len` nodes at `start + i * step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidGrid(format!("axis needs at least 2 nodes, got {len}")));
        }
        if !(step.is_finite() && step > 0.0 && start.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "axis step must be positive and finite (start {start}, step {step})"
            )));
        }
        Ok(Self { start, step, len })
    }

    /// `len` nodes from `lo` to `hi` inclusive.
    pub fn spanning(lo: f64, hi: f64, len: usize) -> Result<Self> {
        if len < 2 || !(hi > lo) {
            return Err(Error::InvalidGrid(format!("cannot span [{lo}, {hi}] with {len} nodes")));
        }
        Self::new(lo, (hi - lo) / (len - 1) as f64, len)
    }

    /// `len` nodes centered on `center`.
    pub fn centered(center: f64, step: f64, len: usize) -> Result<Self> {
        Self::new(center - 0.5 * (len - 1) as f64 * step, step, len)
    }

    #[inline]
    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.value(self.len - 1)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.value(i)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        quadrature::trapezoid_weights(self.len, self.step)
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.start <= lo && hi <= self.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeKind {
    /// The bare two-photon wavefunction.
    Wavefunction,
    /// Collinear beamsplitter setup.
    Standard,
    /// Bell-state synthesizer.
    Synthesizer,
    /// Fourier transform of a joint spectral amplitude.
    FromSpectrum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGridMeta {
    pub kind: AmplitudeKind,
    /// Incoherent reference energy; coincidence rates are divided by it.
    pub reference_energy: Option<f64>,
    /// cw pump: |values|^2 does not depend on t+ and integrals run over one row.
    pub t_plus_invariant: bool,
    pub dispersion: Option<DispersionSummary>,
    pub pump: Option<PumpSpec>,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub tau: Option<f64>,
    pub warnings: Vec<String>,
}

impl TimeGridMeta {
    pub fn new(kind: AmplitudeKind) -> Self {
        Self {
            kind,
            reference_energy: None,
            t_plus_invariant: false,
            dispersion: None,
            pump: None,
            theta1: None,
            theta2: None,
            tau: None,
            warnings: Vec::new(),
        }
    }
}

/// Complex amplitude on a (t+, t-) grid, `values[[i_plus, i_minus]]`, times in fs.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    pub t_plus: Axis,
    pub t_minus: Axis,
    pub values: Array2<Complex64>,
    pub meta: TimeGridMeta,
}

impl TimeGrid {
    pub fn new(t_plus: Axis, t_minus: Axis, values: Array2<Complex64>, meta: TimeGridMeta) -> Result<Self> {
        if values.dim() != (t_plus.len, t_minus.len) {
            return Err(Error::InvalidGrid(format!(
                "values {:?} do not match axes ({}, {})",
                values.dim(),
                t_plus.len,
                t_minus.len
            )));
        }
        Ok(Self {
            t_plus,
            t_minus,
            values,
            meta,
        })
    }

    /// Trapezoidal integral of |values|^2. For t+-invariant grids this is per unit t+.
    pub fn energy(&self) -> f64 {
        if self.meta.t_plus_invariant {
            let row: Vec<f64> = self.values.row(0).iter().map(|v| v.norm_sqr()).collect();
            quadrature::trapezoid(&row, self.t_minus.step)
        } else {
            quadrature::trapezoid_2d(&self.values, self.t_plus.step, self.t_minus.step, |v| v.norm_sqr())
        }
    }

    /// Marginal density of |values|^2 along t-, integrated over t+.
    pub fn t_minus_marginal(&self) -> Vec<f64> {
        let w = self.t_plus.weights();
        (0..self.t_minus.len)
            .map(|j| {
                self.values
                    .column(j)
                    .iter()
                    .zip(&w)
                    .map(|(v, w)| v.norm_sqr() * w)
                    .sum()
            })
            .collect()
    }

    /// RMS width along t- of the |values|^2 density.
    pub fn t_minus_rms_width(&self) -> f64 {
        let m = self.t_minus_marginal();
        let ts = self.t_minus.values();
        let norm: f64 = m.iter().sum();
        let mean: f64 = m.iter().zip(&ts).map(|(p, t)| p * t).sum::<f64>() / norm;
        let var: f64 = m.iter().zip(&ts).map(|(p, t)| p * (t - mean).powi(2)).sum::<f64>() / norm;
        var.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MismatchMode {
    /// Full Sellmeier wavevectors.
    Exact,
    /// First-order expansion in the detunings.
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreqGridMeta {
    pub mode: MismatchMode,
    pub pump: PumpSpec,
    pub dispersion: DispersionSummary,
    pub filters: Vec<crate::spectral::FilterSpec>,
    pub warnings: Vec<String>,
}

/// Joint spectral amplitude on a (w_e, w_o) grid, `values[[i_e, i_o]]`, in rad/fs.
///
/// `half_mismatch` holds Delta*L/2 per node; the propagation phase exp(-i Delta L/2)
/// is left out of `values` and applied when transforming to the time domain.
#[derive(Debug, Clone)]
pub struct FreqGrid {
    pub omega_e: Axis,
    pub omega_o: Axis,
    pub values: Array2<Complex64>,
    pub half_mismatch: Array2<f64>,
    pub meta: FreqGridMeta,
}

impl FreqGrid {
    pub fn dims_ok(&self) -> bool {
        self.values.dim() == (self.omega_e.len, self.omega_o.len) && self.half_mismatch.dim() == self.values.dim()
    }
}

/// Real density on a (w_e, w_o) grid.
#[derive(Debug, Clone)]
pub struct SpectrumGrid {
    pub omega_e: Axis,
    pub omega_o: Axis,
    pub values: Array2<f64>,
    pub normalized: bool,
}

impl SpectrumGrid {
    pub fn integral(&self) -> f64 {
        let we = self.omega_e.weights();
        let wo = self.omega_o.weights();
        let mut total = 0.0;
        for (i, row) in self.values.rows().into_iter().enumerate() {
            total += we[i] * row.iter().zip(&wo).map(|(v, w)| v * w).sum::<f64>();
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_spanning_hits_endpoints() {
        let a = Axis::spanning(-3.0, 5.0, 9).unwrap();
        assert_eq!(a.step, 1.0);
        assert_eq!(a.end(), 5.0);
        assert!(a.covers(-3.0, 5.0));
        assert!(!a.covers(-3.1, 0.0));
    }

    #[test]
    fn axis_rejects_degenerate() {
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(0.0, 0.0, 4).is_err());
        assert!(Axis::new(0.0, -1.0, 4).is_err());
        assert!(Axis::spanning(1.0, 1.0, 4).is_err());
    }

    #[test]
    fn centered_axis_is_symmetric() {
        let a = Axis::centered(2.0, 0.5, 4).unwrap();
        assert_eq!(a.values(), vec![1.25, 1.75, 2.25, 2.75]);
    }

    #[test]
    fn grid_shape_checked() {
        let a = Axis::spanning(0.0, 1.0, 3).unwrap();
        let b = Axis::spanning(0.0, 1.0, 4).unwrap();
        let meta = TimeGridMeta::new(AmplitudeKind::Wavefunction);
        assert!(TimeGrid::new(a, b, Array2::zeros((3, 4)), meta.clone()).is_ok());
        assert!(TimeGrid::new(a, b, Array2::zeros((4, 3)), meta).is_err());
    }
}
