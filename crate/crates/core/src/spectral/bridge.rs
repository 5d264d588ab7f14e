use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dispersion::{DispersionSummary, PumpSpec};
use crate::error::{Error, Result};
use crate::grid::{AmplitudeKind, Axis, FreqGrid, TimeGrid, TimeGridMeta};

use super::jsa::{FilterSpec, FreqAxes};

/// Largest |f| allowed on the grid boundary, relative to max |f|. The sinc tail
/// along the anticorrelated diagonal decays only as 1/x, so this cannot be tiny.
pub const DEFAULT_EDGE_LIMIT: f64 = 1e-2;
/// Amplitude level at which Gaussian time tails are cut when sizing the window.
const TIME_TAIL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BridgeOptions {
    pub edge_limit: f64,
}

impl Default for BridgeOptions {
    fn default() -> Self {
        Self {
            edge_limit: DEFAULT_EDGE_LIMIT,
        }
    }
}

/// Square frequency axes whose transform lands on a (t+, t-) window holding the
/// wavefunction, with D L an even multiple of the t- step so the support edges fall
/// between nodes.
pub fn bridge_axes(
    disp: &DispersionSummary,
    pump: &PumpSpec,
    filters: &[FilterSpec],
    nodes: usize,
) -> Result<FreqAxes> {
    if pump.is_cw() {
        return Err(Error::InvalidParameter("the Fourier bridge needs a pulsed pump".into()));
    }
    let r = disp.ridge_slope()?;
    let dl = disp.dl.abs();
    let cut = TIME_TAIL.recip().ln().sqrt();
    let ridge = 2.0 / pump.sigma() * cut;
    let filter = filters.iter().map(|f| f.time_halfwidth()).fold(0.0, f64::max) * cut;
    let spread = (r - 0.5).abs().max((r + 0.5).abs()) * dl;
    let window = (spread + 2.0 * ridge + 2.0 * filter).max(1.25 * dl + 4.0 * filter);
    let half_steps = (dl / (2.0 * window / nodes as f64)).floor();
    if half_steps < 1.0 {
        return Err(Error::InvalidGrid(format!(
            "{nodes} nodes cannot resolve a {dl:.1} fs walk-off in a {window:.1} fs window"
        )));
    }
    let h = dl / (2.0 * half_steps);
    let d_omega = 2.0 * PI / (nodes as f64 * h);
    let axis = Axis::centered(0.5 * pump.omega(), d_omega, nodes)?;
    Ok(FreqAxes::new(axis, axis))
}

fn fft2(data: &mut [Complex64], n: usize, planner: &mut FftPlanner<f64>) {
    let fft = planner.plan_fft_forward(n);
    fft.process(data);
    let mut t = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = data[i * n + j];
        }
    }
    fft.process(&mut t);
    for i in 0..n {
        for j in 0..n {
            data[j * n + i] = t[i * n + j];
        }
    }
}

/// Largest |f| on the grid boundary relative to the largest |f| overall.
pub fn edge_fraction(values: &Array2<Complex64>) -> f64 {
    let (r, c) = values.dim();
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    let mut edge: f64 = 0.0;
    for i in 0..r {
        edge = edge.max(values[[i, 0]].norm()).max(values[[i, c - 1]].norm());
    }
    for j in 0..c {
        edge = edge.max(values[[0, j]].norm()).max(values[[r - 1, j]].norm());
    }
    edge / max
}

/// Two-dimensional Fourier transform of f(w_e, w_o) exp(-i Delta L / 2) to (t+, t-),
/// with t+ = (t_e + t_o)/2 and t- = t_o - t_e:
///
///   psi(t_e, t_o) = (1 / 2 pi) \int\int f e^{-i Delta L / 2} e^{-i (w_e t_e + w_o t_o)} dw_e dw_o.
///
/// The transform is unitary. The output holds N t- nodes with step h = 2 pi / (N dw),
/// centered on D L / 2, and 2N t+ nodes with step h/2 centered on the ridge midpoint.
pub fn time_domain_wavefunction(jsa: &FreqGrid, options: &BridgeOptions) -> Result<TimeGrid> {
    let n = jsa.omega_e.len;
    let dw = jsa.omega_e.step;
    if !jsa.dims_ok() || jsa.omega_o.len != n || (jsa.omega_o.step - dw).abs() > 1e-12 * dw {
        return Err(Error::InvalidGrid(
            "the Fourier bridge needs square axes with equal frequency steps".into(),
        ));
    }
    let edge = edge_fraction(&jsa.values);
    if edge > options.edge_limit {
        return Err(Error::EdgeLeakage {
            edge,
            limit: options.edge_limit,
        });
    }
    let disp = jsa.meta.dispersion;
    let r = disp.ridge_slope()?;
    let h = 2.0 * PI / (n as f64 * dw);
    let m0 = (disp.dl / (2.0 * h)).round();
    let t_minus = Axis::new((0.5 - 0.5 * n as f64 + m0) * h, h, n)?;
    let t_plus = Axis::new(0.5 * r * disp.dl - 0.5 * n as f64 * h, 0.5 * h, 2 * n)?;

    let (we0, wo0) = (jsa.omega_e.start, jsa.omega_o.start);
    let ce0 = t_plus.start - 0.5 * t_minus.start;
    let co0 = t_plus.start + 0.5 * t_minus.start;
    let mut planner = FftPlanner::new();
    let lattices: Vec<Vec<Complex64>> = (0..2)
        .map(|l| {
            let shift = 0.5 * h * l as f64;
            let (ce, co) = (ce0 + shift, co0 + shift);
            let mut buf = Vec::with_capacity(n * n);
            for m in 0..n {
                for k in 0..n {
                    let phase = -jsa.half_mismatch[[m, k]] - dw * (m as f64 * ce + k as f64 * co);
                    buf.push(jsa.values[[m, k]] * Complex64::from_polar(1.0, phase));
                }
            }
            fft2(&mut buf, n, &mut planner);
            buf
        })
        .collect();

    let scale = dw * dw / (2.0 * PI);
    let ni = n as i64;
    let values = Array2::from_shape_fn((2 * n, n), |(p, q)| {
        let (p, q) = (p as i64, q as i64);
        let par = (p + q).rem_euclid(2);
        let i = (p - q - par) / 2;
        let j = (p + q - par) / 2;
        let te = t_plus.value(p as usize) - 0.5 * t_minus.value(q as usize);
        let to = t_plus.value(p as usize) + 0.5 * t_minus.value(q as usize);
        let carrier = Complex64::from_polar(scale, -(we0 * te + wo0 * to));
        carrier * lattices[par as usize][(i.rem_euclid(ni) * ni + j.rem_euclid(ni)) as usize]
    });

    let mut meta = TimeGridMeta::new(AmplitudeKind::FromSpectrum);
    meta.dispersion = Some(disp);
    meta.pump = Some(jsa.meta.pump);
    meta.warnings = jsa.meta.warnings.clone();
    meta.warnings.push(format!("spectral edge fraction {edge:.3e}"));
    TimeGrid::new(t_plus, t_minus, values, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{dispersion_params, CrystalSpec};
    use crate::grid::MismatchMode;
    use crate::spectral::{joint_spectral_amplitude, FilterTarget};
    use crate::temporal::pi_wavefunction;

    fn setup(len: f64, duration: f64) -> (CrystalSpec, PumpSpec, DispersionSummary) {
        let crystal = CrystalSpec::bbo(len).unwrap();
        let pump = PumpSpec::from_duration_fs(0.4, duration).unwrap();
        let disp = dispersion_params(&crystal, &pump).unwrap();
        (crystal, pump, disp)
    }

    fn bridged(len: f64, duration: f64, filters: &[FilterSpec], n: usize) -> (TimeGrid, FreqGrid) {
        let (crystal, pump, disp) = setup(len, duration);
        let axes = bridge_axes(&disp, &pump, filters, n).unwrap();
        let jsa = joint_spectral_amplitude(&axes, &crystal, &pump, &disp, MismatchMode::Linear, filters).unwrap();
        (time_domain_wavefunction(&jsa, &BridgeOptions::default()).unwrap(), jsa)
    }

    #[test]
    fn edges_fall_between_t_minus_nodes() {
        let (_, pump, disp) = setup(2000.0, 100.0);
        let axes = bridge_axes(&disp, &pump, &[], 256).unwrap();
        let h = 2.0 * PI / (256.0 * axes.omega_e.step);
        let ratio = disp.dl / h;
        assert!((ratio - ratio.round()).abs() < 1e-9 && ratio.round() as i64 % 2 == 0);
    }

    #[test]
    fn parseval() {
        let (psi, jsa) = bridged(2000.0, 100.0, &[], 256);
        let freq: f64 = jsa.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * jsa.omega_e.step * jsa.omega_o.step;
        let time: f64 = psi.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * psi.t_plus.step * psi.t_minus.step;
        assert!((time / freq - 1.0).abs() < 1e-9, "{time} vs {freq}");
    }

    #[test]
    fn matches_analytic_wavefunction() {
        let (_, pump, disp) = setup(2000.0, 100.0);
        let (psi, _) = bridged(2000.0, 100.0, &[], 512);
        let kappa = PI.sqrt() * pump.sigma() / disp.dl.abs();
        let (mut num, mut den) = (0.0, 0.0);
        for p in 0..psi.t_plus.len {
            for q in 0..psi.t_minus.len {
                let a = kappa * pi_wavefunction(psi.t_plus.value(p), psi.t_minus.value(q), &disp, &pump).unwrap();
                num += (psi.values[[p, q]] - a).norm_sqr();
                den += a.norm_sqr();
            }
        }
        let err = (num / den).sqrt();
        assert!(err < 1e-2, "relative L2 error {err}");
    }

    #[test]
    fn filters_stretch_t_minus() {
        let f = FilterSpec::gaussian(0.8, 5.0, FilterTarget::Both).unwrap();
        let n = 256;
        let (plain, _) = bridged(2000.0, 100.0, &[], n);
        let (filtered, _) = bridged(2000.0, 100.0, &[f], n);
        assert!(filtered.t_minus_rms_width() > 1.05 * plain.t_minus_rms_width());
    }

    #[test]
    fn leakage_and_shape_errors() {
        let (crystal, pump, disp) = setup(2000.0, 100.0);
        let axes = FreqAxes::around(0.5 * pump.omega(), 0.02, 64).unwrap();
        let jsa = joint_spectral_amplitude(&axes, &crystal, &pump, &disp, MismatchMode::Linear, &[]).unwrap();
        let err = time_domain_wavefunction(&jsa, &BridgeOptions::default()).unwrap_err();
        assert!(matches!(err, Error::EdgeLeakage { .. }));
        let relaxed = BridgeOptions { edge_limit: 1.0 };
        assert!(time_domain_wavefunction(&jsa, &relaxed).is_ok());
        let rect = FreqAxes::new(
            axes.omega_e,
            Axis::new(axes.omega_o.start, axes.omega_o.step, 32).unwrap(),
        );
        let jsa = joint_spectral_amplitude(&rect, &crystal, &pump, &disp, MismatchMode::Linear, &[]).unwrap();
        assert!(matches!(
            time_domain_wavefunction(&jsa, &relaxed),
            Err(Error::InvalidGrid(_))
        ));
    }
}
