use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{FreqGrid, SpectrumGrid};

use super::jsa::joint_spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Anticorrelated,
    Correlated,
    Uncorrelated,
}

/// rho <= anticorrelated => anticorrelated, rho >= correlated => correlated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationThresholds {
    pub anticorrelated: f64,
    pub correlated: f64,
}

impl Default for CorrelationThresholds {
    fn default() -> Self {
        Self {
            anticorrelated: -0.15,
            correlated: 0.15,
        }
    }
}

impl CorrelationThresholds {
    pub fn classify(&self, rho: f64) -> Classification {
        if rho <= self.anticorrelated {
            Classification::Anticorrelated
        } else if rho >= self.correlated {
            Classification::Correlated
        } else {
            Classification::Uncorrelated
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDiagnostics {
    /// Density over w_o (o-ray), integrating to 1.
    pub marginal_signal: Vec<f64>,
    /// Density over w_e (e-ray), integrating to 1.
    pub marginal_idler: Vec<f64>,
    pub pearson_rho: f64,
    pub schmidt_number: f64,
    pub classification: Classification,
    /// RMS widths of the marginals, rad/fs.
    pub signal_rms_width: f64,
    pub idler_rms_width: f64,
}

struct Moments {
    marginal_e: Vec<f64>,
    marginal_o: Vec<f64>,
    rho: f64,
    sd_e: f64,
    sd_o: f64,
}

fn moments(s: &SpectrumGrid) -> Result<Moments> {
    let we = s.omega_e.weights();
    let wo = s.omega_o.weights();
    let total = s.integral();
    if !(total > 0.0) || s.values.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidGrid(
            "joint spectrum must be nonnegative with positive integral".into(),
        ));
    }
    let (ne, no) = s.values.dim();
    let mut marginal_e = vec![0.0; ne];
    let mut marginal_o = vec![0.0; no];
    for i in 0..ne {
        for j in 0..no {
            let v = s.values[[i, j]] / total;
            marginal_e[i] += v * wo[j];
            marginal_o[j] += v * we[i];
        }
    }
    let mean = |m: &[f64], w: &[f64], axis: &crate::grid::Axis| -> f64 {
        m.iter()
            .zip(w)
            .enumerate()
            .map(|(k, (p, w))| p * w * axis.value(k))
            .sum()
    };
    let mu_e = mean(&marginal_e, &we, &s.omega_e);
    let mu_o = mean(&marginal_o, &wo, &s.omega_o);
    let var = |m: &[f64], w: &[f64], axis: &crate::grid::Axis, mu: f64| -> f64 {
        m.iter()
            .zip(w)
            .enumerate()
            .map(|(k, (p, w))| p * w * (axis.value(k) - mu).powi(2))
            .sum()
    };
    let var_e = var(&marginal_e, &we, &s.omega_e, mu_e);
    let var_o = var(&marginal_o, &wo, &s.omega_o, mu_o);
    let mut cov = 0.0;
    for i in 0..ne {
        let de = s.omega_e.value(i) - mu_e;
        let row: f64 = (0..no)
            .map(|j| s.values[[i, j]] * wo[j] * (s.omega_o.value(j) - mu_o))
            .sum();
        cov += we[i] * de * row / total;
    }
    let rho = if var_e > 0.0 && var_o > 0.0 {
        (cov / (var_e * var_o).sqrt()).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    Ok(Moments {
        marginal_e,
        marginal_o,
        rho,
        sd_e: var_e.sqrt(),
        sd_o: var_o.sqrt(),
    })
}

/// K = (sum s_i^2)^2 / sum s_i^4 from the singular values of the amplitude array.
pub fn schmidt_number(values: &Array2<Complex64>) -> Result<f64> {
    let (r, c) = values.dim();
    let m = DMatrix::from_fn(r, c, |i, j| values[[i, j]]);
    let sv = m.singular_values();
    let p: Vec<f64> = sv.iter().map(|s| s * s).collect();
    let total: f64 = p.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidGrid(
            "joint spectral amplitude is identically zero".into(),
        ));
    }
    let purity: f64 = p.iter().map(|x| (x / total).powi(2)).sum();
    Ok(1.0 / purity)
}

/// Marginals, Pearson correlation of the joint spectrum, and the Schmidt number of the amplitude.
pub fn spectral_diagnostics(jsa: &FreqGrid, thresholds: &CorrelationThresholds) -> Result<SpectralDiagnostics> {
    let s = joint_spectrum(jsa, true)?;
    let m = moments(&s)?;
    Ok(SpectralDiagnostics {
        marginal_signal: m.marginal_o,
        marginal_idler: m.marginal_e,
        pearson_rho: m.rho,
        schmidt_number: schmidt_number(&jsa.values)?,
        classification: thresholds.classify(m.rho),
        signal_rms_width: m.sd_o,
        idler_rms_width: m.sd_e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{dispersion_params, find_symmetric_pump_wavelength, CrystalSpec, PumpSpec};
    use crate::grid::MismatchMode;
    use crate::spectral::{joint_spectral_amplitude, FreqAxes};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// K via the Gram identity tr(G)^2 / tr(G^2) with G = f^H f.
    fn gram_schmidt_number(f: &Array2<Complex64>) -> f64 {
        let (r, c) = f.dim();
        let mut g = vec![Complex64::new(0.0, 0.0); c * c];
        for a in 0..c {
            for b in 0..c {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..r {
                    s += f[[i, a]].conj() * f[[i, b]];
                }
                g[a * c + b] = s;
            }
        }
        let tr: f64 = (0..c).map(|a| g[a * c + a].re).sum();
        let tr2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        tr * tr / tr2
    }

    fn random_jsa(seed: u64, r: usize, c: usize) -> Array2<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_fn((r, c), |_| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    #[test]
    fn schmidt_matches_gram_identity() {
        for seed in 0..4 {
            let f = random_jsa(seed, 24, 17);
            let k = schmidt_number(&f).unwrap();
            let oracle = gram_schmidt_number(&f);
            assert!((k - oracle).abs() < 1e-9 * oracle, "{k} vs {oracle}");
        }
    }

    #[test]
    fn factorable_amplitude_has_unit_schmidt_number() {
        let f = Array2::from_shape_fn((64, 48), |(i, j)| {
            let a = (-((i as f64 - 30.0) / 7.0).powi(2)).exp();
            let b = (-((j as f64 - 20.0) / 5.0).powi(2)).exp();
            Complex64::from_polar(a * b, 0.01 * i as f64)
        });
        assert!((schmidt_number(&f).unwrap() - 1.0).abs() < 1e-6);
        let t = f.t().to_owned();
        assert!((schmidt_number(&t).unwrap() - schmidt_number(&f).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn zero_amplitude_is_an_error() {
        assert!(schmidt_number(&Array2::zeros((4, 4))).is_err());
    }

    #[test]
    fn classification_thresholds() {
        let t = CorrelationThresholds::default();
        assert_eq!(t.classify(-0.5), Classification::Anticorrelated);
        assert_eq!(t.classify(-0.15), Classification::Anticorrelated);
        assert_eq!(t.classify(0.0), Classification::Uncorrelated);
        assert_eq!(t.classify(0.15), Classification::Correlated);
    }

    fn diag(len: f64, lambda: f64, nm: f64, nodes: usize) -> SpectralDiagnostics {
        let crystal = CrystalSpec::bbo(len).unwrap();
        let pump = PumpSpec::from_bandwidth_nm(lambda, nm).unwrap();
        let disp = dispersion_params(&crystal, &pump).unwrap();
        let axes = FreqAxes::auto(&disp, &pump, nodes).unwrap();
        let g = joint_spectral_amplitude(&axes, &crystal, &pump, &disp, MismatchMode::Linear, &[]).unwrap();
        spectral_diagnostics(&g, &CorrelationThresholds::default()).unwrap()
    }

    #[test]
    fn marginals_are_densities() {
        let d = diag(2000.0, 0.4, 2.0, 128);
        let crystal = CrystalSpec::bbo(2000.0).unwrap();
        let pump = PumpSpec::from_bandwidth_nm(0.4, 2.0).unwrap();
        let disp = dispersion_params(&crystal, &pump).unwrap();
        let axes = FreqAxes::auto(&disp, &pump, 128).unwrap();
        let integ = crate::quadrature::trapezoid(&d.marginal_signal, axes.omega_o.step);
        assert!((integ - 1.0).abs() < 1e-12);
        let integ = crate::quadrature::trapezoid(&d.marginal_idler, axes.omega_e.step);
        assert!((integ - 1.0).abs() < 1e-12);
        assert!(d.marginal_signal.iter().chain(&d.marginal_idler).all(|v| *v >= 0.0));
        assert!(d.schmidt_number >= 1.0 - 1e-9);
    }

    #[test]
    fn narrowband_pump_is_anticorrelated() {
        let d = diag(2000.0, 0.4, 2.0, 256);
        assert!(d.pearson_rho < -0.5, "{}", d.pearson_rho);
        assert_eq!(d.classification, Classification::Anticorrelated);
        // the o-ray carries the broader marginal for this polarization assignment
        assert!(d.signal_rms_width > d.idler_rms_width);
    }

    #[test]
    fn correlation_ladders_at_symmetric_point() {
        let crystal = CrystalSpec::bbo(1000.0).unwrap();
        let lambda = find_symmetric_pump_wavelength(&crystal, (0.6, 0.9)).unwrap();
        // longer crystals push rho up at fixed broad pump
        let rhos: Vec<f64> = [2000.0, 6000.0, 12000.0]
            .iter()
            .map(|l| diag(*l, lambda, 20.0, 256).pearson_rho)
            .collect();
        assert!(rhos[0] < rhos[1] && rhos[1] < rhos[2], "{rhos:?}");
        // narrower pumps pull rho toward -1
        let rhos: Vec<f64> = [10.0, 3.0, 1.0]
            .iter()
            .map(|nm| diag(2000.0, lambda, *nm, 256).pearson_rho)
            .collect();
        assert!(rhos[0] > rhos[1] && rhos[1] > rhos[2], "{rhos:?}");
    }
}
