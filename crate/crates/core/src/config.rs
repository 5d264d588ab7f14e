//! Run configuration: a JSON document, validated and resolved into library types.
//!
//! Wavelengths are given in nm and angles in degrees; everything is converted to
//! internal units by [`RunConfig::resolve`]. Unknown keys are rejected.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dispersion::{
    dispersion_params, find_symmetric_pump_wavelength, CrystalSpec, DispersionSummary, PumpSpec, Sellmeier,
};
use crate::error::{Error, Result};
use crate::grid::{Axis, MismatchMode};
use crate::spectral::{CorrelationThresholds, FilterShape, FilterSpec, FilterTarget, FreqAxes};
use crate::temporal::{default_tau_scan, tau_samples, AnalyzerSettings, Setup, TimeAxes};
use crate::units::{
    nm_to_um, omega_width_from_wavelength_width, pump_sigma_from_duration_fs, sigma_from_intensity_fwhm,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keyword {
    Auto,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutoOr {
    Value(f64),
    Keyword(Keyword),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SellmeierConfig {
    pub ordinary: Sellmeier,
    pub extraordinary: Sellmeier,
    pub window_nm: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrystalConfig {
    pub name: String,
    /// Explicit coefficients; `name` is then only a label.
    pub sellmeier: Option<SellmeierConfig>,
    /// Degrees, or "auto" to solve for collinear degenerate phase matching.
    pub cut_angle_deg: AutoOr,
    pub length_um: f64,
}

impl Default for CrystalConfig {
    fn default() -> Self {
        Self {
            name: "BBO".into(),
            sellmeier: None,
            cut_angle_deg: AutoOr::Keyword(Keyword::Auto),
            length_um: 2000.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandwidthUnit {
    #[serde(rename = "nm")]
    Nm,
    #[serde(rename = "fs")]
    Fs,
    #[serde(rename = "rad/fs")]
    RadPerFs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandwidthConvention {
    /// Intensity FWHM: a spectral width, or a pulse duration when the unit is fs.
    IntensityFwhm,
    /// Amplitude 1/e half-width of exp(-x^2/sigma^2).
    Sigma,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandwidthConfig {
    pub value: f64,
    pub unit: BandwidthUnit,
    #[serde(default = "default_convention")]
    pub convention: BandwidthConvention,
}

fn default_convention() -> BandwidthConvention {
    BandwidthConvention::IntensityFwhm
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PumpConfig {
    /// nm, or "symmetric" for the wavelength where D+ vanishes.
    pub center_nm: AutoOr,
    pub bandwidth: Option<BandwidthConfig>,
    pub cw: bool,
}

impl Default for PumpConfig {
    fn default() -> Self {
        Self {
            center_nm: AutoOr::Value(400.0),
            bandwidth: Some(BandwidthConfig {
                value: 2.0,
                unit: BandwidthUnit::Nm,
                convention: BandwidthConvention::IntensityFwhm,
            }),
            cw: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub from_fs: f64,
    pub to_fs: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyzerConfig {
    pub theta1_deg: f64,
    pub theta2_deg: f64,
    pub tau_fs: f64,
    pub scan: Option<ScanConfig>,
}

impl Default for AnalyzerConfig {
    fn default() -> Self {
        Self {
            theta1_deg: 45.0,
            theta2_deg: 45.0,
            tau_fs: 0.0,
            scan: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    pub shape: FilterShape,
    pub center_nm: f64,
    #[serde(default)]
    pub bandwidth_nm: f64,
    pub applies_to: FilterTarget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub time_nodes: usize,
    pub freq_nodes: usize,
    pub t_plus_half_span_fs: Option<f64>,
    pub t_minus_half_span_fs: Option<f64>,
    /// rad/fs around the degenerate frequency.
    pub freq_half_span: Option<f64>,
    pub edge_limit: f64,
    pub symmetric_search_nm: [f64; 2],
    pub thresholds: CorrelationThresholds,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            time_nodes: crate::temporal::DEFAULT_NODES,
            freq_nodes: crate::spectral::DEFAULT_FREQ_NODES,
            t_plus_half_span_fs: None,
            t_minus_half_span_fs: None,
            freq_half_span: None,
            edge_limit: crate::spectral::DEFAULT_EDGE_LIMIT,
            symmetric_search_nm: [600.0, 900.0],
            thresholds: CorrelationThresholds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub crystal: CrystalConfig,
    pub pump: PumpConfig,
    pub analyzers: AnalyzerConfig,
    pub filters: Vec<FilterConfig>,
    pub grid: GridConfig,
    pub mismatch: MismatchMode,
    pub setup: Setup,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            crystal: CrystalConfig::default(),
            pump: PumpConfig::default(),
            analyzers: AnalyzerConfig::default(),
            filters: Vec::new(),
            grid: GridConfig::default(),
            mismatch: MismatchMode::Linear,
            setup: Setup::Synthesizer,
            output: None,
        }
    }
}

/// A validated configuration in internal units.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub crystal: CrystalSpec,
    pub pump: PumpSpec,
    pub analyzers: AnalyzerSettings,
    pub taus: Option<Vec<f64>>,
    pub filters: Vec<FilterSpec>,
    pub grid: GridConfig,
    pub mismatch: MismatchMode,
    pub setup: Setup,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("{name} must be finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Schema-level checks that need no physics.
    pub fn validate(&self) -> Result<()> {
        let c = &self.crystal;
        if !(finite("crystal.length_um", c.length_um)? > 0.0) {
            return Err(invalid(format!(
                "crystal.length_um must be positive, got {}",
                c.length_um
            )));
        }
        if let AutoOr::Value(a) = c.cut_angle_deg {
            if !(finite("crystal.cut_angle_deg", a)? > 0.0 && a < 90.0) {
                return Err(invalid(format!("crystal.cut_angle_deg must lie in (0, 90), got {a}")));
            }
        }
        if c.cut_angle_deg == AutoOr::Keyword(Keyword::Symmetric) {
            return Err(invalid("crystal.cut_angle_deg must be a number or \"auto\""));
        }
        if c.sellmeier.is_none() && CrystalSpec::builtin(&c.name, 1.0).is_err() {
            return Err(invalid(format!(
                "unknown crystal {:?}; built-in crystals: {:?}",
                c.name,
                CrystalSpec::builtin_names()
            )));
        }
        match self.pump.center_nm {
            AutoOr::Value(v) if !(finite("pump.center_nm", v)? > 0.0) => {
                return Err(invalid(format!("pump.center_nm must be positive, got {v}")))
            }
            AutoOr::Keyword(Keyword::Auto) => return Err(invalid("pump.center_nm must be a number or \"symmetric\"")),
            _ => {}
        }
        match (&self.pump.bandwidth, self.pump.cw) {
            (None, false) => return Err(invalid("a pulsed pump needs pump.bandwidth")),
            (Some(b), _) => {
                if !(finite("pump.bandwidth.value", b.value)? > 0.0) {
                    return Err(invalid(format!(
                        "pump.bandwidth.value must be positive, got {}",
                        b.value
                    )));
                }
                if b.unit == BandwidthUnit::Fs && b.convention == BandwidthConvention::Sigma {
                    return Err(invalid("pump.bandwidth in fs must use the intensity-fwhm convention"));
                }
            }
            _ => {}
        }
        let a = &self.analyzers;
        finite("analyzers.theta1_deg", a.theta1_deg)?;
        finite("analyzers.theta2_deg", a.theta2_deg)?;
        finite("analyzers.tau_fs", a.tau_fs)?;
        if let Some(s) = a.scan {
            finite("analyzers.scan.from_fs", s.from_fs)?;
            finite("analyzers.scan.to_fs", s.to_fs)?;
            if s.samples == 0 {
                return Err(invalid("analyzers.scan.samples must be at least 1"));
            }
        }
        for f in &self.filters {
            if !(f.center_nm > 0.0) || (f.shape != FilterShape::None && !(f.bandwidth_nm > 0.0)) {
                return Err(invalid(format!(
                    "filter needs positive center_nm and bandwidth_nm, got {} / {}",
                    f.center_nm, f.bandwidth_nm
                )));
            }
        }
        let g = &self.grid;
        if g.time_nodes < 2 || g.freq_nodes < 2 {
            return Err(invalid("grid node counts must be at least 2"));
        }
        for (name, v) in [
            ("grid.t_plus_half_span_fs", g.t_plus_half_span_fs),
            ("grid.t_minus_half_span_fs", g.t_minus_half_span_fs),
            ("grid.freq_half_span", g.freq_half_span),
        ] {
            if let Some(v) = v {
                if !(finite(name, v)? > 0.0) {
                    return Err(invalid(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if !(g.edge_limit > 0.0) {
            return Err(invalid("grid.edge_limit must be positive"));
        }
        if !(g.symmetric_search_nm[0] > 0.0 && g.symmetric_search_nm[1] > g.symmetric_search_nm[0]) {
            return Err(invalid("grid.symmetric_search_nm must be an increasing positive pair"));
        }
        if !(g.thresholds.anticorrelated < g.thresholds.correlated) {
            return Err(invalid(
                "grid.thresholds.anticorrelated must be below grid.thresholds.correlated",
            ));
        }
        Ok(())
    }

    pub fn crystal_spec(&self) -> Result<CrystalSpec> {
        let c = &self.crystal;
        let spec = match &c.sellmeier {
            Some(s) => CrystalSpec::new(
                &c.name,
                s.ordinary,
                s.extraordinary,
                (nm_to_um(s.window_nm[0]), nm_to_um(s.window_nm[1])),
                None,
                c.length_um,
            )?,
            None => CrystalSpec::builtin(&c.name, c.length_um)?,
        };
        match c.cut_angle_deg {
            AutoOr::Value(deg) => spec.with_cut_angle(Some(deg.to_radians())),
            AutoOr::Keyword(_) => Ok(spec),
        }
    }

    /// Pump center in um; "symmetric" runs the D+ = 0 search.
    pub fn pump_center_um(&self, crystal: &CrystalSpec) -> Result<f64> {
        match self.pump.center_nm {
            AutoOr::Value(nm) => Ok(nm_to_um(nm)),
            AutoOr::Keyword(_) => {
                let [lo, hi] = self.grid.symmetric_search_nm;
                find_symmetric_pump_wavelength(crystal, (nm_to_um(lo), nm_to_um(hi)))
            }
        }
    }

    pub fn pump_spec(&self, crystal: &CrystalSpec) -> Result<PumpSpec> {
        let center = self.pump_center_um(crystal)?;
        if self.pump.cw {
            return PumpSpec::cw(center);
        }
        let b = self
            .pump
            .bandwidth
            .ok_or_else(|| invalid("a pulsed pump needs pump.bandwidth"))?;
        let sigma = match (b.unit, b.convention) {
            (BandwidthUnit::Nm, BandwidthConvention::IntensityFwhm) => {
                sigma_from_intensity_fwhm(omega_width_from_wavelength_width(center, nm_to_um(b.value)))
            }
            (BandwidthUnit::Nm, BandwidthConvention::Sigma) => {
                omega_width_from_wavelength_width(center, nm_to_um(b.value))
            }
            (BandwidthUnit::Fs, _) => pump_sigma_from_duration_fs(b.value),
            (BandwidthUnit::RadPerFs, BandwidthConvention::IntensityFwhm) => sigma_from_intensity_fwhm(b.value),
            (BandwidthUnit::RadPerFs, BandwidthConvention::Sigma) => b.value,
        };
        PumpSpec::pulsed(center, sigma)
    }

    pub fn filter_specs(&self) -> Result<Vec<FilterSpec>> {
        self.filters
            .iter()
            .map(|f| FilterSpec::new(f.shape, nm_to_um(f.center_nm), f.bandwidth_nm, f.applies_to))
            .collect()
    }

    pub fn resolve(&self) -> Result<Resolved> {
        self.validate()?;
        let crystal = self.crystal_spec()?;
        let pump = self.pump_spec(&crystal)?;
        let a = &self.analyzers;
        Ok(Resolved {
            crystal,
            pump,
            analyzers: AnalyzerSettings::from_degrees(a.theta1_deg, a.theta2_deg, a.tau_fs),
            taus: a.scan.map(|s| tau_samples(s.from_fs, s.to_fs, s.samples)),
            filters: self.filter_specs()?,
            grid: self.grid.clone(),
            mismatch: self.mismatch,
            setup: self.setup,
        })
    }
}

impl Resolved {
    pub fn dispersion(&self) -> Result<DispersionSummary> {
        dispersion_params(&self.crystal, &self.pump)
    }

    /// Automatic time axes, with any explicit half-spans from the grid section applied.
    pub fn time_axes(&self, disp: &DispersionSummary, tau_max: f64) -> Result<TimeAxes> {
        let n = self.grid.time_nodes;
        let auto = TimeAxes::auto(disp, &self.pump, tau_max, n)?;
        let t_plus = match self.grid.t_plus_half_span_fs {
            Some(h) => Axis::spanning(-h, h, n)?,
            None => auto.t_plus,
        };
        let t_minus = match self.grid.t_minus_half_span_fs {
            Some(h) => Axis::spanning(-h, h, n)?,
            None => auto.t_minus,
        };
        Ok(TimeAxes::new(t_plus, t_minus))
    }

    pub fn freq_axes(&self, disp: &DispersionSummary) -> Result<FreqAxes> {
        match self.grid.freq_half_span {
            Some(h) => FreqAxes::around(0.5 * self.pump.omega(), h, self.grid.freq_nodes),
            None => FreqAxes::auto(disp, &self.pump, self.grid.freq_nodes),
        }
    }

    /// Scan delays from the config, or the setup's default scan.
    pub fn scan_taus(&self, disp: &DispersionSummary, samples: usize) -> Vec<f64> {
        self.taus
            .clone()
            .unwrap_or_else(|| default_tau_scan(self.setup, disp, samples))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let r = RunConfig::default().resolve().unwrap();
        assert_eq!(r.crystal.name(), "BBO");
        assert!((r.pump.center_wavelength_um() - 0.4).abs() < 1e-15);
        assert!(r.taus.is_none());
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = RunConfig::from_json(r#"{"crystal": {"lenght_um": 3}}"#).unwrap_err();
        assert!(matches!(err, Error::Json(_)));
        assert!(RunConfig::from_json(r#"{"extra": 1}"#).is_err());
    }

    #[test]
    fn negative_length_rejected() {
        let err = RunConfig::from_json(r#"{"crystal": {"length_um": -5}}"#).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn keywords_parse() {
        let cfg = RunConfig::from_json(
            r#"{"crystal": {"cut_angle_deg": "auto"}, "pump": {"center_nm": "symmetric",
                "bandwidth": {"value": 8, "unit": "nm"}}}"#,
        )
        .unwrap();
        let r = cfg.resolve().unwrap();
        assert!((r.pump.center_wavelength_um() - 0.757).abs() < 0.01);
        assert!(RunConfig::from_json(r#"{"crystal": {"cut_angle_deg": "symmetric"}}"#).is_err());
    }

    #[test]
    fn bandwidth_conventions() {
        let cfg = |unit: &str, conv: &str, v: f64| {
            let text = format!(
                r#"{{"pump": {{"center_nm": 400, "bandwidth": {{"value": {v}, "unit": "{unit}", "convention": "{conv}"}}}}}}"#
            );
            RunConfig::from_json(&text)
                .and_then(|c| c.resolve())
                .map(|r| r.pump.sigma())
        };
        let nm = cfg("nm", "intensity-fwhm", 2.0).unwrap();
        assert!((nm - crate::units::pump_sigma_from_bandwidth_nm(0.4, 2.0)).abs() < 1e-15);
        let fs = cfg("fs", "intensity-fwhm", 100.0).unwrap();
        assert!((fs - pump_sigma_from_duration_fs(100.0)).abs() < 1e-15);
        assert_eq!(cfg("rad/fs", "sigma", 0.03).unwrap(), 0.03);
        assert!(cfg("fs", "sigma", 100.0).is_err());
    }

    #[test]
    fn roundtrip_json() {
        let mut cfg = RunConfig::default();
        cfg.filters.push(FilterConfig {
            shape: FilterShape::Gaussian,
            center_nm: 800.0,
            bandwidth_nm: 5.0,
            applies_to: FilterTarget::Both,
        });
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }
}
