//! Uniaxial crystal optics for collinear degenerate type-II down-conversion.
//!
//! Pump and idler travel as e-rays, the signal as an o-ray. Group velocities come
//! from analytic differentiation of the Sellmeier form; the walk-off parameters
//!
//! ```text
//! D+ = (1/u_o + 1/u_e) / 2 - 1/u_p
//! D  =  1/u_o - 1/u_e
//! ```
//!
//! are evaluated at the degenerate point, signal and idler at twice the pump wavelength.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::Bisection;
use crate::units::{omega_from_wavelength, C_UM_PER_FS};

/// |mismatch| tolerance of the phase-matching solve, rad/um.
pub const PHASE_MATCH_TOL: f64 = 1e-9;
/// |D+| tolerance of the symmetric-wavelength solve, fs/um.
pub const SYMMETRIC_TOL: f64 = 1e-8;
const MAX_BISECTIONS: usize = 200;

/// `n^2 = a + b / (lambda^2 - c) - d lambda^2`, lambda in micrometers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sellmeier {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sellmeier {
    pub const BBO_ORDINARY: Sellmeier = Sellmeier {
        a: 2.7359,
        b: 0.01878,
        c: 0.01822,
        d: 0.01354,
    };
    pub const BBO_EXTRAORDINARY: Sellmeier = Sellmeier {
        a: 2.3753,
        b: 0.01224,
        c: 0.01667,
        d: 0.01516,
    };

    /// Dispersionless medium with constant index `n`.
    pub const fn constant(n: f64) -> Sellmeier {
        Sellmeier {
            a: n * n,
            b: 0.0,
            c: 0.0,
            d: 0.0,
        }
    }

    pub fn index_squared(&self, wavelength: f64) -> f64 {
        let l2 = wavelength * wavelength;
        self.a + self.b / (l2 - self.c) - self.d * l2
    }

    pub fn index(&self, wavelength: f64) -> f64 {
        self.index_squared(wavelength).sqrt()
    }

    /// dn/dlambda, per micrometer.
    pub fn index_derivative(&self, wavelength: f64) -> f64 {
        let l2 = wavelength * wavelength;
        let pole = l2 - self.c;
        let dn2 = -2.0 * self.b * wavelength / (pole * pole) - 2.0 * self.d * wavelength;
        dn2 / (2.0 * self.index(wavelength))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    Ordinary,
    Extraordinary,
}

/// A uniaxial nonlinear crystal. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrystalSpec {
    name: String,
    sellmeier_o: Sellmeier,
    sellmeier_e: Sellmeier,
    window: (f64, f64),
    cut_angle: Option<f64>,
    length_um: f64,
}

impl CrystalSpec {
    pub fn new(
        name: impl Into<String>,
        sellmeier_o: Sellmeier,
        sellmeier_e: Sellmeier,
        window: (f64, f64),
        cut_angle: Option<f64>,
        length_um: f64,
    ) -> Result<Self> {
        let name = name.into();
        if !(length_um.is_finite() && length_um > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "crystal length must be positive, got {length_um} um"
            )));
        }
        let (lo, hi) = window;
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "transparency window [{lo}, {hi}] um is not a valid interval"
            )));
        }
        if let Some(theta) = cut_angle {
            if !(theta > 0.0 && theta < FRAC_PI_2) {
                return Err(Error::InvalidParameter(format!(
                    "cut angle {theta} rad outside (0, pi/2)"
                )));
            }
        }
        // n > 1 and no Sellmeier pole anywhere in the window
        for k in 0..=256 {
            let l = lo + (hi - lo) * k as f64 / 256.0;
            for (label, s) in [("ordinary", &sellmeier_o), ("extraordinary", &sellmeier_e)] {
                let n2 = s.index_squared(l);
                if l * l <= s.c || !n2.is_finite() || n2 <= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "{name}: {label} Sellmeier set gives n^2 = {n2} at {l} um inside the window"
                    )));
                }
            }
        }
        Ok(Self {
            name,
            sellmeier_o,
            sellmeier_e,
            window,
            cut_angle,
            length_um,
        })
    }

    /// Beta-barium borate with the standard published Sellmeier set, 0.2-3.0 um window.
    pub fn bbo(length_um: f64) -> Result<Self> {
        Self::new(
            "BBO",
            Sellmeier::BBO_ORDINARY,
            Sellmeier::BBO_EXTRAORDINARY,
            (0.2, 3.0),
            None,
            length_um,
        )
    }

    /// Looks up a built-in crystal by (case-insensitive) name.
    pub fn builtin(name: &str, length_um: f64) -> Result<Self> {
        match name.to_ascii_uppercase().as_str() {
            "BBO" => Self::bbo(length_um),
            _ => Err(Error::InvalidParameter(format!("unknown built-in crystal '{name}'"))),
        }
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["BBO"]
    }

    pub fn with_length(&self, length_um: f64) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.sellmeier_o,
            self.sellmeier_e,
            self.window,
            self.cut_angle,
            length_um,
        )
    }

    pub fn with_cut_angle(&self, cut_angle: Option<f64>) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.sellmeier_o,
            self.sellmeier_e,
            self.window,
            cut_angle,
            self.length_um,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn sellmeier_o(&self) -> Sellmeier {
        self.sellmeier_o
    }
    pub fn sellmeier_e(&self) -> Sellmeier {
        self.sellmeier_e
    }
    pub fn window(&self) -> (f64, f64) {
        self.window
    }
    pub fn cut_angle(&self) -> Option<f64> {
        self.cut_angle
    }
    pub fn length_um(&self) -> f64 {
        self.length_um
    }

    pub fn check_window(&self, wavelength: f64) -> Result<()> {
        let (min, max) = self.window;
        if wavelength.is_finite() && wavelength >= min && wavelength <= max {
            Ok(())
        } else {
            Err(Error::OutsideWindow {
                crystal: self.name.clone(),
                wavelength,
                min,
                max,
            })
        }
    }
}

/// Pump pulse. `bandwidth_sigma` is the amplitude 1/e half-width of
/// exp{-(w - Omega_p)^2 / sigma^2}, in rad/fs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    center_wavelength_um: f64,
    bandwidth_sigma: f64,
    cw: bool,
}

impl PumpSpec {
    pub fn new(center_wavelength_um: f64, bandwidth_sigma: f64, cw: bool) -> Result<Self> {
        if !(center_wavelength_um.is_finite() && center_wavelength_um > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pump wavelength must be positive, got {center_wavelength_um} um"
            )));
        }
        if !(bandwidth_sigma.is_finite() && bandwidth_sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pump bandwidth must be non-negative, got {bandwidth_sigma} rad/fs"
            )));
        }
        if !cw && bandwidth_sigma == 0.0 {
            return Err(Error::InvalidParameter(
                "a pulsed pump needs a positive bandwidth; use the cw flag instead".into(),
            ));
        }
        Ok(Self {
            center_wavelength_um,
            bandwidth_sigma: if cw { 0.0 } else { bandwidth_sigma },
            cw,
        })
    }

    pub fn pulsed(center_wavelength_um: f64, sigma: f64) -> Result<Self> {
        Self::new(center_wavelength_um, sigma, false)
    }

    pub fn cw(center_wavelength_um: f64) -> Result<Self> {
        Self::new(center_wavelength_um, 0.0, true)
    }

    /// Pulsed pump with an intensity-FWHM bandwidth in nm.
    pub fn from_bandwidth_nm(center_wavelength_um: f64, bandwidth_nm: f64) -> Result<Self> {
        Self::pulsed(
            center_wavelength_um,
            crate::units::pump_sigma_from_bandwidth_nm(center_wavelength_um, bandwidth_nm),
        )
    }

    /// Transform-limited pulsed pump with an intensity-FWHM duration in fs.
    pub fn from_duration_fs(center_wavelength_um: f64, duration_fs: f64) -> Result<Self> {
        Self::pulsed(
            center_wavelength_um,
            crate::units::pump_sigma_from_duration_fs(duration_fs),
        )
    }

    pub fn with_wavelength(&self, center_wavelength_um: f64) -> Result<Self> {
        Self::new(center_wavelength_um, self.bandwidth_sigma, self.cw)
    }

    pub fn center_wavelength_um(&self) -> f64 {
        self.center_wavelength_um
    }
    /// Effective sigma; zero for a cw pump.
    pub fn sigma(&self) -> f64 {
        self.bandwidth_sigma
    }
    pub fn is_cw(&self) -> bool {
        self.cw
    }
    /// Central angular frequency Omega_p, rad/fs.
    pub fn omega(&self) -> f64 {
        omega_from_wavelength(self.center_wavelength_um)
    }
}

/// Walk-off parameters at the degenerate point. All inverse velocities in fs/um.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionSummary {
    pub inv_u_o: f64,
    pub inv_u_e: f64,
    pub inv_u_p: f64,
    pub d_plus: f64,
    pub d_big: f64,
    /// D * L in fs, signed.
    pub dl: f64,
    pub theta_pm: f64,
    pub length_um: f64,
    pub pump_wavelength_um: f64,
}

impl DispersionSummary {
    pub fn from_inverse_velocities(
        inv_u_o: f64,
        inv_u_e: f64,
        inv_u_p: f64,
        theta_pm: f64,
        length_um: f64,
        pump_wavelength_um: f64,
    ) -> Self {
        let d_plus = 0.5 * (inv_u_o + inv_u_e) - inv_u_p;
        let d_big = inv_u_o - inv_u_e;
        Self {
            inv_u_o,
            inv_u_e,
            inv_u_p,
            d_plus,
            d_big,
            dl: d_big * length_um,
            theta_pm,
            length_um,
            pump_wavelength_um,
        }
    }

    /// D+/D, the slope of the ridge t+ = (D+/D) t- in the two-photon wavefunction.
    pub fn ridge_slope(&self) -> Result<f64> {
        if self.d_big == 0.0 {
            return Err(Error::DegenerateDispersion);
        }
        Ok(self.d_plus / self.d_big)
    }

    pub fn with_length(&self, length_um: f64) -> Self {
        Self::from_inverse_velocities(
            self.inv_u_o,
            self.inv_u_e,
            self.inv_u_p,
            self.theta_pm,
            length_um,
            self.pump_wavelength_um,
        )
    }
}

pub fn index_ordinary(crystal: &CrystalSpec, wavelength: f64) -> Result<f64> {
    crystal.check_window(wavelength)?;
    Ok(crystal.sellmeier_o.index(wavelength))
}

/// Index of an e-ray propagating at `theta` to the optic axis:
/// 1/n^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
pub fn index_extraordinary(crystal: &CrystalSpec, wavelength: f64, theta: f64) -> Result<f64> {
    crystal.check_window(wavelength)?;
    let (s, c) = theta.sin_cos();
    let inv =
        c * c / crystal.sellmeier_o.index_squared(wavelength) + s * s / crystal.sellmeier_e.index_squared(wavelength);
    Ok(1.0 / inv.sqrt())
}

pub fn index(crystal: &CrystalSpec, wavelength: f64, pol: Polarization, theta: f64) -> Result<f64> {
    match pol {
        Polarization::Ordinary => index_ordinary(crystal, wavelength),
        Polarization::Extraordinary => index_extraordinary(crystal, wavelength, theta),
    }
}

/// dn/dlambda along the given polarization, from the Sellmeier derivatives.
pub fn index_derivative(crystal: &CrystalSpec, wavelength: f64, pol: Polarization, theta: f64) -> Result<f64> {
    crystal.check_window(wavelength)?;
    let so = &crystal.sellmeier_o;
    match pol {
        Polarization::Ordinary => Ok(so.index_derivative(wavelength)),
        Polarization::Extraordinary => {
            let se = &crystal.sellmeier_e;
            let n = index_extraordinary(crystal, wavelength, theta)?;
            let (no, ne) = (so.index(wavelength), se.index(wavelength));
            let (s, c) = theta.sin_cos();
            Ok(n.powi(3)
                * (c * c * so.index_derivative(wavelength) / no.powi(3)
                    + s * s * se.index_derivative(wavelength) / ne.powi(3)))
        }
    }
}

/// Wavenumber k = 2 pi n / lambda, rad/um.
pub fn wavenumber(crystal: &CrystalSpec, wavelength: f64, pol: Polarization, theta: f64) -> Result<f64> {
    Ok(2.0 * PI * index(crystal, wavelength, pol, theta)? / wavelength)
}

/// dk/domega = (n - lambda dn/dlambda) / c, in fs/um.
pub fn inverse_group_velocity(crystal: &CrystalSpec, wavelength: f64, pol: Polarization, theta: f64) -> Result<f64> {
    let n = index(crystal, wavelength, pol, theta)?;
    let dn = index_derivative(crystal, wavelength, pol, theta)?;
    Ok((n - wavelength * dn) / C_UM_PER_FS)
}

/// k_p^e(theta) - k_o(2 lambda_p) - k_e^theta(2 lambda_p), rad/um.
pub fn degenerate_mismatch(crystal: &CrystalSpec, pump_wavelength: f64, theta: f64) -> Result<f64> {
    let ls = 2.0 * pump_wavelength;
    Ok(
        wavenumber(crystal, pump_wavelength, Polarization::Extraordinary, theta)?
            - wavenumber(crystal, ls, Polarization::Ordinary, theta)?
            - wavenumber(crystal, ls, Polarization::Extraordinary, theta)?,
    )
}

/// Collinear degenerate type-II phase-matching angle, by bisection on the exact mismatch.
pub fn phase_matching_angle(crystal: &CrystalSpec, pump_wavelength: f64) -> Result<f64> {
    crystal.check_window(pump_wavelength)?;
    crystal.check_window(2.0 * pump_wavelength)?;
    let not_matchable = || Error::NotPhaseMatchable {
        crystal: crystal.name.clone(),
        pump_wavelength,
    };
    let theta = Bisection::new(PHASE_MATCH_TOL, MAX_BISECTIONS)
        .solve(0.0, FRAC_PI_2, |t| degenerate_mismatch(crystal, pump_wavelength, t))
        .map_err(|e| match e {
            Error::NoBracket { .. } => not_matchable(),
            other => other,
        })?;
    if theta <= 0.0 || theta >= FRAC_PI_2 {
        return Err(not_matchable());
    }
    Ok(theta)
}

/// D+, D and D*L at the degenerate point for this pump.
///
/// The crystal's cut angle is used when set; otherwise the phase-matching angle is solved.
pub fn dispersion_params(crystal: &CrystalSpec, pump: &PumpSpec) -> Result<DispersionSummary> {
    let lp = pump.center_wavelength_um();
    let theta = match crystal.cut_angle {
        Some(t) => {
            crystal.check_window(lp)?;
            crystal.check_window(2.0 * lp)?;
            t
        }
        None => phase_matching_angle(crystal, lp)?,
    };
    let ls = 2.0 * lp;
    let inv_u_o = inverse_group_velocity(crystal, ls, Polarization::Ordinary, theta)?;
    let inv_u_e = inverse_group_velocity(crystal, ls, Polarization::Extraordinary, theta)?;
    let inv_u_p = inverse_group_velocity(crystal, lp, Polarization::Extraordinary, theta)?;
    Ok(DispersionSummary::from_inverse_velocities(
        inv_u_o,
        inv_u_e,
        inv_u_p,
        theta,
        crystal.length_um,
        lp,
    ))
}

fn d_plus_at(crystal: &CrystalSpec, pump_wavelength: f64) -> Result<f64> {
    let pump = PumpSpec::cw(pump_wavelength)?;
    Ok(dispersion_params(crystal, &pump)?.d_plus)
}

/// Pump wavelength where D+ vanishes and the two-photon state becomes exchange-symmetric.
pub fn find_symmetric_pump_wavelength(crystal: &CrystalSpec, search_window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = search_window;
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "search window [{lo}, {hi}] um is empty"
        )));
    }
    Bisection::new(SYMMETRIC_TOL, MAX_BISECTIONS)
        .solve(lo, hi, |l| d_plus_at(crystal, l))
        .map_err(|e| match e {
            Error::NoBracket { .. } => Error::NoSymmetricPoint {
                crystal: crystal.name.clone(),
                lo,
                hi,
            },
            other => other,
        })
}

/// D+ and D sampled over pump wavelengths (as plotted against pump wavelength).
pub fn dispersion_curve(crystal: &CrystalSpec, pump_wavelengths: &[f64]) -> Result<Vec<DispersionSummary>> {
    pump_wavelengths
        .iter()
        .map(|&l| dispersion_params(crystal, &PumpSpec::cw(l)?))
        .collect()
}
