//! Unit system: micrometers, femtoseconds, rad/fs.

/// Speed of light in um/fs.
pub const C_UM_PER_FS: f64 = 0.299_792_458;

pub fn omega_from_wavelength(wavelength_um: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_UM_PER_FS / wavelength_um
}

pub fn wavelength_from_omega(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_UM_PER_FS / omega
}

/// Angular-frequency width (rad/fs) of a wavelength width around `center_um`.
pub fn omega_width_from_wavelength_width(center_um: f64, width_um: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_UM_PER_FS * width_um / (center_um * center_um)
}

/// Amplitude 1/e half-width of exp(-x^2/sigma^2) whose square has the given FWHM.
pub fn sigma_from_intensity_fwhm(fwhm: f64) -> f64 {
    fwhm / (2.0 * std::f64::consts::LN_2).sqrt()
}

/// Pump sigma (rad/fs) from an intensity FWHM bandwidth quoted in nm.
pub fn pump_sigma_from_bandwidth_nm(center_um: f64, bandwidth_nm: f64) -> f64 {
    sigma_from_intensity_fwhm(omega_width_from_wavelength_width(center_um, bandwidth_nm * 1e-3))
}

/// Pump sigma (rad/fs) for a transform-limited Gaussian pulse of the given intensity FWHM
/// duration. The temporal amplitude is exp(-sigma^2 t^2 / 4).
pub fn pump_sigma_from_duration_fs(fwhm_fs: f64) -> f64 {
    2.0 * (2.0 * std::f64::consts::LN_2).sqrt() / fwhm_fs
}

pub fn nm_to_um(nm: f64) -> f64 {
    nm * 1e-3
}

pub fn um_to_nm(um: f64) -> f64 {
    um * 1e3
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_wavelength_roundtrip() {
        let w = omega_from_wavelength(0.4);
        assert!((wavelength_from_omega(w) - 0.4).abs() < 1e-15);
        assert!((w - 4.709_128_9).abs() < 1e-6);
    }

    #[test]
    fn fwhm_convention() {
        // exp(-2 x^2 / sigma^2) = 1/2 at x = fwhm / 2
        let sigma = sigma_from_intensity_fwhm(1.0);
        assert!(((-2.0 * 0.25 / (sigma * sigma)).exp() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn duration_convention() {
        // intensity exp(-sigma^2 t^2 / 2) halves at t = 50 fs for a 100 fs pulse
        let sigma = pump_sigma_from_duration_fs(100.0);
        assert!(((-sigma * sigma * 2500.0 / 2.0).exp() - 0.5).abs() < 1e-14);
    }
}
