use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("wavelength {wavelength} um outside transparency window [{min}, {max}] um of {crystal}")]
    OutsideWindow {
        crystal: String,
        wavelength: f64,
        min: f64,
        max: f64,
    },

    #[error("{crystal}: not phase-matchable for a {pump_wavelength} um pump (no sign change of the mismatch over (0, pi/2))")]
    NotPhaseMatchable { crystal: String, pump_wavelength: f64 },

    #[error("{crystal}: no symmetric point in window [{lo}, {hi}] um (D+ does not change sign)")]
    NoSymmetricPoint { crystal: String, lo: f64, hi: f64 },

    #[error("degenerate dispersion: D = 0, the two-photon support collapses")]
    DegenerateDispersion,

    #[error("bisection did not bracket a root on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("spectral grid too small: edge magnitude {edge:.3e} (relative) exceeds {limit:.1e}")]
    EdgeLeakage { edge: f64, limit: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by physics/domain limits rather than malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::OutsideWindow { .. }
                | Error::NotPhaseMatchable { .. }
                | Error::NoSymmetricPoint { .. }
                | Error::DegenerateDispersion
                | Error::NoBracket { .. }
                | Error::EdgeLeakage { .. }
        )
    }
}
