//! Frequency-domain description of the photon pair: joint spectral amplitude,
//! filters, correlation diagnostics and the Fourier bridge to (t+, t-).
//!
//! Axis convention: `omega_e` indexes rows (e-ray, idler) and `omega_o` indexes
//! columns (o-ray, signal).

mod bridge;
mod diagnostics;
mod jsa;

pub use bridge::{bridge_axes, edge_fraction, time_domain_wavefunction, BridgeOptions, DEFAULT_EDGE_LIMIT};
pub use diagnostics::{
    schmidt_number, spectral_diagnostics, Classification, CorrelationThresholds, SpectralDiagnostics,
};
pub use jsa::{
    joint_spectral_amplitude, joint_spectrum, phase_mismatch_exact, phase_mismatch_linear, pump_envelope, FilterShape,
    FilterSpec, FilterTarget, FreqAxes, DEFAULT_FREQ_NODES,
};
