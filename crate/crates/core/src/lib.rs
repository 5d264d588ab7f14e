//! Simulation of pulsed type-II SPDC photon pairs in birefringent crystals.
//!
//! Units: micrometers, femtoseconds, rad/fs. Wavelengths are in micrometers
//! everywhere inside the library; the CLI converts from nanometers.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod dispersion;
pub mod error;
pub mod grid;
pub mod io;
pub mod quadrature;
pub mod roots;
pub mod scenarios;
pub mod spectral;
pub mod temporal;
pub mod units;

pub use dispersion::{dispersion_params, find_symmetric_pump_wavelength, CrystalSpec, DispersionSummary, PumpSpec};
pub use error::{Error, Result};
pub use grid::{Axis, FreqGrid, SpectrumGrid, TimeGrid};
