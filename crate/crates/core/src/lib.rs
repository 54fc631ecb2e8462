//! Radiative corrections to laser-dressed two-level atoms.
//!
//! Natural units throughout (ħ = c = ε₀ = 1, electron mass 1) unless a
//! [`UnitSystem`] says otherwise. Spectra synthesized here are the
//! secular-limit incoherent Mollow triplet, optionally moved by the bare
//! and dressed radiative shifts, and [`fit`] recovers sideband positions
//! from sampled data.

pub mod constants;
pub mod dressed;
pub mod error;
pub mod export;
pub mod feasibility;
pub mod fit;
pub mod hydrogen;
pub mod mollow;
pub mod radiative;

pub use constants::{PhysicalConstants, UnitMode, UnitSystem};
pub use dressed::{
    dressed_energies, generalized_rabi, mixing_angle, sideband_frequencies, DressedPair, DriveParameters,
};
pub use error::{Error, Result};
pub use fit::{fit_three_lorentzians, measure_sideband_shift, FitOptions, LorentzianPeak, ThreeLorentzianFit};
pub use hydrogen::BoundState;
pub use mollow::{CorrectionMode, GridSpec, MollowParameters, MollowScenario, SpectrumSamples};
pub use radiative::{AtomicTransition, RadiativeCoefficients, RadiativeCorrections};
