//! Physical constants and the unit systems used throughout the crate.
//!
//! Internally every frequency and energy is carried in natural units with
//! `ħ = c = ε₀ = 1` and the electron mass as the unit of energy, so `m = 1`
//! and the hydrogen ground state sits at `-α²/2`. [`UnitSystem`] converts
//! to SI angular frequency (rad/s) or to multiples of a reference decay rate.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Result};

const FROZEN: &str = include_str!("constants.toml");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub alpha: f64,
    pub electron_mass_kg: f64,
    pub hbar: f64,
    pub c: f64,
    pub epsilon0: f64,
    pub elementary_charge: f64,
    pub bohr_radius: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Overrides {
    alpha: Option<f64>,
    electron_mass_kg: Option<f64>,
    hbar: Option<f64>,
    c: Option<f64>,
    epsilon0: Option<f64>,
    elementary_charge: Option<f64>,
    bohr_radius: Option<f64>,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

impl PhysicalConstants {
    /// The frozen CODATA 2018 set compiled into the crate.
    pub fn codata2018() -> Self {
        let o: Overrides = toml::from_str(FROZEN).expect("embedded constants file is valid");
        Self {
            alpha: o.alpha.unwrap(),
            electron_mass_kg: o.electron_mass_kg.unwrap(),
            hbar: o.hbar.unwrap(),
            c: o.c.unwrap(),
            epsilon0: o.epsilon0.unwrap(),
            elementary_charge: o.elementary_charge.unwrap(),
            bohr_radius: o.bohr_radius.unwrap(),
        }
    }

    /// Start from the frozen set and apply the keys present in `text`.
    /// Unknown keys are rejected.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let o: Overrides = toml::from_str(text)?;
        let mut k = Self::codata2018();
        k.alpha = o.alpha.unwrap_or(k.alpha);
        k.electron_mass_kg = o.electron_mass_kg.unwrap_or(k.electron_mass_kg);
        k.hbar = o.hbar.unwrap_or(k.hbar);
        k.c = o.c.unwrap_or(k.c);
        k.epsilon0 = o.epsilon0.unwrap_or(k.epsilon0);
        k.elementary_charge = o.elementary_charge.unwrap_or(k.elementary_charge);
        k.bohr_radius = o.bohr_radius.unwrap_or(k.bohr_radius);
        for (name, v) in [
            ("alpha", k.alpha),
            ("electron_mass_kg", k.electron_mass_kg),
            ("hbar", k.hbar),
            ("c", k.c),
            ("epsilon0", k.epsilon0),
            ("elementary_charge", k.elementary_charge),
            ("bohr_radius", k.bohr_radius),
        ] {
            require_positive(name, v)?;
        }
        Ok(k)
    }

    /// Electron mass in natural units; the unit of energy.
    pub const fn electron_mass(&self) -> f64 {
        1.0
    }

    /// rad/s corresponding to one natural unit of energy, `m c² / ħ`.
    pub fn natural_to_rad_per_s(&self) -> f64 {
        self.electron_mass_kg * self.c * self.c / self.hbar
    }

    /// metres corresponding to one natural unit of length, `ħ / (m c)`.
    pub fn natural_to_metre(&self) -> f64 {
        self.hbar / (self.electron_mass_kg * self.c)
    }

    pub fn hartree_to_rad_per_s(&self) -> f64 {
        self.alpha * self.alpha * self.natural_to_rad_per_s()
    }

    /// Hartree energy in natural units (`α² m`).
    pub fn hartree(&self) -> f64 {
        self.alpha * self.alpha * self.electron_mass()
    }
}

/// How user-facing frequencies are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    /// Multiples of a reference decay rate Γ.
    #[default]
    Gamma,
    /// Natural units, energies in multiples of the electron mass.
    Natural,
    /// Angular frequency in rad/s.
    Si,
}

impl std::str::FromStr for UnitMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "gamma" => Ok(Self::Gamma),
            "natural" => Ok(Self::Natural),
            "si" => Ok(Self::Si),
            other => Err(format!("unknown unit mode `{other}` (gamma|natural|si)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub mode: UnitMode,
    /// Decay rate in natural units; the unit in [`UnitMode::Gamma`].
    pub reference_gamma: f64,
    natural_to_si: f64,
}

impl UnitSystem {
    pub fn new(mode: UnitMode, reference_gamma: f64, constants: &PhysicalConstants) -> Result<Self> {
        require_positive("reference_gamma", reference_gamma)?;
        Ok(Self { mode, reference_gamma, natural_to_si: constants.natural_to_rad_per_s() })
    }

    /// Same reference data, different mode.
    pub fn with_mode(&self, mode: UnitMode) -> Self {
        Self { mode, ..*self }
    }

    /// Scale factor from this system's frequency unit to natural units.
    fn unit_in_natural(&self) -> f64 {
        match self.mode {
            UnitMode::Gamma => self.reference_gamma,
            UnitMode::Natural => 1.0,
            UnitMode::Si => 1.0 / self.natural_to_si,
        }
    }

    pub fn to_natural(&self, value: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => value,
            UnitMode::Gamma => value * self.reference_gamma,
            UnitMode::Si => value / self.natural_to_si,
        }
    }

    pub fn from_natural(&self, value: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => value,
            UnitMode::Gamma => value / self.reference_gamma,
            UnitMode::Si => value * self.natural_to_si,
        }
    }

    /// Convert a frequency expressed in `self` into `target`.
    pub fn convert_to(&self, value: f64, target: &UnitSystem) -> f64 {
        target.from_natural(self.to_natural(value))
    }

    /// Name of the frequency unit, for report headers.
    pub fn unit_label(&self) -> &'static str {
        match self.mode {
            UnitMode::Gamma => "Gamma",
            UnitMode::Natural => "m_e",
            UnitMode::Si => "rad/s",
        }
    }

    /// Reference decay rate expressed in this system.
    pub fn gamma(&self) -> f64 {
        self.reference_gamma / self.unit_in_natural()
    }
}
