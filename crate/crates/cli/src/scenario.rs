//! Scenario files: one JSON object naming a transition, a drive, the
//! corrections to apply and the spectrum grid. See the README for the
//! full key list.

use std::collections::BTreeMap;
use std::path::Path;

use dressed_lamb::mollow::{CorrectionMode, GridSpec, MollowScenario};
use dressed_lamb::radiative::{AtomicTransition, RadiativeCoefficients};
use dressed_lamb::{BoundState, DriveParameters, PhysicalConstants, UnitMode, UnitSystem};
use serde::{Deserialize, Serialize};

use crate::CliError;

const PRESETS: &str = include_str!("../data/presets.json");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetFile {
    version: u32,
    presets: BTreeMap<String, ExplicitTransition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitTransition {
    pub z: u32,
    pub ground: String,
    pub excited: String,
    /// Replaces the computed decay rate, in s⁻¹.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_si: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum TransitionSpec {
    Preset(String),
    Explicit(ExplicitTransition),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    pub detuning: f64,
    /// Absolute laser frequency; checked against `ω_R + Δ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laser_frequency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrectionSpec {
    #[serde(default)]
    pub mode: CorrectionMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_bare: Option<f64>,
    /// Also use `Δ − L_bare` inside the lineshape amplitudes and widths.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub shift_detuning_in_lineshape: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub sigma_rel: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub transition: TransitionSpec,
    pub drive: DriveSpec,
    #[serde(default)]
    pub corrections: CorrectionSpec,
    /// Offsets from the laser frequency.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub units: UnitMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
}

/// A scenario with every derived quantity filled in, all frequencies in
/// the scenario's units.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub scenario: Scenario,
    pub transition: AtomicTransition,
    pub units: UnitSystem,
    pub coefficients: RadiativeCoefficients,
    pub rabi: f64,
    pub h: f64,
    pub detuning: f64,
    pub omega_l: f64,
    pub c: f64,
    pub l_bare: f64,
    pub overrides: Vec<&'static str>,
    /// Carries both coefficients; the correction mode picks the spectrum.
    pub mollow: MollowScenario,
    pub warnings: Vec<String>,
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn presets() -> PresetFile {
    serde_json::from_str(PRESETS).expect("embedded preset file is valid")
}

pub fn preset_names() -> Vec<String> {
    presets().presets.into_keys().collect()
}

pub fn presets_version() -> u32 {
    presets().version
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        #[derive(Deserialize)]
        struct Sidecar {
            scenario: Scenario,
        }
        let err = |e: serde_json::Error| validation(format!("scenario: {e}"));
        let value: serde_json::Value = serde_json::from_str(text).map_err(err)?;
        // spectrum sidecars carry the generating scenario under `scenario`
        if value.get("scenario").is_some() && value.get("frame").is_some() {
            serde_json::from_str::<Sidecar>(text).map(|s| s.scenario).map_err(err)
        } else {
            serde_json::from_str(text).map_err(err)
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn transition(&self, k: &PhysicalConstants) -> Result<AtomicTransition, CliError> {
        let spec = match &self.transition {
            TransitionSpec::Preset(name) => presets().presets.remove(name).ok_or_else(|| {
                validation(format!("transition.preset: unknown preset `{name}` (known: {})", preset_names().join(", ")))
            })?,
            TransitionSpec::Explicit(e) => e.clone(),
        };
        let g =
            BoundState::from_label(spec.z, &spec.ground).map_err(|e| validation(format!("transition.ground: {e}")))?;
        let e = BoundState::from_label(spec.z, &spec.excited)
            .map_err(|e| validation(format!("transition.excited: {e}")))?;
        let tr = AtomicTransition::hydrogenic(g, e, k).map_err(|e| validation(format!("transition: {e}")))?;
        match spec.gamma_si {
            Some(g) => {
                tr.with_gamma(g / k.natural_to_rad_per_s()).map_err(|e| validation(format!("transition.gamma_si: {e}")))
            }
            None => Ok(tr),
        }
    }

    pub fn resolve(&self, k: &PhysicalConstants) -> Result<Resolved, CliError> {
        let transition = self.transition(k)?;
        let units = UnitSystem::new(self.units, transition.gamma, k).map_err(|e| validation(e.to_string()))?;
        let gamma = units.gamma();
        let coefficients = RadiativeCoefficients::of(&transition);

        let d = &self.drive;
        let rabi = match (d.rabi, d.h) {
            (Some(r), None) => r,
            (None, Some(h)) => h * gamma,
            _ => return Err(validation("drive: give exactly one of `rabi` and `h`")),
        };
        if !(rabi > 0.0 && rabi.is_finite()) {
            return Err(validation(format!("drive: Rabi frequency must be positive, got {rabi}")));
        }
        if !d.detuning.is_finite() {
            return Err(validation("drive.detuning: must be finite"));
        }
        let omega_r = units.from_natural(transition.omega_r);
        let drive = DriveParameters::new(omega_r + d.detuning, rabi, d.detuning)
            .and_then(|p| p.with_gamma(gamma))
            .map_err(|e| validation(format!("drive: {e}")))?;
        if let Some(wl) = d.laser_frequency {
            let given = DriveParameters { omega_l: wl, ..drive };
            if !given.consistent_with(omega_r, 1e-9) {
                return Err(validation(format!(
                    "drive.laser_frequency: {wl} is inconsistent with transition {omega_r} + detuning {}",
                    d.detuning
                )));
            }
        }

        let mut overrides = Vec::new();
        let c = match self.corrections.c {
            Some(c) => {
                overrides.push("c");
                c
            }
            None => coefficients.c,
        };
        let l_bare = match self.corrections.l_bare {
            Some(l) => {
                overrides.push("l_bare");
                l
            }
            None => units.from_natural(coefficients.l_bare),
        };
        if !(c.is_finite() && l_bare.is_finite()) {
            return Err(validation("corrections: c and l_bare must be finite"));
        }
        let mut mollow = MollowScenario::new(rabi, d.detuning, gamma, c, l_bare);
        mollow.shift_detuning_in_lineshape = self.corrections.shift_detuning_in_lineshape;
        if let Some(g) = self.grid {
            g.validate().map_err(|e| validation(format!("grid: {e}")))?;
            mollow = mollow.with_grid(g);
        }
        if let Some(n) = self.noise {
            if !(n.sigma_rel > 0.0 && n.sigma_rel.is_finite()) {
                return Err(validation("noise.sigma_rel: must be positive"));
            }
        }
        let warnings = mollow.warnings();
        Ok(Resolved {
            scenario: self.clone(),
            transition,
            units,
            coefficients,
            rabi,
            h: drive.h.unwrap_or(rabi / gamma),
            detuning: d.detuning,
            omega_l: drive.omega_l,
            c,
            l_bare,
            overrides,
            mollow,
            warnings,
        })
    }
}

impl Resolved {
    pub fn mode(&self) -> CorrectionMode {
        self.scenario.corrections.mode
    }

    /// `(𝓒, L_bare)` as selected by the scenario's correction mode.
    pub fn active_coefficients(&self) -> (f64, f64) {
        match self.mode() {
            CorrectionMode::None => (0.0, 0.0),
            CorrectionMode::Bare => (0.0, self.l_bare),
            CorrectionMode::Full => (self.c, self.l_bare),
        }
    }
}
