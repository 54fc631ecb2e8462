//! Order-of-magnitude estimates for observing the dressed-state shift:
//! shift-to-width and shift-to-Bloch–Siegert ratios, Zα scalings and the
//! optical power needed to reach a given `h = Ω/Γ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{require_positive, Error, Result};
use crate::radiative::{leading_log, radiative_rabi_coefficient, sideband_shift_rabi, AtomicTransition};

/// `r₁ ∼ h 𝓒`.
pub fn ratio_r1(h: f64, c: f64) -> f64 {
    h * c
}

/// `|δω₊| / Γ` from the closed-form shift.
pub fn ratio_r1_exact(rabi: f64, detuning: f64, c: f64, gamma: f64) -> Result<f64> {
    require_positive("gamma", gamma)?;
    let (plus, _) = sideband_shift_rabi(rabi, detuning, c)?;
    Ok(plus.abs() / gamma)
}

/// Bloch–Siegert scale `Ω³/ω_L²` at resonance.
pub fn bloch_siegert_estimate(rabi: f64, omega_l: f64) -> Result<f64> {
    require_positive("omega_l", omega_l)?;
    Ok(rabi.powi(3) / (omega_l * omega_l))
}

/// `r₂ ∼ ℓ / (α (Zα)²) · h⁻²`.
pub fn ratio_r2(z: u32, h: f64, k: &PhysicalConstants) -> Result<f64> {
    require_positive("h", h)?;
    let za = z as f64 * k.alpha;
    Ok(leading_log(za) / (k.alpha * za * za) / (h * h))
}

/// The same ratio from the actual pipeline: `|δω₊| / (Ω³/ω_L²)` at Δ = 0
/// with `Ω = hΓ` and `ω_L = ω_R`.
pub fn ratio_r2_pipeline(tr: &AtomicTransition, h: f64) -> Result<f64> {
    require_positive("h", h)?;
    let rabi = h * tr.gamma;
    let c = radiative_rabi_coefficient(tr);
    let (shift, _) = sideband_shift_rabi(rabi, 0.0, c)?;
    Ok(shift.abs() / bloch_siegert_estimate(rabi, tr.omega_r)?)
}

/// Zα-expansion scalings with all numeric prefactors dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZAlphaScaling {
    pub omega_l_est: f64,
    pub gamma_est: f64,
    pub c_est: f64,
}

pub fn zalpha_scaling(z: u32, k: &PhysicalConstants) -> Result<ZAlphaScaling> {
    if z == 0 {
        return Err(Error::InvalidParameter { name: "z", reason: "must be at least 1".into() });
    }
    let za = z as f64 * k.alpha;
    let m = k.electron_mass();
    Ok(ZAlphaScaling {
        omega_l_est: za * za * m,
        gamma_est: k.alpha * za.powi(4) * m,
        c_est: k.alpha * za * za * leading_log(za),
    })
}

/// Optical conventions behind [`required_power`]. The defaults are a
/// linearly polarized drive on the z matrix element, `Ω = dE₀/ħ` with E₀ the
/// peak field amplitude, peak on-axis intensity `I = ε₀cE₀²/2`, and a
/// Gaussian focus carrying `P = I·πw₀²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerConventions {
    /// `E₀ = field_factor · ħΩ/d`.
    pub field_factor: f64,
    /// `I = intensity_factor · ε₀ c E₀²`.
    pub intensity_factor: f64,
    /// `P = I · area_factor · π w₀²`.
    pub area_factor: f64,
}

impl Default for PowerConventions {
    fn default() -> Self {
        Self { field_factor: 1.0, intensity_factor: 0.5, area_factor: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerEstimate {
    pub h: f64,
    /// Ω in rad/s.
    pub rabi: f64,
    /// Dipole moment in C·m.
    pub dipole_moment: f64,
    /// Field amplitude in V/m.
    pub field_amplitude: f64,
    /// Peak intensity in W/m².
    pub intensity: f64,
    /// Transition wavelength in m.
    pub wavelength: f64,
    /// Beam waist in m.
    pub beam_waist: f64,
    /// Required power in W.
    pub power: f64,
}

impl PowerEstimate {
    /// `power / available`.
    pub fn gap(&self, available: f64) -> f64 {
        self.power / available
    }
}

/// Transition wavelength `2πc/ω_R` in metres.
pub fn wavelength(tr: &AtomicTransition, k: &PhysicalConstants) -> f64 {
    2.0 * PI * k.c / (tr.omega_r * k.natural_to_rad_per_s())
}

/// Power needed to drive `tr` at `Ω = hΓ` with a beam waist in metres.
pub fn required_power(h: f64, tr: &AtomicTransition, beam_waist: f64, k: &PhysicalConstants) -> Result<PowerEstimate> {
    required_power_with(h, tr, beam_waist, k, &PowerConventions::default())
}

pub fn required_power_with(
    h: f64,
    tr: &AtomicTransition,
    beam_waist: f64,
    k: &PhysicalConstants,
    conv: &PowerConventions,
) -> Result<PowerEstimate> {
    require_positive("h", h)?;
    require_positive("beam_waist", beam_waist)?;
    if tr.p_eg_sq <= 0.0 {
        return Err(Error::UnsupportedTransition {
            ground: tr.ground.label().to_owned(),
            excited: tr.excited.label().to_owned(),
        });
    }
    let rabi = h * tr.gamma * k.natural_to_rad_per_s();
    let dipole_moment = k.elementary_charge * tr.dipole_length() * k.natural_to_metre();
    let field_amplitude = conv.field_factor * k.hbar * rabi / dipole_moment;
    let intensity = conv.intensity_factor * k.epsilon0 * k.c * field_amplitude * field_amplitude;
    let power = intensity * conv.area_factor * PI * beam_waist * beam_waist;
    Ok(PowerEstimate {
        h,
        rabi,
        dipole_moment,
        field_amplitude,
        intensity,
        wavelength: wavelength(tr, k),
        beam_waist,
        power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> PhysicalConstants {
        PhysicalConstants::codata2018()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn r1_variants() {
        assert_eq!(ratio_r1(1000.0, 0.0), 0.0);
        let c = 1.5e-6;
        assert!(rel(ratio_r1_exact(1000.0, 0.0, c, 1.0).unwrap(), ratio_r1(1000.0, c)) < 1e-15);
        assert!(ratio_r1_exact(1.0, 0.0, c, 0.0).is_err());
    }

    #[test]
    fn bloch_siegert_scaling() {
        assert_eq!(bloch_siegert_estimate(0.0, 2.0).unwrap(), 0.0);
        let a = bloch_siegert_estimate(3.0, 7.0).unwrap();
        let b = bloch_siegert_estimate(6.0, 7.0).unwrap();
        assert!(rel(b / a, 8.0) < 1e-15);
        assert!(bloch_siegert_estimate(1.0, 0.0).is_err());

        let k = k();
        let tr = AtomicTransition::lyman_alpha(1, &k).unwrap();
        let s = k.natural_to_rad_per_s();
        let bs = bloch_siegert_estimate(1000.0 * tr.gamma * s, tr.omega_r * s).unwrap();
        assert!(rel(bs, 1024.755) < 1e-4, "{bs}");
    }

    #[test]
    fn r2_scaling() {
        let k = k();
        let r = ratio_r2(1, 1000.0, &k).unwrap();
        assert!(rel(r, 25.323_318_496_8) < 1e-9);
        assert!(rel(r / ratio_r2(1, 4000.0, &k).unwrap(), 16.0) < 1e-13);
        assert!(ratio_r2(1, 0.0, &k).is_err());
    }

    #[test]
    fn zalpha_powers() {
        let k = k();
        let a = zalpha_scaling(1, &k).unwrap();
        let b = zalpha_scaling(2, &k).unwrap();
        assert!(rel(b.omega_l_est / a.omega_l_est, 4.0) < 1e-14);
        assert!(rel(b.gamma_est / a.gamma_est, 16.0) < 1e-14);
        let ell_ratio = leading_log(2.0 * k.alpha) / leading_log(k.alpha);
        assert!(rel(b.c_est / a.c_est, 4.0 * ell_ratio) < 1e-14);
        assert!(rel(a.gamma_est / a.omega_l_est, k.alpha.powi(3)) < 1e-14);
        assert!(rel(a.c_est, 3.823_953_430_2e-6) < 1e-9);
        assert!(zalpha_scaling(0, &k).is_err());
    }

    #[test]
    fn power_scalings() {
        let k = k();
        let tr = AtomicTransition::lyman_alpha(1, &k).unwrap();
        let lam = wavelength(&tr, &k);
        let p1 = required_power(1000.0, &tr, lam, &k).unwrap();
        let p2 = required_power(2000.0, &tr, lam, &k).unwrap();
        let p3 = required_power(1000.0, &tr, 2.0 * lam, &k).unwrap();
        assert!(rel(p2.power / p1.power, 4.0) < 1e-13);
        assert!(rel(p3.power / p1.power, 4.0) < 1e-13);
        assert!(rel(p1.dipole_moment, 6.315_826_928e-30) < 1e-8);
        assert!(rel(p1.power, 3.371_488_124e-3) < 1e-8, "{}", p1.power);
        let mut dark = tr.clone();
        dark.p_eg_sq = 0.0;
        assert!(matches!(required_power(1.0, &dark, lam, &k), Err(Error::UnsupportedTransition { .. })));
    }
}
