//! Leading-logarithm self-energy corrections of the dressed states and the
//! resulting displacements of the Mollow sidebands.
//!
//! The effective potential is
//! `ΔV = 4α(Zα) ln[(Zα)⁻²] δ³(r) / (3m²)`, so only S-state contact
//! densities contribute to the level-shift part. The Rabi-frequency part
//! comes from the `⟨p²⟩` terms and is what makes the dressed shift differ
//! from a bare-state Lamb shift.
//!
//! Drive quantities (Ω, Δ, Ω_R) may be in any frequency unit as long as
//! they agree; `L_bare` and level shifts on [`AtomicTransition`] are in
//! natural units.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{PhysicalConstants, UnitSystem};
use crate::dressed::{generalized_rabi, mixing_angle};
use crate::error::{require_positive, Error, Result};
use crate::hydrogen::{self, BoundState};

/// Bare two-level system with every matrix element the shifts need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicTransition {
    pub ground: BoundState,
    pub excited: BoundState,
    pub z: u32,
    pub alpha: f64,
    pub omega_r: f64,
    pub gamma: f64,
    pub p2_g: f64,
    pub p2_e: f64,
    pub p_eg_sq: f64,
    pub delta3_g: f64,
    pub delta3_e: f64,
}

impl AtomicTransition {
    /// Hydrogenic transition with all elements from closed forms and Γ
    /// from the Einstein coefficient.
    pub fn hydrogenic(ground: BoundState, excited: BoundState, k: &PhysicalConstants) -> Result<Self> {
        if ground.z() != excited.z() {
            return Err(Error::UnsupportedTransition {
                ground: ground.label().to_owned(),
                excited: excited.label().to_owned(),
            });
        }
        let omega_r = hydrogen::transition_frequency(&ground, &excited, k);
        if omega_r <= 0.0 {
            return Err(Error::UnsupportedTransition {
                ground: ground.label().to_owned(),
                excited: excited.label().to_owned(),
            });
        }
        let gamma = hydrogen::decay_rate(&ground, &excited, k)?;
        Ok(Self {
            z: ground.z(),
            alpha: k.alpha,
            omega_r,
            gamma,
            p2_g: hydrogen::expectation_p_squared(&ground, k),
            p2_e: hydrogen::expectation_p_squared(&excited, k),
            p_eg_sq: hydrogen::dipole_p_squared(&ground, &excited, k)?,
            delta3_g: hydrogen::contact_density(&ground, k),
            delta3_e: hydrogen::contact_density(&excited, k),
            ground,
            excited,
        })
    }

    /// Lyman-α of a hydrogenlike ion with nuclear charge `z`.
    pub fn lyman_alpha(z: u32, k: &PhysicalConstants) -> Result<Self> {
        Self::hydrogenic(BoundState::new(z, 1, 0)?, BoundState::new(z, 2, 1)?, k)
    }

    /// Replace the computed Γ by a measured one (natural units).
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        require_positive("gamma", gamma)?;
        self.gamma = gamma;
        Ok(self)
    }

    pub fn z_alpha(&self) -> f64 {
        self.z as f64 * self.alpha
    }

    /// `|⟨e|z|g⟩|` recovered from the momentum-form element.
    pub fn dipole_length(&self) -> f64 {
        self.p_eg_sq.sqrt() / self.omega_r
    }

    /// Prefactor `4α(Zα)ℓ/(3m²)` of the contact potential.
    fn contact_strength(&self) -> f64 {
        4.0 * self.alpha * self.z_alpha() * leading_log(self.z_alpha()) / 3.0
    }

    /// `⟨g|ΔV|g⟩`, `⟨e|ΔV|e⟩`.
    pub fn bare_level_shifts(&self) -> (f64, f64) {
        let s = self.contact_strength();
        (s * self.delta3_g, s * self.delta3_e)
    }
}

/// `ℓ = ln[(Zα)⁻²]`.
pub fn leading_log(z_alpha: f64) -> f64 {
    -2.0 * z_alpha.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiativeCoefficients {
    pub ell: f64,
    pub l_bare: f64,
    pub c: f64,
}

impl RadiativeCoefficients {
    pub fn of(tr: &AtomicTransition) -> Self {
        Self { ell: leading_log(tr.z_alpha()), l_bare: bare_lamb_shift(tr), c: radiative_rabi_coefficient(tr) }
    }
}

/// `L_bare = ⟨e|ΔV|e⟩ − ⟨g|ΔV|g⟩`.
pub fn bare_lamb_shift(tr: &AtomicTransition) -> f64 {
    let (vg, ve) = tr.bare_level_shifts();
    ve - vg
}

/// `(ΔL₊, ΔL₋)` from the leading-log potential taken between dressed states.
pub fn approx_dressed_lamb(theta: f64, tr: &AtomicTransition) -> (f64, f64) {
    let (vg, ve) = tr.bare_level_shifts();
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    (c2 * ve + s2 * vg, s2 * ve + c2 * vg)
}

/// `(ΔC₊, ΔC₋)`: the corrections linear in Ω_R and Δ, evaluated literally.
pub fn dressed_linear_corrections(theta: f64, omega_r_gen: f64, detuning: f64, tr: &AtomicTransition) -> (f64, f64) {
    // (α/π) ℓ / m² with m = 1
    let k = tr.alpha / PI * leading_log(tr.z_alpha());
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let cos2 = (2.0 * theta).cos();
    let mixed = tr.p_eg_sq * (detuning * cos2 + omega_r_gen * cos2 * cos2);
    // Ω_R ± Δ, taking the cancelling one as Ω²/(Ω_R ∓ Δ).
    let rabi_sq = (omega_r_gen * (2.0 * theta).sin()).powi(2);
    let (up, down) = if detuning >= 0.0 {
        let up = omega_r_gen + detuning;
        (up, if up > 0.0 { rabi_sq / up } else { 0.0 })
    } else {
        let down = omega_r_gen - detuning;
        (rabi_sq / down, down)
    };
    let plus = -k * (c2 * tr.p2_e * up + s2 * tr.p2_g * down + mixed);
    let minus = k * (c2 * tr.p2_g * up + s2 * tr.p2_e * down + mixed);
    (plus, minus)
}

/// `𝓒 = (α/π) ℓ (⟨p²⟩_g + ⟨p²⟩_e)/m²`, dimensionless.
pub fn radiative_rabi_coefficient(tr: &AtomicTransition) -> f64 {
    tr.alpha / PI * leading_log(tr.z_alpha()) * (tr.p2_g + tr.p2_e)
}

fn nondegenerate(rabi: f64, detuning: f64) -> Result<f64> {
    let r = generalized_rabi(rabi, detuning);
    if r == 0.0 {
        Err(Error::DegenerateDrive)
    } else {
        Ok(r)
    }
}

/// `Δω₊ = −Δ L_bare / Ω_R`, `Δω₋ = −Δω₊`.
pub fn sideband_shift_bare(rabi: f64, detuning: f64, l_bare: f64) -> Result<(f64, f64)> {
    let r = nondegenerate(rabi, detuning)?;
    let plus = -detuning * l_bare / r;
    Ok((plus, -plus))
}

/// `δω± = ∓ 𝓒 Ω² / Ω_R`.
pub fn sideband_shift_rabi(rabi: f64, detuning: f64, c: f64) -> Result<(f64, f64)> {
    let r = nondegenerate(rabi, detuning)?;
    let plus = -c * rabi * rabi / r;
    Ok((plus, -plus))
}

/// Half-splitting with both corrections resummed under the square root.
pub fn corrected_half_splitting(rabi: f64, detuning: f64, c: f64, l_bare: f64) -> f64 {
    (rabi * (1.0 - c)).hypot(detuning - l_bare)
}

/// `ω±^corr = ω_L ± √(Ω²(1−𝓒)² + (Δ−L_bare)²)`.
pub fn resummed_sideband(omega_l: f64, rabi: f64, detuning: f64, c: f64, l_bare: f64) -> (f64, f64) {
    let r = corrected_half_splitting(rabi, detuning, c, l_bare);
    (omega_l + r, omega_l - r)
}

/// `Δ^(full)𝓛± = ±(√(Ω²(1−𝓒)² + (Δ−L_bare)²) − √(Ω²+Δ²))`.
pub fn fully_dressed_shift(rabi: f64, detuning: f64, c: f64, l_bare: f64) -> (f64, f64) {
    let d = corrected_half_splitting(rabi, detuning, c, l_bare) - generalized_rabi(rabi, detuning);
    (d, -d)
}

/// Every shift for one drive point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiativeCorrections {
    pub theta: f64,
    pub omega_r_gen: f64,
    pub c: f64,
    pub l_bare: f64,
    /// Only available when the coefficients come from a transition.
    pub dl_app_plus: Option<f64>,
    pub dl_app_minus: Option<f64>,
    pub dc_plus: Option<f64>,
    pub dc_minus: Option<f64>,
    pub dw_plus: f64,
    pub dw_minus: f64,
    pub small_dw_plus: f64,
    pub small_dw_minus: f64,
    pub full_plus: f64,
    pub full_minus: f64,
}

impl RadiativeCorrections {
    /// From explicit `𝓒` and `L_bare`, in the units of Ω and Δ.
    pub fn from_coefficients(rabi: f64, detuning: f64, c: f64, l_bare: f64) -> Result<Self> {
        let theta = mixing_angle(rabi, detuning)?;
        let (dw_plus, dw_minus) = sideband_shift_bare(rabi, detuning, l_bare)?;
        let (small_dw_plus, small_dw_minus) = sideband_shift_rabi(rabi, detuning, c)?;
        let (full_plus, full_minus) = fully_dressed_shift(rabi, detuning, c, l_bare);
        Ok(Self {
            theta,
            omega_r_gen: generalized_rabi(rabi, detuning),
            c,
            l_bare,
            dl_app_plus: None,
            dl_app_minus: None,
            dc_plus: None,
            dc_minus: None,
            dw_plus,
            dw_minus,
            small_dw_plus,
            small_dw_minus,
            full_plus,
            full_minus,
        })
    }

    /// Everything derived from `tr`, with Ω, Δ and all outputs in `units`.
    pub fn from_transition(rabi: f64, detuning: f64, tr: &AtomicTransition, units: &UnitSystem) -> Result<Self> {
        let coeffs = RadiativeCoefficients::of(tr);
        let l_bare = units.from_natural(coeffs.l_bare);
        let mut out = Self::from_coefficients(rabi, detuning, coeffs.c, l_bare)?;
        let (lp, lm) = approx_dressed_lamb(out.theta, tr);
        let (cp, cm) = dressed_linear_corrections(out.theta, out.omega_r_gen, detuning, tr);
        out.dl_app_plus = Some(units.from_natural(lp));
        out.dl_app_minus = Some(units.from_natural(lm));
        out.dc_plus = Some(cp);
        out.dc_minus = Some(cm);
        Ok(out)
    }

    /// All shift fields zeroed; the uncorrected reference.
    pub fn none(rabi: f64, detuning: f64) -> Result<Self> {
        let mut out = Self::from_coefficients(rabi, detuning, 0.0, 0.0)?;
        out.dl_app_plus = Some(0.0);
        out.dl_app_minus = Some(0.0);
        out.dc_plus = Some(0.0);
        out.dc_minus = Some(0.0);
        Ok(out)
    }
}
