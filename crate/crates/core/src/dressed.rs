//! Semiclassical dressed states of a driven two-level atom.
//!
//! The photon index only labels manifolds; it never changes the numbers,
//! since Ω, Ω_R and θ are taken in the semiclassical limit.

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParameters {
    pub omega_l: f64,
    /// Resonant Rabi frequency Ω ≥ 0.
    pub rabi: f64,
    /// Detuning Δ = ω_L − ω_R.
    pub detuning: f64,
    /// Ω/Γ when a decay rate was supplied.
    pub h: Option<f64>,
}

impl DriveParameters {
    pub fn new(omega_l: f64, rabi: f64, detuning: f64) -> Result<Self> {
        check_rabi(rabi)?;
        require_finite("detuning", detuning)?;
        require_finite("omega_l", omega_l)?;
        Ok(Self { omega_l, rabi, detuning, h: None })
    }

    /// Drive of strength `h·Γ` at detuning `Δ` from a transition at `omega_r`.
    pub fn from_h(h: f64, gamma: f64, omega_r: f64, detuning: f64) -> Result<Self> {
        crate::error::require_positive("gamma", gamma)?;
        let mut d = Self::new(omega_r + detuning, h * gamma, detuning)?;
        d.h = Some(h);
        Ok(d)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        crate::error::require_positive("gamma", gamma)?;
        self.h = Some(self.rabi / gamma);
        Ok(self)
    }

    /// Transition frequency implied by `Δ = ω_L − ω_R`.
    pub fn omega_r(&self) -> f64 {
        self.omega_l - self.detuning
    }

    /// True when `omega_r` is consistent with `Δ = ω_L − ω_R` to `rel_tol`.
    pub fn consistent_with(&self, omega_r: f64, rel_tol: f64) -> bool {
        let scale = self.omega_l.abs().max(omega_r.abs()).max(f64::MIN_POSITIVE);
        (self.omega_r() - omega_r).abs() <= rel_tol * scale
    }

    pub fn generalized_rabi(&self) -> f64 {
        generalized_rabi(self.rabi, self.detuning)
    }

    pub fn dressed_pair(&self) -> Result<DressedPair> {
        DressedPair::new(self.rabi, self.detuning, self.omega_l, self.omega_r())
    }
}

fn check_rabi(rabi: f64) -> Result<()> {
    if rabi >= 0.0 && rabi.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "rabi", reason: format!("must be non-negative and finite, got {rabi}") })
    }
}

/// θ ∈ [0, π/2] with `sin2θ = Ω/Ω_R` and `cos2θ = −Δ/Ω_R`.
pub fn mixing_angle(rabi: f64, detuning: f64) -> Result<f64> {
    check_rabi(rabi)?;
    require_finite("detuning", detuning)?;
    if rabi == 0.0 && detuning == 0.0 {
        return Err(Error::DegenerateDrive);
    }
    // +0.0 keeps atan2 on the upper branch when Ω = 0 and Δ > 0.
    Ok(0.5 * (rabi + 0.0).atan2(-detuning))
}

pub fn generalized_rabi(rabi: f64, detuning: f64) -> f64 {
    rabi.hypot(detuning)
}

/// `E±,n = (n + ½) ω_L + ½ ω_R ± ½ Ω_R`.
pub fn dressed_energies(n: u64, omega_l: f64, omega_r: f64, omega_r_gen: f64) -> (f64, f64) {
    let mid = (n as f64 + 0.5) * omega_l + 0.5 * omega_r;
    let half = 0.5 * omega_r_gen.abs();
    (mid + half, mid - half)
}

/// `ω± = ω_L ± Ω_R`.
pub fn sideband_frequencies(omega_l: f64, omega_r_gen: f64) -> (f64, f64) {
    (omega_l + omega_r_gen, omega_l - omega_r_gen)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedPair {
    pub theta: f64,
    pub omega_r_gen: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    /// Display tag only.
    pub manifold: Option<u64>,
    /// Rows are |+⟩ and |−⟩ in the (|e,n⟩, |g,n+1⟩) basis.
    pub amplitudes: [[f64; 2]; 2],
}

impl DressedPair {
    pub fn new(rabi: f64, detuning: f64, omega_l: f64, omega_r: f64) -> Result<Self> {
        let theta = mixing_angle(rabi, detuning)?;
        let omega_r_gen = generalized_rabi(rabi, detuning);
        let (e_plus, e_minus) = dressed_energies(0, omega_l, omega_r, omega_r_gen);
        let (s, c) = theta.sin_cos();
        Ok(Self { theta, omega_r_gen, e_plus, e_minus, manifold: None, amplitudes: [[c, s], [-s, c]] })
    }

    pub fn in_manifold(mut self, n: u64, omega_l: f64) -> Self {
        let shift = n as f64 * omega_l;
        if let Some(old) = self.manifold {
            let back = old as f64 * omega_l;
            self.e_plus -= back;
            self.e_minus -= back;
        }
        self.e_plus += shift;
        self.e_minus += shift;
        self.manifold = Some(n);
        self
    }
}
