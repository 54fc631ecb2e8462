//! Nonrelativistic hydrogenic bound states and the matrix elements that
//! enter the radiative corrections.
//!
//! All results are in natural units (`m = 1`): energies in `m`, lengths in
//! `1/m`, momenta in `m`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

const ORBITAL_LETTERS: &[u8] = b"SPDFGHIK";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawState", into = "RawState")]
pub struct BoundState {
    z: u32,
    n: u32,
    l: u32,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct RawState {
    z: u32,
    n: u32,
    l: u32,
}

impl TryFrom<RawState> for BoundState {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        BoundState::new(raw.z, raw.n, raw.l)
    }
}

impl From<BoundState> for RawState {
    fn from(s: BoundState) -> Self {
        RawState { z: s.z, n: s.n, l: s.l }
    }
}

impl BoundState {
    pub fn new(z: u32, n: u32, l: u32) -> Result<Self> {
        if z == 0 || n == 0 || l >= n || (l as usize) >= ORBITAL_LETTERS.len() {
            return Err(Error::InvalidState { z, n, l });
        }
        let label = format!("{n}{}", ORBITAL_LETTERS[l as usize] as char);
        Ok(Self { z, n, l, label })
    }

    /// Parse spectroscopic notation such as `"1S"` or `"2p"`.
    pub fn from_label(z: u32, label: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter { name: "state", reason: format!("cannot parse `{label}` as <n><L>") };
        let label = label.trim();
        let split = label.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(bad)?;
        let (num, letter) = label.split_at(split);
        let n: u32 = num.parse().map_err(|_| bad())?;
        if letter.len() != 1 {
            return Err(bad());
        }
        let letter = letter.as_bytes()[0].to_ascii_uppercase();
        let l = ORBITAL_LETTERS.iter().position(|&c| c == letter).ok_or_else(bad)? as u32;
        Self::new(z, n, l)
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn z_alpha(&self, k: &PhysicalConstants) -> f64 {
        self.z as f64 * k.alpha
    }
}

impl fmt::Display for BoundState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// Schrödinger–Coulomb level, `-(Zα)² m / (2n²)`.
pub fn hydrogen_energy(state: &BoundState, k: &PhysicalConstants) -> f64 {
    let za = state.z_alpha(k);
    let n = state.n as f64;
    -za * za * k.electron_mass() / (2.0 * n * n)
}

/// `⟨δ³(r)⟩ = |ψ(0)|²`; `(Zαm)³/(πn³)` for S states and exactly zero otherwise.
pub fn contact_density(state: &BoundState, k: &PhysicalConstants) -> f64 {
    if state.l != 0 {
        return 0.0;
    }
    let zam = state.z_alpha(k) * k.electron_mass();
    let n = state.n as f64;
    zam.powi(3) / (PI * n.powi(3))
}

/// `⟨p²⟩ = (Zα m)²/n²` by the virial theorem.
pub fn expectation_p_squared(state: &BoundState, k: &PhysicalConstants) -> f64 {
    let zam = state.z_alpha(k) * k.electron_mass();
    let n = state.n as f64;
    zam * zam / (n * n)
}

pub fn transition_frequency(g: &BoundState, e: &BoundState, k: &PhysicalConstants) -> f64 {
    hydrogen_energy(e, k) - hydrogen_energy(g, k)
}

fn check_pair(g: &BoundState, e: &BoundState) -> Result<()> {
    let unsupported = || Error::UnsupportedTransition { ground: g.label.clone(), excited: e.label.clone() };
    if g.z != e.z || g.l.abs_diff(e.l) != 1 {
        return Err(unsupported());
    }
    let (lo, hi) = if g.n <= e.n { (g, e) } else { (e, g) };
    match ((lo.n, lo.l), (hi.n, hi.l)) {
        ((1, 0), (2, 1)) => Ok(()),
        _ => Err(unsupported()),
    }
}

/// Position-form dipole element `|⟨e|z|g⟩|` in units of `1/m`.
///
/// Only 1S–2P(m=0) with linear polarization along z is tabulated:
/// `⟨2p₀|z|1s⟩ = (128√2/243) a₀/Z`.
pub fn dipole_length(g: &BoundState, e: &BoundState, k: &PhysicalConstants) -> Result<f64> {
    check_pair(g, e)?;
    let bohr = 1.0 / (g.z_alpha(k) * k.electron_mass());
    Ok(128.0 * std::f64::consts::SQRT_2 / 243.0 * bohr)
}

/// `|⟨p⟩_eg|² = m² ω_R² |⟨e|z|g⟩|²`.
pub fn dipole_p_squared(g: &BoundState, e: &BoundState, k: &PhysicalConstants) -> Result<f64> {
    let z = dipole_length(g, e, k)?;
    let m = k.electron_mass();
    let w = transition_frequency(g, e, k);
    Ok((m * w * z).powi(2))
}

/// Spontaneous emission rate `Γ = (4/3) α ω³ |⟨r⟩|²` for a single
/// final sublevel.
///
/// For a 1S ground state each 2P magnetic sublevel decays with the same
/// rate, and `Σ_q |⟨1s|r_q|2p_m⟩|² = |⟨2p₀|z|1s⟩|²`, so the z element
/// of [`dipole_length`] is the full vector element here. No averaging
/// factor is applied.
pub fn spontaneous_rate(alpha: f64, omega: f64, dipole_sq: f64) -> f64 {
    4.0 / 3.0 * alpha * omega.powi(3) * dipole_sq
}

/// Einstein-A coefficient of the transition, natural units.
pub fn decay_rate(g: &BoundState, e: &BoundState, k: &PhysicalConstants) -> Result<f64> {
    let z = dipole_length(g, e, k)?;
    let w = transition_frequency(g, e, k).abs();
    Ok(spontaneous_rate(k.alpha, w, z * z))
}
