//! Secular-limit incoherent Mollow spectrum with optional radiative
//! corrections applied through the generalized Rabi frequency.

use serde::{Deserialize, Serialize};

use crate::dressed::generalized_rabi;
use crate::error::{require_finite, require_positive, Error, Result};
use crate::radiative::corrected_half_splitting;

/// Which radiative correction enters Ω_R.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrectionMode {
    None,
    Bare,
    #[default]
    Full,
}

impl CorrectionMode {
    pub const ALL: [CorrectionMode; 3] = [Self::None, Self::Bare, Self::Full];

    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Bare => "bare",
            Self::Full => "full",
        }
    }
}

impl std::str::FromStr for CorrectionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "none" => Ok(Self::None),
            "bare" => Ok(Self::Bare),
            "full" => Ok(Self::Full),
            other => Err(format!("unknown correction mode `{other}` (none|bare|full)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollowParameters {
    pub a0_inc: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub gamma0: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub omega_r_eff: f64,
    pub omega_l: f64,
    pub gamma: f64,
}

/// Lineshape parameters with `omega_r_eff` substituted for every Ω_R,
/// raw Ω and Δ elsewhere. Centered at zero; see [`MollowParameters::centered_at`].
pub fn mollow_parameters(rabi: f64, detuning: f64, gamma: f64, omega_r_eff: f64) -> Result<MollowParameters> {
    if rabi == 0.0 {
        return Err(Error::DegenerateDrive);
    }
    require_positive("rabi", rabi)?;
    require_positive("gamma", gamma)?;
    require_positive("omega_r_eff", omega_r_eff)?;
    require_finite("detuning", detuning)?;

    let o2 = rabi * rabi;
    let d2 = detuning * detuning;
    let r2 = omega_r_eff * omega_r_eff;
    let a0_inc = o2 * o2 * o2 / (4.0 * r2 * (r2 + d2).powi(2));
    let a_side = o2 * o2 / (8.0 * r2 * (r2 + d2));
    let gamma0 = gamma * (o2 + 2.0 * d2) / (2.0 * r2);
    let gamma_side = gamma * (3.0 * o2 + 2.0 * d2) / (4.0 * r2);
    Ok(MollowParameters {
        a0_inc,
        a_plus: a_side,
        a_minus: a_side,
        gamma0,
        gamma_plus: gamma_side,
        gamma_minus: gamma_side,
        omega_r_eff,
        omega_l: 0.0,
        gamma,
    })
}

impl MollowParameters {
    pub fn centered_at(mut self, omega_l: f64) -> Self {
        self.omega_l = omega_l;
        self
    }

    /// `∫ S_inc dω = Γ (A₀ + A₊ + A₋)`.
    pub fn total_weight(&self) -> f64 {
        self.gamma * (self.a0_inc + self.a_plus + self.a_minus)
    }

    pub fn evaluate(&self, omega: f64) -> f64 {
        incoherent_spectrum(omega, self)
    }
}

/// `Ω_R → √(Ω²(1−𝓒)² + (Δ−L_bare)²)`.
pub fn corrected_generalized_rabi(rabi: f64, detuning: f64, c: f64, l_bare: f64) -> f64 {
    corrected_half_splitting(rabi, detuning, c, l_bare)
}

fn lorentz(x: f64, width: f64, amp: f64) -> f64 {
    width * amp / (x * x + width * width)
}

pub fn incoherent_spectrum(omega: f64, p: &MollowParameters) -> f64 {
    let x = omega - p.omega_l;
    p.gamma / std::f64::consts::PI
        * (lorentz(x, p.gamma0, p.a0_inc)
            + (lorentz(x - p.omega_r_eff, p.gamma_plus, p.a_plus)
                + lorentz(x + p.omega_r_eff, p.gamma_minus, p.a_minus)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let g = Self { min, max, count };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::BadGrid(format!("need at least 2 points, got {}", self.count)));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.max <= self.min {
            return Err(Error::BadGrid(format!("need min < max, got [{}, {}]", self.min, self.max)));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    /// Point `i`. Endpoints are exact, and a grid centred on zero is
    /// exactly mirror symmetric.
    pub fn point(&self, i: usize) -> f64 {
        let last = self.count - 1;
        match i {
            0 => self.min,
            i if i == last => self.max,
            i => (self.min * (last - i) as f64 + self.max * i as f64) / last as f64,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }

    /// Same grid moved by `offset`.
    pub fn shifted(&self, offset: f64) -> Self {
        Self { min: self.min + offset, max: self.max + offset, count: self.count }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSamples {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub metadata: Option<MollowParameters>,
}

impl SpectrumSamples {
    pub fn new(omega: Vec<f64>, values: Vec<f64>, metadata: Option<MollowParameters>) -> Result<Self> {
        if omega.len() != values.len() {
            return Err(Error::BadGrid(format!("{} frequencies but {} values", omega.len(), values.len())));
        }
        if omega.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::BadGrid("frequencies must be strictly increasing".into()));
        }
        Ok(Self { omega, values, metadata })
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Largest sample value.
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Mean spacing of the frequency grid.
    pub fn mean_step(&self) -> f64 {
        match self.omega.len() {
            0 | 1 => 0.0,
            n => (self.omega[n - 1] - self.omega[0]) / (n - 1) as f64,
        }
    }
}

pub fn sample_spectrum(params: &MollowParameters, grid: &GridSpec) -> Result<SpectrumSamples> {
    grid.validate()?;
    let omega = grid.points();
    let values = omega.iter().map(|&w| incoherent_spectrum(w, params)).collect();
    Ok(SpectrumSamples { omega, values, metadata: Some(*params) })
}

/// Drive, decay and correction inputs for one set of comparable spectra.
/// All frequencies share one unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollowScenario {
    pub rabi: f64,
    pub detuning: f64,
    pub gamma: f64,
    pub c: f64,
    pub l_bare: f64,
    #[serde(default)]
    pub omega_l: f64,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Also replace Δ by Δ − L_bare inside the amplitudes and widths.
    #[serde(default)]
    pub shift_detuning_in_lineshape: bool,
}

impl MollowScenario {
    pub fn new(rabi: f64, detuning: f64, gamma: f64, c: f64, l_bare: f64) -> Self {
        Self { rabi, detuning, gamma, c, l_bare, omega_l: 0.0, grid: None, shift_detuning_in_lineshape: false }
    }

    pub fn with_grid(mut self, grid: GridSpec) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn effective_rabi(&self, mode: CorrectionMode) -> f64 {
        match mode {
            CorrectionMode::None => generalized_rabi(self.rabi, self.detuning),
            CorrectionMode::Bare => corrected_generalized_rabi(self.rabi, self.detuning, 0.0, self.l_bare),
            CorrectionMode::Full => corrected_generalized_rabi(self.rabi, self.detuning, self.c, self.l_bare),
        }
    }

    pub fn parameters(&self, mode: CorrectionMode) -> Result<MollowParameters> {
        let detuning = if self.shift_detuning_in_lineshape && mode != CorrectionMode::None {
            self.detuning - self.l_bare
        } else {
            self.detuning
        };
        Ok(mollow_parameters(self.rabi, detuning, self.gamma, self.effective_rabi(mode))?.centered_at(self.omega_l))
    }

    /// Symmetric about ω_L, wide enough for the widest of the three spectra:
    /// `ω_L ± (1.5 Ω_R,eff + 10Γ)` at 8001 points.
    pub fn default_grid(&self) -> GridSpec {
        let widest = CorrectionMode::ALL.iter().map(|&m| self.effective_rabi(m)).fold(0.0, f64::max);
        let half = 1.5 * widest + 10.0 * self.gamma;
        GridSpec { min: self.omega_l - half, max: self.omega_l + half, count: 8001 }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid.unwrap_or_else(|| self.default_grid())
    }

    pub fn spectrum(&self, mode: CorrectionMode) -> Result<SpectrumSamples> {
        sample_spectrum(&self.parameters(mode)?, &self.grid())
    }

    /// Warnings about leaving the regime where the lineshape is valid.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for m in CorrectionMode::ALL {
            let r = self.effective_rabi(m);
            if r < 10.0 * self.gamma {
                out.push(format!(
                    "{}: Omega_R/Gamma = {:.3} < 10, outside the secular regime",
                    m.name(),
                    r / self.gamma
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTriple {
    pub uncorrected: SpectrumSamples,
    pub bare_corrected: SpectrumSamples,
    pub fully_corrected: SpectrumSamples,
}

impl SpectrumTriple {
    pub fn get(&self, mode: CorrectionMode) -> &SpectrumSamples {
        match mode {
            CorrectionMode::None => &self.uncorrected,
            CorrectionMode::Bare => &self.bare_corrected,
            CorrectionMode::Full => &self.fully_corrected,
        }
    }
}

/// The three spectra on one shared grid.
pub fn spectrum_pair(scenario: &MollowScenario) -> Result<SpectrumTriple> {
    Ok(SpectrumTriple {
        uncorrected: scenario.spectrum(CorrectionMode::None)?,
        bare_corrected: scenario.spectrum(CorrectionMode::Bare)?,
        fully_corrected: scenario.spectrum(CorrectionMode::Full)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> MollowScenario {
        MollowScenario::new(25.0, 10.0, 1.0, 0.02, 5.0)
    }

    #[test]
    fn resonant_secular_values() {
        let p = mollow_parameters(17.0, 0.0, 2.0, 17.0).unwrap();
        assert!((p.a0_inc - 0.25).abs() < 1e-15);
        assert!((p.a_plus - 0.125).abs() < 1e-15);
        assert!((p.gamma0 - 1.0).abs() < 1e-15);
        assert!((p.gamma_plus - 1.5).abs() < 1e-15);
        assert_eq!(p.a_plus, p.a_minus);
        assert_eq!(p.gamma_plus, p.gamma_minus);
    }

    #[test]
    fn illustrative_uncorrected_values() {
        let r = 725f64.sqrt();
        let p = mollow_parameters(25.0, 10.0, 1.0, r).unwrap();
        assert!((p.a0_inc - 0.123_689_876_824_673_06).abs() < 1e-14);
        assert!((p.a_plus - 0.081_635_318_704_284_22).abs() < 1e-14);
        assert!((p.gamma0 - 0.568_965_517_241_379_3).abs() < 1e-14);
        assert!((p.gamma_plus - 0.715_517_241_379_310_3).abs() < 1e-14);
    }

    #[test]
    fn amplitudes_are_scale_invariant() {
        let a = mollow_parameters(3.0, 1.0, 1.0, 10f64.sqrt()).unwrap();
        let b = mollow_parameters(30.0, 10.0, 1.0, 1000f64.sqrt()).unwrap();
        assert!((a.a0_inc - b.a0_inc).abs() < 1e-15);
        assert!((a.a_plus - b.a_plus).abs() < 1e-15);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(mollow_parameters(0.0, 1.0, 1.0, 1.0), Err(Error::DegenerateDrive)));
        assert!(mollow_parameters(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(mollow_parameters(-1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn corrected_rabi_limits() {
        assert_eq!(corrected_generalized_rabi(25.0, 10.0, 0.0, 0.0), generalized_rabi(25.0, 10.0));
        assert!((corrected_generalized_rabi(25.0, 10.0, 0.02, 5.0) - 25.005).abs() < 1e-4);
        assert_eq!(corrected_generalized_rabi(25.0, 10.0, 0.0, 5.0), generalized_rabi(25.0, 5.0));
    }

    #[test]
    fn spectrum_tails_and_symmetry() {
        let p = mollow_parameters(20.0, 0.0, 1.0, 20.0).unwrap();
        assert!(incoherent_spectrum(1e12, &p) < 1e-20);
        assert!(incoherent_spectrum(-1e12, &p) < 1e-20);
        for x in [0.0, 0.3, 7.7, 19.9, 20.0, 55.0] {
            assert_eq!(incoherent_spectrum(x, &p), incoherent_spectrum(-x, &p));
        }
        // Away from zero the offsets themselves round differently.
        let q = p.centered_at(3.0);
        for x in [0.3, 7.7, 19.9] {
            let (a, b) = (incoherent_spectrum(3.0 + x, &q), incoherent_spectrum(3.0 - x, &q));
            assert!((a - b).abs() <= 1e-13 * a);
        }
    }

    #[test]
    fn grid_validation_and_endpoints() {
        assert!(matches!(GridSpec::new(0.0, 1.0, 1), Err(Error::BadGrid(_))));
        assert!(matches!(GridSpec::new(1.0, 1.0, 10), Err(Error::BadGrid(_))));
        let g = GridSpec::new(-2.0, 3.0, 2).unwrap();
        assert_eq!(g.points(), vec![-2.0, 3.0]);
        let p = mollow_parameters(20.0, 0.0, 1.0, 20.0).unwrap();
        let s = sample_spectrum(&p, &g).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.values.iter().all(|&v| v >= 0.0));
        assert!(SpectrumSamples::new(vec![0.0, 0.0], vec![1.0, 1.0], None).is_err());
        assert!(SpectrumSamples::new(vec![0.0, 1.0], vec![1.0], None).is_err());
    }

    #[test]
    fn triple_offsets_from_laser() {
        let sc = fig1();
        assert!((sc.effective_rabi(CorrectionMode::None) - 26.925_824_035_672_52).abs() < 1e-12);
        assert!((sc.effective_rabi(CorrectionMode::Bare) - 25.495_097_567_963_924).abs() < 1e-12);
        assert!((sc.effective_rabi(CorrectionMode::Full) - 25.004_999_500_099_975).abs() < 1e-12);
        let t = spectrum_pair(&sc).unwrap();
        assert_eq!(t.uncorrected.omega, t.fully_corrected.omega);
        let same = spectrum_pair(&MollowScenario::new(25.0, 10.0, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(same.uncorrected.values, same.bare_corrected.values);
        assert_eq!(same.uncorrected.values, same.fully_corrected.values);
    }

    #[test]
    fn argmax_tracks_sidebands() {
        let sc = fig1().with_grid(GridSpec::new(-40.0, 40.0, 8001).unwrap());
        let step = sc.grid().step();
        for mode in CorrectionMode::ALL {
            let s = sc.spectrum(mode).unwrap();
            let r = sc.effective_rabi(mode);
            let upper =
                s.omega.iter().zip(&s.values).filter(|(w, _)| **w > 10.0).max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
            assert!((upper.0 - r).abs() <= step, "{mode:?}");
        }
    }

    #[test]
    fn warns_outside_secular_regime() {
        assert!(fig1().warnings().is_empty());
        assert_eq!(MollowScenario::new(5.0, 0.0, 1.0, 0.0, 0.0).warnings().len(), 3);
    }

    #[test]
    fn lineshape_detuning_flag() {
        let mut sc = fig1();
        let a = sc.parameters(CorrectionMode::Bare).unwrap();
        sc.shift_detuning_in_lineshape = true;
        let b = sc.parameters(CorrectionMode::Bare).unwrap();
        assert_eq!(a.omega_r_eff, b.omega_r_eff);
        assert!(a.a0_inc != b.a0_inc);
        assert_eq!(sc.parameters(CorrectionMode::None).unwrap(), fig1().parameters(CorrectionMode::None).unwrap());
    }
}
