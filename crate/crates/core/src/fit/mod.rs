//! Recovery of Mollow peak positions by damped least squares.
//!
//! The model is the three-Lorentzian form of the incoherent spectrum with
//! an overall `Γ/π` multiplier, fixed from the spectrum metadata unless
//! asked otherwise. Widths and weights are optimized in log space so every
//! iterate is a valid lineshape. Abscissa and ordinate are rescaled
//! internally; reported values are in the units of the input samples.

pub mod model;
mod peaks;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mollow::{CorrectionMode, MollowScenario, SpectrumSamples};
use crate::radiative::fully_dressed_shift;

use model::{ThreePeakModel, PEAKS, PEAK_PARAMS, PER_PEAK};
pub use peaks::{find_peaks, half_width_at_half_max, PeakEstimate};

pub const MIN_FIT_SAMPLES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianPeak {
    pub center: f64,
    pub half_width: f64,
    /// Numerator `Γᵢ·Aᵢ`.
    pub weight: f64,
}

impl LorentzianPeak {
    pub fn new(center: f64, half_width: f64, weight: f64) -> Result<Self> {
        crate::error::require_finite("center", center)?;
        crate::error::require_positive("half_width", half_width)?;
        crate::error::require_positive("weight", weight)?;
        Ok(Self { center, half_width, weight })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeLorentzianFit {
    /// Ordered by center.
    pub peaks: [LorentzianPeak; 3],
    pub overall_scale: f64,
    pub scale_fitted: bool,
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Row-major over `(center, half_width, weight)` per peak, then scale.
    pub covariance: Vec<Vec<f64>>,
}

impl ThreeLorentzianFit {
    /// Initial guess with the given peaks and multiplier.
    pub fn guess(peaks: [LorentzianPeak; 3], overall_scale: f64) -> Self {
        Self {
            peaks,
            overall_scale,
            scale_fitted: false,
            residual_rms: f64::NAN,
            iterations: 0,
            converged: false,
            covariance: Vec::new(),
        }
    }

    pub fn lower(&self) -> &LorentzianPeak {
        &self.peaks[0]
    }

    pub fn central(&self) -> &LorentzianPeak {
        &self.peaks[1]
    }

    pub fn upper(&self) -> &LorentzianPeak {
        &self.peaks[2]
    }

    /// Half the distance between the two sidebands.
    pub fn half_splitting(&self) -> f64 {
        0.5 * (self.upper().center - self.lower().center)
    }

    pub fn evaluate(&self, omega: f64) -> f64 {
        self.overall_scale
            * self
                .peaks
                .iter()
                .map(|p| p.weight / ((omega - p.center).powi(2) + p.half_width * p.half_width))
                .sum::<f64>()
    }

    /// `data − model` at every sample.
    pub fn residuals(&self, samples: &SpectrumSamples) -> Vec<f64> {
        samples.omega.iter().zip(&samples.values).map(|(&w, &v)| v - self.evaluate(w)).collect()
    }

    pub fn center_std(&self, peak: usize) -> Option<f64> {
        let i = peak * PER_PEAK;
        self.covariance.get(i).and_then(|row| row.get(i)).map(|v| v.max(0.0).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub fix_scale: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { max_iter: 200, tol: 1e-12, fix_scale: true }
    }
}

const LAMBDA0: f64 = 1e-3;
const LAMBDA_UP: f64 = 10.0;
const LAMBDA_DOWN: f64 = 0.1;
const LAMBDA_MAX: f64 = 1e30;

/// Seed three peaks from the local maxima of `samples`.
///
/// Maxima are taken tallest first, skipping any closer than three seed
/// widths to one already chosen, which keeps noise ripples on a tall peak
/// from being mistaken for sidebands.
pub fn seed_from_peaks(samples: &SpectrumSamples) -> Result<ThreeLorentzianFit> {
    let found = find_peaks(samples)?;
    let (scale, width) = match &samples.metadata {
        Some(p) => (p.gamma / std::f64::consts::PI, p.gamma),
        None => {
            let w = half_width_at_half_max(samples, found[0].center)
                .filter(|w| *w > 0.0)
                .unwrap_or_else(|| 10.0 * samples.mean_step());
            (1.0, w)
        }
    };
    let mut chosen: Vec<PeakEstimate> = Vec::with_capacity(PEAKS);
    for p in &found {
        if chosen.iter().all(|c| (c.center - p.center).abs() > 3.0 * width) {
            chosen.push(*p);
            if chosen.len() == PEAKS {
                break;
            }
        }
    }
    if chosen.len() < PEAKS {
        return Err(Error::TooFewPeaks { found: chosen.len() });
    }
    chosen.sort_by(|a, b| a.center.total_cmp(&b.center));
    let mut peaks = [LorentzianPeak { center: 0.0, half_width: width, weight: 1.0 }; 3];
    for (dst, src) in peaks.iter_mut().zip(&chosen) {
        dst.center = src.center;
        dst.weight = (src.height.max(f64::MIN_POSITIVE) * width * width / scale).max(f64::MIN_POSITIVE);
    }
    Ok(ThreeLorentzianFit::guess(peaks, scale))
}

struct Problem<'a> {
    x: Vec<f64>,
    y: Vec<f64>,
    model: ThreePeakModel,
    samples: &'a SpectrumSamples,
    x0: f64,
    xs: f64,
    ys: f64,
    scale0: f64,
}

impl Problem<'_> {
    fn cost(&self, q: &[f64]) -> f64 {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(&x, &y)| {
                let r = y - self.model.value(x, q);
                r * r
            })
            .sum::<f64>()
            * 0.5
    }

    /// Normal matrix `JᵀJ` and gradient `Jᵀr`, accumulated row by row.
    fn normal_equations(&self, q: &[f64]) -> (DMatrix<f64>, DVector<f64>) {
        let p = self.model.n_params();
        let mut jtj = DMatrix::zeros(p, p);
        let mut jtr = DVector::zeros(p);
        let mut row = vec![0.0; p];
        for (&x, &y) in self.x.iter().zip(&self.y) {
            let r = y - self.model.value_and_gradient(x, q, &mut row);
            for i in 0..p {
                jtr[i] += row[i] * r;
                for j in 0..=i {
                    jtj[(i, j)] += row[i] * row[j];
                }
            }
        }
        jtj.fill_upper_triangle_with_lower_triangle();
        (jtj, jtr)
    }

    fn to_internal(&self, fit: &ThreeLorentzianFit) -> Vec<f64> {
        let mut q = Vec::with_capacity(self.model.n_params());
        for p in &fit.peaks {
            q.push((p.center - self.x0) / self.xs);
            q.push((p.half_width / self.xs).ln());
            q.push((p.weight * self.scale0 / (self.ys * self.xs * self.xs)).ln());
        }
        if self.model.fit_scale {
            q.push(0.0);
        }
        q
    }

    fn to_physical(&self, q: &[f64], cov_q: Option<&DMatrix<f64>>) -> (ThreeLorentzianFit, Vec<Vec<f64>>) {
        let mut peaks = [LorentzianPeak { center: 0.0, half_width: 1.0, weight: 1.0 }; 3];
        let p = self.model.n_params();
        let mut jac = vec![0.0; p];
        for (k, (peak, qp)) in peaks.iter_mut().zip(q.chunks_exact(PER_PEAK)).enumerate() {
            peak.center = self.x0 + self.xs * qp[0];
            peak.half_width = self.xs * qp[1].exp();
            peak.weight = qp[2].exp() * self.ys * self.xs * self.xs / self.scale0;
            jac[k * PER_PEAK] = self.xs;
            jac[k * PER_PEAK + 1] = peak.half_width;
            jac[k * PER_PEAK + 2] = peak.weight;
        }
        let overall_scale = if self.model.fit_scale {
            let s = self.scale0 * q[PEAK_PARAMS].exp();
            jac[PEAK_PARAMS] = s;
            s
        } else {
            self.scale0
        };
        let covariance = match cov_q {
            Some(c) => (0..p).map(|i| (0..p).map(|j| jac[i] * c[(i, j)] * jac[j]).collect()).collect(),
            None => Vec::new(),
        };
        let mut fit = ThreeLorentzianFit::guess(peaks, overall_scale);
        fit.scale_fitted = self.model.fit_scale;
        (fit, covariance)
    }
}

/// Levenberg–Marquardt fit of three Lorentzians to `samples`.
///
/// Without `init` the peaks are seeded by [`seed_from_peaks`]. A run that
/// exhausts `max_iter` or the damping range without meeting the tolerance
/// returns [`Error::DidNotConverge`] carrying the best parameters found.
pub fn fit_three_lorentzians(
    samples: &SpectrumSamples,
    init: Option<&ThreeLorentzianFit>,
    options: &FitOptions,
) -> Result<ThreeLorentzianFit> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples { needed: MIN_FIT_SAMPLES, got: samples.len() });
    }
    let seeded;
    let init = match init {
        Some(f) => f,
        None => {
            seeded = seed_from_peaks(samples)?;
            &seeded
        }
    };
    for p in &init.peaks {
        LorentzianPeak::new(p.center, p.half_width, p.weight)?;
    }
    crate::error::require_positive("overall_scale", init.overall_scale)?;
    let widest = init.peaks.iter().map(|p| p.half_width).fold(0.0, f64::max);
    for i in 0..PEAKS {
        for j in i + 1..PEAKS {
            if (init.peaks[i].center - init.peaks[j].center).abs() <= 1e-9 * widest {
                return Err(Error::DegenerateInit { first: i, second: j });
            }
        }
    }

    let ys = samples.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if ys == 0.0 {
        return Err(Error::NoPeaks);
    }
    let n = samples.len();
    let x0 = 0.5 * (samples.omega[0] + samples.omega[n - 1]);
    let mut widths: Vec<f64> = init.peaks.iter().map(|p| p.half_width).collect();
    widths.sort_by(f64::total_cmp);
    let xs = widths[1];
    let problem = Problem {
        x: samples.omega.iter().map(|w| (w - x0) / xs).collect(),
        y: samples.values.iter().map(|v| v / ys).collect(),
        model: ThreePeakModel { fixed_scale: 1.0, fit_scale: !options.fix_scale },
        samples,
        x0,
        xs,
        ys,
        scale0: init.overall_scale,
    };

    let p = problem.model.n_params();
    let mut q = problem.to_internal(init);
    let mut cost = problem.cost(&q);
    let mut lambda = LAMBDA0;
    let mut converged = false;
    let mut iterations = 0;

    'outer: while iterations < options.max_iter {
        let (jtj, grad) = problem.normal_equations(&q);
        if grad.amax() < options.tol || cost == 0.0 {
            converged = true;
            break;
        }
        let diag_floor = 1e-12 * jtj.diagonal().max();
        loop {
            iterations += 1;
            let mut damped = jtj.clone();
            for i in 0..p {
                damped[(i, i)] += lambda * jtj[(i, i)].max(diag_floor);
            }
            let step = match damped.cholesky() {
                Some(ch) => ch.solve(&grad),
                None => {
                    lambda *= LAMBDA_UP;
                    if lambda > LAMBDA_MAX || iterations >= options.max_iter {
                        break 'outer;
                    }
                    continue;
                }
            };
            let trial: Vec<f64> = q.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let trial_cost = problem.cost(&trial);
            if trial_cost.is_finite() && trial_cost < cost {
                let decrease = (cost - trial_cost) / cost;
                q = trial;
                cost = trial_cost;
                lambda = (lambda * LAMBDA_DOWN).max(1e-15);
                if decrease < options.tol {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            // A rejected step that changes nothing means we sit at the
            // rounding floor of the cost.
            if trial_cost.is_finite() && (trial_cost - cost) / cost <= options.tol {
                converged = true;
                break 'outer;
            }
            lambda *= LAMBDA_UP;
            if lambda > LAMBDA_MAX || iterations >= options.max_iter {
                break 'outer;
            }
        }
    }

    let (jtj, _) = problem.normal_equations(&q);
    let dof = n.saturating_sub(p).max(1) as f64;
    let sigma2 = 2.0 * cost / dof;
    let cutoff = 1e-14 * jtj.diagonal().amax();
    let cov_q = jtj.pseudo_inverse(cutoff).ok().map(|m| m * sigma2);
    let (mut fit, mut covariance) = problem.to_physical(&q, cov_q.as_ref());
    sort_peaks(&mut fit, &mut covariance);
    fit.covariance = covariance;
    fit.iterations = iterations;
    fit.converged = converged;
    fit.residual_rms = (2.0 * cost / n as f64).sqrt() * ys;
    debug_assert_eq!(problem.samples.len(), n);

    if converged {
        Ok(fit)
    } else {
        Err(Error::DidNotConverge { best: Box::new(fit) })
    }
}

fn sort_peaks(fit: &mut ThreeLorentzianFit, cov: &mut Vec<Vec<f64>>) {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| fit.peaks[a].center.total_cmp(&fit.peaks[b].center));
    if order == [0, 1, 2] {
        return;
    }
    fit.peaks = order.map(|i| fit.peaks[i]);
    if cov.is_empty() {
        return;
    }
    let p = cov.len();
    let index: Vec<usize> =
        order.iter().flat_map(|&k| (0..PER_PEAK).map(move |j| k * PER_PEAK + j)).chain(PEAK_PARAMS..p).collect();
    *cov = index.iter().map(|&i| index.iter().map(|&j| cov[i][j]).collect()).collect();
}

/// Additive white Gaussian noise of standard deviation `sigma`.
pub fn add_gaussian_noise<R: Rng + ?Sized>(
    samples: &SpectrumSamples,
    sigma: f64,
    rng: &mut R,
) -> Result<SpectrumSamples> {
    crate::error::require_positive("sigma", sigma)?;
    let normal =
        Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter { name: "sigma", reason: e.to_string() })?;
    let mut out = samples.clone();
    for v in &mut out.values {
        *v += normal.sample(rng);
    }
    Ok(out)
}

/// Measurement noise relative to the spectrum maximum, with its seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma_rel: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidebandMeasurement {
    pub uncorrected: ThreeLorentzianFit,
    pub bare_corrected: ThreeLorentzianFit,
    pub fully_corrected: ThreeLorentzianFit,
    /// Fully corrected minus uncorrected sideband centers.
    pub delta_plus_measured: f64,
    pub delta_minus_measured: f64,
    /// Fully corrected minus bare-corrected centers: the 𝓒 part alone.
    pub rabi_plus_measured: f64,
    pub rabi_minus_measured: f64,
    /// Fitted upper-sideband half width of the fully corrected spectrum.
    pub sideband_half_width: f64,
    /// `|delta_plus_measured| / sideband_half_width`.
    pub r1_measured: f64,
    /// `|rabi_plus_measured| / sideband_half_width`.
    pub r1_rabi_measured: f64,
    /// Closed-form counterparts.
    pub delta_plus_analytic: f64,
    pub rabi_plus_analytic: f64,
}

fn fit_or_best(samples: &SpectrumSamples, options: &FitOptions) -> Result<ThreeLorentzianFit> {
    match fit_three_lorentzians(samples, None, options) {
        Ok(f) => Ok(f),
        Err(Error::DidNotConverge { best }) => Ok(*best),
        Err(e) => Err(e),
    }
}

/// `samples` plus noise of standard deviation `sigma_rel · max(S)` drawn
/// from a ChaCha8 stream seeded with `seed`.
pub fn add_seeded_noise(samples: &SpectrumSamples, sigma_rel: f64, seed: u64) -> Result<SpectrumSamples> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    add_gaussian_noise(samples, sigma_rel * samples.max_value(), &mut rng)
}

/// Noise seed used for `mode` when one base seed covers all three spectra.
pub fn mode_seed(seed: u64, mode: CorrectionMode) -> u64 {
    let offset = match mode {
        CorrectionMode::None => 0,
        CorrectionMode::Bare => 1,
        CorrectionMode::Full => 2,
    };
    seed.wrapping_add(offset)
}

/// Synthesize, optionally perturb, and fit all three spectra of `scenario`.
///
/// Noise for each spectrum is seeded with [`mode_seed`]. Nonconvergence is
/// reported through each fit's `converged` flag rather than as an error.
pub fn measure_sideband_shift(
    scenario: &MollowScenario,
    options: &FitOptions,
    noise: Option<NoiseSpec>,
) -> Result<SidebandMeasurement> {
    let fit_mode = |mode: CorrectionMode| -> Result<ThreeLorentzianFit> {
        let clean = scenario.spectrum(mode)?;
        let samples = match noise {
            Some(n) => add_seeded_noise(&clean, n.sigma_rel, mode_seed(n.seed, mode))?,
            None => clean,
        };
        fit_or_best(&samples, options)
    };
    let uncorrected = fit_mode(CorrectionMode::None)?;
    let bare_corrected = fit_mode(CorrectionMode::Bare)?;
    let fully_corrected = fit_mode(CorrectionMode::Full)?;

    let delta_plus_measured = fully_corrected.upper().center - uncorrected.upper().center;
    let delta_minus_measured = fully_corrected.lower().center - uncorrected.lower().center;
    let rabi_plus_measured = fully_corrected.upper().center - bare_corrected.upper().center;
    let rabi_minus_measured = fully_corrected.lower().center - bare_corrected.lower().center;
    let sideband_half_width = fully_corrected.upper().half_width;
    let (delta_plus_analytic, _) = fully_dressed_shift(scenario.rabi, scenario.detuning, scenario.c, scenario.l_bare);
    let rabi_plus_analytic =
        scenario.effective_rabi(CorrectionMode::Full) - scenario.effective_rabi(CorrectionMode::Bare);
    Ok(SidebandMeasurement {
        uncorrected,
        bare_corrected,
        fully_corrected,
        delta_plus_measured,
        delta_minus_measured,
        rabi_plus_measured,
        rabi_minus_measured,
        sideband_half_width,
        r1_measured: delta_plus_measured.abs() / sideband_half_width,
        r1_rabi_measured: rabi_plus_measured.abs() / sideband_half_width,
        delta_plus_analytic,
        rabi_plus_analytic,
    })
}
