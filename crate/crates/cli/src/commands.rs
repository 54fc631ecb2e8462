use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use dressed_lamb::export::{
    format_g17, read_spectrum_csv, to_json_pretty, write_residuals_csv, write_spectrum_csv, FitReport,
    FRAME_LASER_OFFSET,
};
use dressed_lamb::feasibility::{
    bloch_siegert_estimate, ratio_r1, ratio_r1_exact, ratio_r2, ratio_r2_pipeline, required_power, zalpha_scaling,
    PowerEstimate, ZAlphaScaling,
};
use dressed_lamb::fit::{add_seeded_noise, mode_seed, NoiseSpec, SidebandMeasurement};
use dressed_lamb::mollow::{GridSpec, MollowParameters, SpectrumSamples};
use dressed_lamb::radiative::{approx_dressed_lamb, RadiativeCorrections};
use dressed_lamb::{
    fit_three_lorentzians, measure_sideband_shift, AtomicTransition, CorrectionMode, Error, FitOptions,
    PhysicalConstants, ThreeLorentzianFit,
};
use serde::{Deserialize, Serialize};

use crate::scenario::{presets_version, Resolved, Scenario};
use crate::{CliError, Format};

const FORMAT_VERSION: u32 = 1;
const FIGURE1: &str = include_str!("../scenarios/figure1.json");

/// Where a report goes: a JSON file, JSON or CSV on stdout, or just the
/// human table.
pub struct Output {
    path: Option<PathBuf>,
    format: Option<Format>,
}

impl Output {
    pub fn new(path: Option<&Path>, format: Option<Format>) -> Self {
        Self { path: path.map(Path::to_path_buf), format }
    }

    fn emit<T: Serialize>(
        &self,
        report: &T,
        table: &[(String, String)],
        rows: &[(String, f64)],
    ) -> Result<(), CliError> {
        let text = match self.format {
            Some(Format::Csv) => {
                let mut s = String::from("quantity,value\n");
                for (k, v) in rows {
                    s.push_str(&format!("{k},{}\n", format_g17(*v)));
                }
                Some(s)
            }
            Some(Format::Json) => Some(to_json_pretty(report)?),
            None if self.path.is_some() => Some(to_json_pretty(report)?),
            None => None,
        };
        match (&self.path, text) {
            (Some(p), Some(t)) => {
                fs::write(p, t).map_err(|e| io_at(p, e))?;
                print_table(table);
            }
            (None, Some(t)) => print!("{t}"),
            (_, None) => print_table(table),
        }
        Ok(())
    }
}

fn io_at(p: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", p.display()))
}

fn print_table(rows: &[(String, String)]) {
    let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<w$}  {v}");
    }
}

fn sci(v: f64) -> String {
    format!("{v:.6e}")
}

fn opt_sci(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), sci)
}

#[derive(Debug, Serialize)]
struct ShiftsReport<'a> {
    format_version: u32,
    scenario: &'a Scenario,
    unit: &'static str,
    mode: CorrectionMode,
    overrides: &'a [&'static str],
    ell: f64,
    #[serde(flatten)]
    shifts: RadiativeCorrections,
    warnings: &'a [String],
}

fn corrections_for(r: &Resolved) -> Result<RadiativeCorrections, CliError> {
    let (c, l) = r.active_coefficients();
    let out = match r.mode() {
        CorrectionMode::None => RadiativeCorrections::none(r.rabi, r.detuning)?,
        CorrectionMode::Full if r.overrides.is_empty() => {
            RadiativeCorrections::from_transition(r.rabi, r.detuning, &r.transition, &r.units)?
        }
        _ => {
            let mut out = RadiativeCorrections::from_coefficients(r.rabi, r.detuning, c, l)?;
            if !r.overrides.contains(&"l_bare") {
                let (lp, lm) = approx_dressed_lamb(out.theta, &r.transition);
                out.dl_app_plus = Some(r.units.from_natural(lp));
                out.dl_app_minus = Some(r.units.from_natural(lm));
            }
            if r.mode() == CorrectionMode::Bare {
                out.dc_plus = Some(0.0);
                out.dc_minus = Some(0.0);
            }
            out
        }
    };
    Ok(out)
}

pub fn shifts(path: &Path, k: &PhysicalConstants, out: &Output) -> Result<(), CliError> {
    let r = Scenario::load(path)?.resolve(k)?;
    warn(&r.warnings);
    let s = corrections_for(&r)?;
    let ell = if r.mode() == CorrectionMode::None { 0.0 } else { r.coefficients.ell };
    let u = r.units.unit_label();
    let report = ShiftsReport {
        format_version: FORMAT_VERSION,
        scenario: &r.scenario,
        unit: u,
        mode: r.mode(),
        overrides: &r.overrides,
        ell,
        shifts: s,
        warnings: &r.warnings,
    };
    let table: Vec<(String, String)> = vec![
        ("mode".into(), r.mode().name().into()),
        ("overrides".into(), if r.overrides.is_empty() { "none".into() } else { r.overrides.join(", ") }),
        ("ell".into(), sci(ell)),
        (format!("L_bare [{u}]"), sci(s.l_bare)),
        ("C".into(), sci(s.c)),
        ("theta [rad]".into(), sci(s.theta)),
        (format!("Omega_R [{u}]"), sci(s.omega_r_gen)),
        (format!("dL_app+ [{u}]"), opt_sci(s.dl_app_plus)),
        (format!("dL_app- [{u}]"), opt_sci(s.dl_app_minus)),
        (format!("dC+ [{u}]"), opt_sci(s.dc_plus)),
        (format!("dC- [{u}]"), opt_sci(s.dc_minus)),
        (format!("Dw+ [{u}]"), sci(s.dw_plus)),
        (format!("Dw- [{u}]"), sci(s.dw_minus)),
        (format!("dw+ [{u}]"), sci(s.small_dw_plus)),
        (format!("dw- [{u}]"), sci(s.small_dw_minus)),
        (format!("full+ [{u}]"), sci(s.full_plus)),
        (format!("full- [{u}]"), sci(s.full_minus)),
    ];
    let mut rows = vec![
        ("ell".to_string(), ell),
        ("l_bare".into(), s.l_bare),
        ("c".into(), s.c),
        ("theta".into(), s.theta),
        ("omega_r".into(), s.omega_r_gen),
    ];
    for (k, v) in [
        ("dl_app_plus", s.dl_app_plus),
        ("dl_app_minus", s.dl_app_minus),
        ("dc_plus", s.dc_plus),
        ("dc_minus", s.dc_minus),
    ] {
        if let Some(v) = v {
            rows.push((k.into(), v));
        }
    }
    rows.extend([
        ("dw_plus".to_string(), s.dw_plus),
        ("dw_minus".into(), s.dw_minus),
        ("small_dw_plus".into(), s.small_dw_plus),
        ("small_dw_minus".into(), s.small_dw_minus),
        ("full_plus".into(), s.full_plus),
        ("full_minus".into(), s.full_minus),
    ]);
    out.emit(&report, &table, &rows)
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

/// Parameter record written beside each spectrum.
#[derive(Debug, Serialize, Deserialize)]
pub struct Sidecar {
    pub format_version: u32,
    pub presets_version: u32,
    pub scenario: Scenario,
    pub mode: CorrectionMode,
    pub frame: String,
    pub unit: String,
    /// Absolute laser frequency in `unit`.
    pub laser_frequency: f64,
    pub grid: GridSpec,
    pub parameters: MollowParameters,
    pub noise: Option<NoiseSpec>,
    pub overrides: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
struct JsonSpectrum<'a> {
    metadata: &'a Sidecar,
    omega: &'a [f64],
    #[serde(rename = "S_inc")]
    s_inc: &'a [f64],
}

fn with_seed(mut scenario: Scenario, seed: Option<u64>) -> Scenario {
    match (seed, scenario.noise.as_mut()) {
        (Some(s), Some(n)) => n.seed = s,
        (Some(_), None) => eprintln!("warning: --seed given but the scenario has no noise"),
        _ => {}
    }
    scenario
}

fn synthesize(r: &Resolved, mode: CorrectionMode) -> Result<(SpectrumSamples, Option<NoiseSpec>), CliError> {
    let clean = r.mollow.spectrum(mode)?;
    match r.scenario.noise {
        Some(n) => {
            let seed = mode_seed(n.seed, mode);
            let noisy = add_seeded_noise(&clean, n.sigma_rel, seed)?;
            Ok((noisy, Some(NoiseSpec { sigma_rel: n.sigma_rel, seed })))
        }
        None => Ok((clean, None)),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_at(path, e))
}

fn write_spectrum(
    dir: &Path,
    stem: &str,
    r: &Resolved,
    mode: CorrectionMode,
    format: Format,
) -> Result<PathBuf, CliError> {
    let (samples, noise) = synthesize(r, mode)?;
    let meta = Sidecar {
        format_version: FORMAT_VERSION,
        presets_version: presets_version(),
        scenario: r.scenario.clone(),
        mode,
        frame: FRAME_LASER_OFFSET.into(),
        unit: r.units.unit_label().into(),
        laser_frequency: r.omega_l,
        grid: r.mollow.grid(),
        parameters: r.mollow.parameters(mode)?,
        noise,
        overrides: r.overrides.iter().map(|s| s.to_string()).collect(),
        warnings: r.warnings.clone(),
    };
    let json_path = dir.join(format!("{stem}.json"));
    match format {
        Format::Csv => {
            let csv_path = dir.join(format!("{stem}.csv"));
            let mut w = create(&csv_path)?;
            write_spectrum_csv(&mut w, &samples)?;
            w.flush().map_err(|e| io_at(&csv_path, e))?;
            fs::write(&json_path, to_json_pretty(&meta)?).map_err(|e| io_at(&json_path, e))?;
            Ok(csv_path)
        }
        Format::Json => {
            let doc = JsonSpectrum { metadata: &meta, omega: &samples.omega, s_inc: &samples.values };
            fs::write(&json_path, to_json_pretty(&doc)?).map_err(|e| io_at(&json_path, e))?;
            Ok(json_path)
        }
    }
}

pub fn spectrum(
    path: &Path,
    k: &PhysicalConstants,
    dir: &Path,
    modes: &[CorrectionMode],
    format: Format,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let r = with_seed(Scenario::load(path)?, seed).resolve(k)?;
    warn(&r.warnings);
    r.mollow.grid().validate()?;
    fs::create_dir_all(dir).map_err(|e| io_at(dir, e))?;
    let modes = if modes.is_empty() { vec![r.mode()] } else { modes.to_vec() };
    for mode in modes {
        let written = write_spectrum(dir, &format!("spectrum_{}", mode.name()), &r, mode, format)?;
        println!("{}", written.display());
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct Comparison {
    measured: f64,
    analytic: f64,
}

#[derive(Debug, Serialize)]
struct ScenarioFitReport<'a> {
    format_version: u32,
    scenario: &'a Scenario,
    unit: &'static str,
    converged: bool,
    half_splitting_none: Comparison,
    half_splitting_bare: Comparison,
    half_splitting_full: Comparison,
    full_shift_plus: Comparison,
    rabi_shift_plus: Comparison,
    r1_measured: f64,
    r1_rabi_measured: f64,
    r1_estimate: f64,
    measurement: &'a SidebandMeasurement,
}

pub fn fit_scenario(
    path: &Path,
    k: &PhysicalConstants,
    opts: &FitOptions,
    seed: Option<u64>,
    out: &Output,
    residuals: Option<&Path>,
) -> Result<(), CliError> {
    let r = with_seed(Scenario::load(path)?, seed).resolve(k)?;
    warn(&r.warnings);
    let noise = r.scenario.noise.map(|n| NoiseSpec { sigma_rel: n.sigma_rel, seed: n.seed });
    let m = measure_sideband_shift(&r.mollow, opts, noise)?;
    let sc = &r.mollow;
    let cmp =
        |f: &ThreeLorentzianFit, mode| Comparison { measured: f.half_splitting(), analytic: sc.effective_rabi(mode) };
    let converged = m.uncorrected.converged && m.bare_corrected.converged && m.fully_corrected.converged;
    let report = ScenarioFitReport {
        format_version: FORMAT_VERSION,
        scenario: &r.scenario,
        unit: r.units.unit_label(),
        converged,
        half_splitting_none: cmp(&m.uncorrected, CorrectionMode::None),
        half_splitting_bare: cmp(&m.bare_corrected, CorrectionMode::Bare),
        half_splitting_full: cmp(&m.fully_corrected, CorrectionMode::Full),
        full_shift_plus: Comparison { measured: m.delta_plus_measured, analytic: m.delta_plus_analytic },
        rabi_shift_plus: Comparison { measured: m.rabi_plus_measured, analytic: m.rabi_plus_analytic },
        r1_measured: m.r1_measured,
        r1_rabi_measured: m.r1_rabi_measured,
        r1_estimate: ratio_r1(r.h, r.c),
        measurement: &m,
    };
    if let Some(p) = residuals {
        let (samples, _) = synthesize(&r, CorrectionMode::Full)?;
        let mut w = create(p)?;
        write_residuals_csv(&mut w, &samples, &m.fully_corrected)?;
        w.flush().map_err(|e| io_at(p, e))?;
    }
    if !converged {
        eprintln!("warning: at least one fit did not converge");
    }
    let u = r.units.unit_label();
    let pair = |c: &Comparison| format!("{}  {}", sci(c.measured), sci(c.analytic));
    let table = vec![
        ("quantity".to_string(), "measured       analytic".to_string()),
        (format!("Omega_R none [{u}]"), pair(&report.half_splitting_none)),
        (format!("Omega_R bare [{u}]"), pair(&report.half_splitting_bare)),
        (format!("Omega_R full [{u}]"), pair(&report.half_splitting_full)),
        (format!("full+ [{u}]"), pair(&report.full_shift_plus)),
        (format!("C part of full+ [{u}]"), pair(&report.rabi_shift_plus)),
        ("r1 (full shift / fitted width)".into(), sci(m.r1_measured)),
        ("r1 (C part / fitted width)".into(), sci(m.r1_rabi_measured)),
        ("r1 estimate h*C".into(), sci(report.r1_estimate)),
        ("converged".into(), converged.to_string()),
    ];
    if out.format == Some(Format::Csv) {
        return Err(CliError::Validation("fit reports are JSON; use --format json".into()));
    }
    out.emit(&report, &table, &[])
}

#[derive(Debug, Serialize)]
struct CsvFitReport {
    format_version: u32,
    source: String,
    metadata_from: Option<String>,
    converged: bool,
    #[serde(flatten)]
    report: FitReport,
}

#[derive(Deserialize)]
struct SidecarParameters {
    parameters: MollowParameters,
}

pub fn fit_csv(path: &Path, opts: &FitOptions, out: &Output, residuals: Option<&Path>) -> Result<(), CliError> {
    let file = File::open(path).map_err(|e| io_at(path, e))?;
    let mut samples = read_spectrum_csv(file).map_err(|e| match e {
        Error::Io(io) => io_at(path, io),
        other => CliError::Validation(format!("{}: {other}", path.display())),
    })?;
    let sidecar = path.with_extension("json");
    let mut metadata_from = None;
    if let Ok(text) = fs::read_to_string(&sidecar) {
        if let Ok(meta) = serde_json::from_str::<SidecarParameters>(&text) {
            samples.metadata = Some(meta.parameters);
            metadata_from = Some(sidecar.display().to_string());
        }
    }
    let fit = match fit_three_lorentzians(&samples, None, opts) {
        Ok(f) => f,
        Err(Error::DidNotConverge { best }) => {
            eprintln!("warning: fit did not converge");
            *best
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(p) = residuals {
        let mut w = create(p)?;
        write_residuals_csv(&mut w, &samples, &fit)?;
        w.flush().map_err(|e| io_at(p, e))?;
    }
    let report = CsvFitReport {
        format_version: FORMAT_VERSION,
        source: path.display().to_string(),
        metadata_from,
        converged: fit.converged,
        report: FitReport::new(fit, samples.len()),
    };
    let f = &report.report.fit;
    let mut table: Vec<(String, String)> = ["lower", "central", "upper"]
        .iter()
        .zip(&f.peaks)
        .map(|(name, p)| {
            (
                format!("{name} center / half width / weight"),
                format!("{}  {}  {}", sci(p.center), sci(p.half_width), sci(p.weight)),
            )
        })
        .collect();
    table.push(("half splitting".into(), sci(f.half_splitting())));
    table.push(("overall scale".into(), sci(f.overall_scale)));
    table.push(("residual rms".into(), sci(f.residual_rms)));
    table.push(("iterations".into(), f.iterations.to_string()));
    table.push(("converged".into(), f.converged.to_string()));
    if out.format == Some(Format::Csv) {
        return Err(CliError::Validation("fit reports are JSON; use --format json".into()));
    }
    out.emit(&report, &table, &[])
}

#[derive(Debug, Serialize)]
struct FeasibilityReport {
    format_version: u32,
    z: u32,
    h: f64,
    c: f64,
    gamma_si: f64,
    r1_estimate: f64,
    r1_exact: f64,
    r2_estimate: f64,
    r2_pipeline: f64,
    bloch_siegert_si: f64,
    bloch_siegert_over_gamma: f64,
    waist_over_lambda: f64,
    power: PowerEstimate,
    available_power: f64,
    power_gap: f64,
    scaling: ZAlphaScaling,
}

pub fn feasibility(
    k: &PhysicalConstants,
    z: u32,
    h: f64,
    waist_over_lambda: f64,
    available_power: f64,
    out: &Output,
) -> Result<(), CliError> {
    for (name, v) in [("h", h), ("waist-over-lambda", waist_over_lambda), ("available-power", available_power)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Validation(format!("--{name} must be positive, got {v}")));
        }
    }
    if z == 0 {
        return Err(CliError::Validation("--z must be at least 1".into()));
    }
    let tr = AtomicTransition::lyman_alpha(z, k)?;
    let c = dressed_lamb::radiative::radiative_rabi_coefficient(&tr);
    let to_si = k.natural_to_rad_per_s();
    let bs = bloch_siegert_estimate(h * tr.gamma, tr.omega_r)?;
    let lambda = dressed_lamb::feasibility::wavelength(&tr, k);
    let power = required_power(h, &tr, waist_over_lambda * lambda, k)?;
    let report = FeasibilityReport {
        format_version: FORMAT_VERSION,
        z,
        h,
        c,
        gamma_si: tr.gamma * to_si,
        r1_estimate: ratio_r1(h, c),
        r1_exact: ratio_r1_exact(h * tr.gamma, 0.0, c, tr.gamma)?,
        r2_estimate: ratio_r2(z, h, k)?,
        r2_pipeline: ratio_r2_pipeline(&tr, h)?,
        bloch_siegert_si: bs * to_si,
        bloch_siegert_over_gamma: bs / tr.gamma,
        waist_over_lambda,
        power,
        available_power,
        power_gap: power.gap(available_power),
        scaling: zalpha_scaling(z, k)?,
    };
    let table = vec![
        ("Z".to_string(), z.to_string()),
        ("h = Omega/Gamma".into(), sci(h)),
        ("C".into(), sci(c)),
        ("Gamma [1/s]".into(), sci(report.gamma_si)),
        ("r1 estimate h*C".into(), sci(report.r1_estimate)),
        ("r1 exact at resonance".into(), sci(report.r1_exact)),
        ("r2 estimate".into(), sci(report.r2_estimate)),
        ("r2 full pipeline".into(), sci(report.r2_pipeline)),
        ("Bloch-Siegert [rad/s]".into(), sci(report.bloch_siegert_si)),
        ("Bloch-Siegert / Gamma".into(), sci(report.bloch_siegert_over_gamma)),
        ("wavelength [m]".into(), sci(power.wavelength)),
        ("beam waist [m]".into(), sci(power.beam_waist)),
        ("dipole moment [C m]".into(), sci(power.dipole_moment)),
        ("field amplitude [V/m]".into(), sci(power.field_amplitude)),
        ("intensity [W/m^2]".into(), sci(power.intensity)),
        ("required power [W]".into(), sci(power.power)),
        ("available power [W]".into(), sci(available_power)),
        ("power gap".into(), sci(report.power_gap)),
    ];
    let rows: Vec<(String, f64)> = [
        ("z", z as f64),
        ("h", h),
        ("c", c),
        ("gamma_si", report.gamma_si),
        ("r1_estimate", report.r1_estimate),
        ("r1_exact", report.r1_exact),
        ("r2_estimate", report.r2_estimate),
        ("r2_pipeline", report.r2_pipeline),
        ("bloch_siegert_si", report.bloch_siegert_si),
        ("bloch_siegert_over_gamma", report.bloch_siegert_over_gamma),
        ("wavelength", power.wavelength),
        ("beam_waist", power.beam_waist),
        ("dipole_moment", power.dipole_moment),
        ("field_amplitude", power.field_amplitude),
        ("intensity", power.intensity),
        ("power", power.power),
        ("available_power", available_power),
        ("power_gap", report.power_gap),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    out.emit(&report, &table, &rows)
}

#[derive(Debug, Serialize)]
struct Curve {
    file: String,
    panel: &'static str,
    mode: CorrectionMode,
    half_splitting: f64,
}

#[derive(Debug, Serialize)]
struct Manifest {
    format_version: u32,
    scenario: Scenario,
    frame: &'static str,
    unit: &'static str,
    grid: GridSpec,
    curves: Vec<Curve>,
}

pub fn figure1(dir: &Path, k: &PhysicalConstants) -> Result<(), CliError> {
    let r = Scenario::from_json(FIGURE1)?.resolve(k)?;
    fs::create_dir_all(dir).map_err(|e| io_at(dir, e))?;
    let layout = [
        ("a", CorrectionMode::None),
        ("a", CorrectionMode::Bare),
        ("b", CorrectionMode::Bare),
        ("b", CorrectionMode::Full),
    ];
    let mut curves = Vec::new();
    for (panel, mode) in layout {
        let name = format!("figure1_{panel}_{}.csv", mode.name());
        let path = dir.join(&name);
        let samples = r.mollow.spectrum(mode)?;
        let mut w = create(&path)?;
        write_spectrum_csv(&mut w, &samples)?;
        w.flush().map_err(|e| io_at(&path, e))?;
        curves.push(Curve { file: name, panel, mode, half_splitting: r.mollow.effective_rabi(mode) });
    }
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        scenario: r.scenario.clone(),
        frame: FRAME_LASER_OFFSET,
        unit: r.units.unit_label(),
        grid: r.mollow.grid(),
        curves,
    };
    let path = dir.join("manifest.json");
    fs::write(&path, to_json_pretty(&manifest)?).map_err(|e| io_at(&path, e))?;
    for c in &manifest.curves {
        println!("{}  panel {}  {:<4}  half splitting {}", c.file, c.panel, c.mode.name(), sci(c.half_splitting));
    }
    Ok(())
}
