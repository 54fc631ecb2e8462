use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dressed_lamb::mollow::CorrectionMode;
use dressed_lamb::PhysicalConstants;

mod commands;
mod scenario;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("io: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 2,
            Self::Io(_) => 3,
            Self::Numerical(_) => 4,
        }
    }
}

impl From<dressed_lamb::Error> for CliError {
    fn from(e: dressed_lamb::Error) -> Self {
        use dressed_lamb::Error as E;
        match e {
            E::Io(io) => Self::Io(io.to_string()),
            E::NoPeaks | E::TooFewPeaks { .. } | E::DegenerateInit { .. } | E::DidNotConverge { .. } | E::Singular => {
                Self::Numerical(e.to_string())
            }
            other => Self::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    None,
    Bare,
    Full,
}

impl From<ModeArg> for CorrectionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::None => CorrectionMode::None,
            ModeArg::Bare => CorrectionMode::Bare,
            ModeArg::Full => CorrectionMode::Full,
        }
    }
}

/// Radiative shifts of laser-dressed atoms and the corrected Mollow triplet.
#[derive(Debug, Parser)]
#[command(name = "dressed-lamb", version)]
struct Cli {
    /// TOML file overriding any of the frozen physical constants.
    #[arg(long, global = true)]
    constants: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bare, dressed and resummed shifts for one drive point.
    Shifts {
        #[arg(long)]
        scenario: PathBuf,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Sample the incoherent spectrum for one or more correction modes.
    Spectrum {
        #[arg(long)]
        scenario: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Repeatable; defaults to the scenario's correction mode.
        #[arg(long, value_enum)]
        mode: Vec<ModeArg>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Overrides the scenario's noise seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fit three Lorentzians to a spectrum CSV, or measure a scenario's shifts.
    Fit {
        #[arg(long, conflicts_with = "csv", required_unless_present = "csv")]
        scenario: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Residual CSV of the (fully corrected) fit.
        #[arg(long)]
        residuals: Option<PathBuf>,
        /// Fit the overall Γ/π multiplier as well.
        #[arg(long)]
        fit_scale: bool,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Order-of-magnitude feasibility of observing the dressed shift.
    Feasibility {
        #[arg(long, default_value_t = 1)]
        z: u32,
        #[arg(long, default_value_t = 1000.0)]
        h: f64,
        #[arg(long, default_value_t = 1.0)]
        waist_over_lambda: f64,
        /// Available laser power in W.
        #[arg(long, default_value_t = 20e-9)]
        available_power: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Write the four curves of the illustrative two-panel figure.
    Figure1 {
        #[arg(long)]
        out: PathBuf,
    },
}

fn constants(path: Option<&Path>) -> Result<PhysicalConstants, CliError> {
    let Some(p) = path else {
        return Ok(PhysicalConstants::codata2018());
    };
    let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    PhysicalConstants::from_toml_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let k = &constants(cli.constants.as_deref())?;
    match cli.command {
        Command::Shifts { scenario, out, format } => {
            commands::shifts(&scenario, k, &commands::Output::new(out.as_deref(), format))
        }
        Command::Spectrum { scenario, out, mode, format, seed } => {
            let modes: Vec<CorrectionMode> = mode.into_iter().map(Into::into).collect();
            commands::spectrum(&scenario, k, &out, &modes, format, seed)
        }
        Command::Fit { scenario, csv, out, format, residuals, fit_scale, max_iter, seed } => {
            let opts = dressed_lamb::FitOptions { max_iter, fix_scale: !fit_scale, ..Default::default() };
            let target = commands::Output::new(out.as_deref(), format);
            match (scenario, csv) {
                (Some(s), _) => commands::fit_scenario(&s, k, &opts, seed, &target, residuals.as_deref()),
                (None, Some(c)) => commands::fit_csv(&c, &opts, &target, residuals.as_deref()),
                (None, None) => Err(CliError::Validation("fit needs --scenario or --csv".into())),
            }
        }
        Command::Feasibility { z, h, waist_over_lambda, available_power, out, format } => commands::feasibility(
            k,
            z,
            h,
            waist_over_lambda,
            available_power,
            &commands::Output::new(out.as_deref(), format),
        ),
        Command::Figure1 { out } => commands::figure1(&out, k),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
