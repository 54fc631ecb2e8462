use thiserror::Error;

use crate::fit::ThreeLorentzianFit;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate drive: Rabi frequency and detuning both vanish")]
    DegenerateDrive,

    #[error("invalid bound state Z={z}, n={n}, l={l}")]
    InvalidState { z: u32, n: u32, l: u32 },

    #[error("unsupported transition {ground} -> {excited}")]
    UnsupportedTransition { ground: String, excited: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("bad grid: {0}")]
    BadGrid(String),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("no local maxima in spectrum")]
    NoPeaks,

    #[error("expected three peaks, found {found}")]
    TooFewPeaks { found: usize },

    #[error("initial peaks {first} and {second} coincide")]
    DegenerateInit { first: usize, second: usize },

    #[error("fit did not converge after {} iterations", .best.iterations)]
    DidNotConverge { best: Box<ThreeLorentzianFit> },

    #[error("singular normal equations")]
    Singular,

    #[error("constants file: {0}")]
    Constants(#[from] toml::de::Error),

    #[error("csv row {row}: {reason}")]
    Csv { row: u64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be positive and finite, got {value}") })
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be finite, got {value}") })
    }
}
