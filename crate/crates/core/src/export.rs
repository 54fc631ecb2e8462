//! Plain-text interchange: spectra and fit residuals as CSV, reports as JSON.
//!
//! Spectrum CSV has the header `omega,S_inc` and one sample per row, every
//! number in `%.17g` form so that reading it back reproduces the doubles.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::ThreeLorentzianFit;
use crate::mollow::{CorrectionMode, MollowParameters, SpectrumSamples};

pub const SPECTRUM_HEADER: [&str; 2] = ["omega", "S_inc"];
pub const RESIDUAL_HEADER: [&str; 4] = ["omega", "S_inc", "model", "residual"];

/// C's `%.17g`: 17 significant digits, trailing zeros dropped, exponent
/// form outside `1e-4 ≤ |v| < 1e17`.
pub fn format_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_spectrum_csv<W: Write>(out: W, samples: &SpectrumSamples) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SPECTRUM_HEADER).map_err(csv_error)?;
    for (x, y) in samples.omega.iter().zip(&samples.values) {
        w.write_record([format_g17(*x), format_g17(*y)]).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Parse a spectrum CSV. Row numbers in errors are file line numbers.
pub fn read_spectrum_csv<R: Read>(input: R) -> Result<SpectrumSamples> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let header = r.headers().map_err(csv_error)?.clone();
    if header.iter().collect::<Vec<_>>() != SPECTRUM_HEADER {
        return Err(Error::Csv {
            row: 1,
            reason: format!("expected header `omega,S_inc`, got `{}`", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut omega = Vec::new();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_error)?;
        let row = rec.position().map_or(0, |p| p.line());
        let field = |i: usize, name: &str| -> Result<f64> {
            let text = rec.get(i).ok_or_else(|| Error::Csv { row, reason: format!("missing `{name}`") })?;
            let v: f64 =
                text.parse().map_err(|_| Error::Csv { row, reason: format!("`{name}` is not a number: `{text}`") })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Csv { row, reason: format!("`{name}` is not finite") })
            }
        };
        let x = field(0, "omega")?;
        let y = field(1, "S_inc")?;
        if let Some(&prev) = omega.last() {
            if x <= prev {
                return Err(Error::Csv { row, reason: "omega must be strictly increasing".into() });
            }
        }
        omega.push(x);
        values.push(y);
    }
    SpectrumSamples::new(omega, values, None)
}

fn csv_error(e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Csv { row, reason: format!("{other:?}") },
    }
}

/// Data, fitted model and their difference at each sample.
pub fn write_residuals_csv<W: Write>(out: W, samples: &SpectrumSamples, fit: &ThreeLorentzianFit) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESIDUAL_HEADER).map_err(csv_error)?;
    for (x, y) in samples.omega.iter().zip(&samples.values) {
        let m = fit.evaluate(*x);
        w.write_record([format_g17(*x), format_g17(*y), format_g17(m), format_g17(y - m)]).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Frequencies in exported spectra are offsets from the laser frequency.
pub const FRAME_LASER_OFFSET: &str = "offset from laser";

/// Parameter record written beside a spectrum CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub mode: CorrectionMode,
    pub frame: String,
    pub unit: String,
    pub parameters: MollowParameters,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub fit: ThreeLorentzianFit,
    pub half_splitting: f64,
    pub center_std: [Option<f64>; 3],
    pub samples: usize,
}

impl FitReport {
    pub fn new(fit: ThreeLorentzianFit, samples: usize) -> Self {
        let center_std = [0, 1, 2].map(|i| fit.center_std(i));
        Self { half_splitting: fit.half_splitting(), center_std, samples, fit }
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mollow::{mollow_parameters, sample_spectrum, GridSpec};

    #[test]
    fn g17_matches_printf() {
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1e-5, "1.0000000000000001e-05"),
            (123456.0, "123456"),
            (1e17, "1e+17"),
            (0.0001, "0.0001"),
            (26.92582403567252, "26.92582403567252"),
            (6.02214076e23, "6.0221407599999999e+23"),
        ];
        for (v, s) in cases {
            assert_eq!(format_g17(v), s, "{v}");
        }
    }

    #[test]
    fn g17_round_trips() {
        for v in [std::f64::consts::PI, 1.0 / 3.0, 8.074e-13, -7.763e20, 5e-324] {
            assert_eq!(format_g17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn spectrum_csv_round_trip() {
        let p = mollow_parameters(25.0, 10.0, 1.0, 25.0).unwrap();
        let s = sample_spectrum(&p, &GridSpec::new(-40.0, 40.0, 101).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_spectrum_csv(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("omega,S_inc\n"));
        let back = read_spectrum_csv(&buf[..]).unwrap();
        assert_eq!(back.omega, s.omega);
        assert_eq!(back.values, s.values);
    }

    #[test]
    fn bad_rows_are_named() {
        let text = "omega,S_inc\n0,1\n1,2\n2,abc\n";
        match read_spectrum_csv(text.as_bytes()) {
            Err(Error::Csv { row, .. }) => assert_eq!(row, 4),
            other => panic!("{other:?}"),
        }
        let text = "omega,S_inc\n0,1\n1\n";
        assert!(matches!(read_spectrum_csv(text.as_bytes()), Err(Error::Csv { row: 3, .. })));
        let text = "omega,S_inc\n0,1\n0,2\n";
        assert!(matches!(read_spectrum_csv(text.as_bytes()), Err(Error::Csv { row: 3, .. })));
        assert!(matches!(read_spectrum_csv("x,y\n0,1\n".as_bytes()), Err(Error::Csv { row: 1, .. })));
    }
}
