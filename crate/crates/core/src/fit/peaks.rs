use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mollow::SpectrumSamples;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakEstimate {
    pub center: f64,
    pub height: f64,
}

/// Vertex of the parabola through three points.
fn vertex(x: [f64; 3], f: [f64; 3]) -> Option<(f64, f64)> {
    let (a, b) = (x[1] - x[0], x[1] - x[2]);
    let (fa, fb) = (f[1] - f[0], f[1] - f[2]);
    let den = a * fb - b * fa;
    if den == 0.0 || !den.is_finite() {
        return None;
    }
    let xv = x[1] - 0.5 * (a * a * fb - b * b * fa) / den;
    // Lagrange form evaluated at the vertex
    let l0 = (xv - x[1]) * (xv - x[2]) / ((x[0] - x[1]) * (x[0] - x[2]));
    let l1 = (xv - x[0]) * (xv - x[2]) / ((x[1] - x[0]) * (x[1] - x[2]));
    let l2 = (xv - x[0]) * (xv - x[1]) / ((x[2] - x[0]) * (x[2] - x[1]));
    Some((xv, l0 * f[0] + l1 * f[1] + l2 * f[2]))
}

/// Every strict local maximum, refined by a parabola through the log of the
/// three surrounding samples, tallest first.
pub fn find_peaks(samples: &SpectrumSamples) -> Result<Vec<PeakEstimate>> {
    let n = samples.len();
    if n < 5 {
        return Err(Error::InsufficientSamples { needed: 5, got: n });
    }
    let (x, y) = (&samples.omega, &samples.values);
    let mut out = Vec::new();
    for i in 1..n - 1 {
        if !(y[i] > y[i - 1] && y[i] > y[i + 1]) {
            continue;
        }
        let xs = [x[i - 1], x[i], x[i + 1]];
        let ys = [y[i - 1], y[i], y[i + 1]];
        let refined = if ys.iter().all(|&v| v > 0.0) {
            vertex(xs, ys.map(f64::ln)).map(|(c, h)| (c, h.exp()))
        } else {
            vertex(xs, ys)
        };
        let (center, height) = match refined {
            Some((c, h)) if c >= xs[0] && c <= xs[2] => (c, h),
            _ => (x[i], y[i]),
        };
        out.push(PeakEstimate { center, height });
    }
    if out.is_empty() {
        return Err(Error::NoPeaks);
    }
    out.sort_by(|a, b| b.height.total_cmp(&a.height));
    Ok(out)
}

/// Half width at half maximum around the sample nearest `center`, by linear
/// interpolation of the half-height crossings.
pub fn half_width_at_half_max(samples: &SpectrumSamples, center: f64) -> Option<f64> {
    let (x, y) = (&samples.omega, &samples.values);
    let i = x.partition_point(|&v| v < center).min(x.len() - 1);
    let half = 0.5 * y[i];
    let cross = |range: &mut dyn Iterator<Item = usize>| -> Option<f64> {
        let mut prev = i;
        for j in range {
            if y[j] <= half {
                let t = (y[prev] - half) / (y[prev] - y[j]);
                return Some(x[prev] + t * (x[j] - x[prev]));
            }
            prev = j;
        }
        None
    };
    let right = cross(&mut (i + 1..x.len()));
    let left = cross(&mut (0..i).rev());
    match (left, right) {
        (Some(l), Some(r)) => Some(0.5 * (r - l)),
        (Some(l), None) => Some(x[i] - l),
        (None, Some(r)) => Some(r - x[i]),
        (None, None) => None,
    }
}
