//! Sum of three Lorentzians, `s · Σ wᵢ / ((x − cᵢ)² + γᵢ²)`, parameterized as
//! `[c₀, ln γ₀, ln w₀, c₁, …, ln w₂]` with an optional trailing `ln s`.

pub const PER_PEAK: usize = 3;
pub const PEAKS: usize = 3;
pub const PEAK_PARAMS: usize = PER_PEAK * PEAKS;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePeakModel {
    /// Multiplier used when the scale is not a fit parameter.
    pub fixed_scale: f64,
    pub fit_scale: bool,
}

impl ThreePeakModel {
    pub fn n_params(&self) -> usize {
        PEAK_PARAMS + usize::from(self.fit_scale)
    }

    fn scale(&self, q: &[f64]) -> f64 {
        if self.fit_scale {
            self.fixed_scale * q[PEAK_PARAMS].exp()
        } else {
            self.fixed_scale
        }
    }

    pub fn value(&self, x: f64, q: &[f64]) -> f64 {
        let s = self.scale(q);
        q[..PEAK_PARAMS]
            .chunks_exact(PER_PEAK)
            .map(|p| {
                let g = p[1].exp();
                let dx = x - p[0];
                p[2].exp() / (dx * dx + g * g)
            })
            .sum::<f64>()
            * s
    }

    /// Model value, writing `∂/∂q` into `grad`.
    pub fn value_and_gradient(&self, x: f64, q: &[f64], grad: &mut [f64]) -> f64 {
        let s = self.scale(q);
        let mut total = 0.0;
        for (p, out) in q[..PEAK_PARAMS].chunks_exact(PER_PEAK).zip(grad[..PEAK_PARAMS].chunks_exact_mut(PER_PEAK)) {
            let g = p[1].exp();
            let w = p[2].exp();
            let dx = x - p[0];
            let d = dx * dx + g * g;
            let f = s * w / d;
            out[0] = 2.0 * f * dx / d;
            out[1] = -2.0 * f * g * g / d;
            out[2] = f;
            total += f;
        }
        if self.fit_scale {
            grad[PEAK_PARAMS] = total;
        }
        total
    }
}
