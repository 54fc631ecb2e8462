// Quadrature nodes are kept at their published precision.
#![allow(clippy::excessive_precision)]
#![allow(dead_code)]

//! Independent numerics for the test suites: adaptive Gauss–Kronrod
//! quadrature and hydrogen radial functions built from Laguerre polynomials.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// `∫ₐᵇ f` to absolute tolerance `tol` by recursive bisection.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn go<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        go(f, a, m, 0.5 * tol, depth - 1) + go(f, m, b, 0.5 * tol, depth - 1)
    }
    go(&f, a, b, tol, 40)
}

/// Sum of [`integrate`] over consecutive breakpoints.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> f64 {
    let n = (breaks.len() - 1) as f64;
    breaks.windows(2).map(|w| integrate(&f, w[0], w[1], tol / n)).sum()
}

/// Generalized Laguerre `L_k^a(x)` by the three-term recurrence.
pub fn laguerre(k: u32, a: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Hydrogen-like radial function `R_nl` for Bohr radius `a`, with its
/// derivative, from `d/dx L_k^a = −L_{k−1}^{a+1}`.
pub struct Radial {
    pub n: u32,
    pub l: u32,
    pub a: f64,
    norm: f64,
}

impl Radial {
    pub fn new(n: u32, l: u32, a: f64) -> Self {
        let na = n as f64 * a;
        let norm = ((2.0 / na).powi(3) * factorial(n - l - 1) / (2.0 * n as f64 * factorial(n + l))).sqrt();
        Self { n, l, a, norm }
    }

    fn rho_scale(&self) -> f64 {
        2.0 / (self.n as f64 * self.a)
    }

    pub fn value(&self, r: f64) -> f64 {
        let rho = self.rho_scale() * r;
        let k = self.n - self.l - 1;
        self.norm * rho.powi(self.l as i32) * (-0.5 * rho).exp() * laguerre(k, (2 * self.l + 1) as f64, rho)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let s = self.rho_scale();
        let rho = s * r;
        let k = self.n - self.l - 1;
        let alpha = (2 * self.l + 1) as f64;
        let lag = laguerre(k, alpha, rho);
        let dlag = if k == 0 { 0.0 } else { -laguerre(k - 1, alpha + 1.0, rho) };
        let l = self.l as i32;
        let pow = if l == 0 { 0.0 } else { l as f64 * rho.powi(l - 1) };
        let e = (-0.5 * rho).exp();
        self.norm * s * e * (pow * lag - 0.5 * rho.powi(l) * lag + rho.powi(l) * dlag)
    }

    /// Breakpoints covering the support out to `60 n a`.
    pub fn breaks(&self) -> Vec<f64> {
        let top = 60.0 * self.n as f64 * self.a;
        (0..=60).map(|i| top * i as f64 / 60.0).collect()
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
