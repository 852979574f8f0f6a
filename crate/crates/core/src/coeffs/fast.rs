//! FFT-based coefficient transforms for the Malmquist–Takenaka and
//! tanh–Chebyshev systems.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::CoefficientVector;
use crate::basis::i_pow;
use crate::error::{Error, Result};

/// Samples per coefficient in the default MT grid.
pub const MT_OVERSAMPLE: usize = 4;

/// MT coefficients f̂_n, n = −N/2+1..N/2, in the canonical basis.
pub fn mt_coeffs_fft<C: Into<Complex64>>(f: impl Fn(f64) -> C, n: usize) -> Result<CoefficientVector> {
    mt_coeffs_fft_scaled(f, n, 0.5)
}

/// MT coefficients in the dilated basis (2L)^{−1/2}φ_n(x/(2L)); `L = ½` is
/// the canonical basis. Uses a grid of 4N points.
pub fn mt_coeffs_fft_scaled<C: Into<Complex64>>(f: impl Fn(f64) -> C, n: usize, scale: f64) -> Result<CoefficientVector> {
    mt_coeffs_fft_grid(f, n, scale, MT_OVERSAMPLE * n)
}

/// The N-coefficient window from an M-point grid, M ≥ N both powers of two.
///
/// With x = L·tan(θ/2) the coefficients are Fourier coefficients of
/// (1 − i·tan(θ/2))·f(L·tan(θ/2)), sampled on M midpoints of (−π, π).
/// Coefficients beyond ±M/2 alias into the window.
pub fn mt_coeffs_fft_grid<C: Into<Complex64>>(
    f: impl Fn(f64) -> C,
    n: usize,
    scale: f64,
    m: usize,
) -> Result<CoefficientVector> {
    if n < 2 || !n.is_power_of_two() || m < n || !m.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("N = {n}, M = {m} must be powers of two with M ≥ N ≥ 2")));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale {scale} must be positive")));
    }
    let f = |x: f64| -> Complex64 { f(x).into() };
    for x in [-1e8, 1e8] {
        let v = (x * f(x)).norm();
        if !(v <= 1e-6) {
            return Err(Error::Contract(format!("|x f(x)| = {v:e} at x = {x:e}; f must decay faster than 1/x")));
        }
    }
    let mut g: Vec<Complex64> = (0..m)
        .map(|j| {
            let t = (0.5 * (-PI + (2 * j + 1) as f64 * PI / m as f64)).tan();
            f(scale * t) * Complex64::new(1.0, -t)
        })
        .collect();
    if let Some(j) = g.iter().position(|v| !v.is_finite()) {
        let t = (0.5 * (-PI + (2 * j + 1) as f64 * PI / m as f64)).tan();
        return Err(Error::Evaluation { node: scale * t, value: f(scale * t).norm() });
    }
    FftPlanner::new().plan_fft_forward(m).process(&mut g);
    let lo = -(n as i64) / 2 + 1;
    let norm = (2.0 * scale).sqrt() / (2.0 * (2.0 * PI).sqrt()) * 2.0 * PI / m as f64;
    let values = (lo..lo + n as i64)
        .map(|k| {
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let shift = Complex64::from_polar(1.0, -PI * k as f64 / m as f64);
            norm * sign * shift * g[k.rem_euclid(m as i64) as usize] * i_pow(-k)
        })
        .collect();
    Ok(CoefficientVector::new(lo, values))
}

/// The four tanh–Jacobi parameter pairs with Chebyshev kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TanhChebyshevKind {
    /// (¼, ¼): cos nθ
    T,
    /// (¾, ¾): sin (n+1)θ
    U,
    /// (¼, ¾): cos (n+½)θ
    V,
    /// (¾, ¼): sin (n+½)θ
    W,
}

impl TanhChebyshevKind {
    pub fn params(self) -> (f64, f64) {
        match self {
            Self::T => (0.25, 0.25),
            Self::U => (0.75, 0.75),
            Self::V => (0.25, 0.75),
            Self::W => (0.75, 0.25),
        }
    }

    pub fn from_params(a: f64, b: f64) -> Option<Self> {
        [Self::T, Self::U, Self::V, Self::W].into_iter().find(|k| k.params() == (a, b))
    }

    fn offset(self) -> f64 {
        match self {
            Self::T => 0.0,
            Self::U => 1.0,
            Self::V | Self::W => 0.5,
        }
    }

    fn is_cosine(self) -> bool {
        matches!(self, Self::T | Self::V)
    }
}

/// Coefficients f̂_0…f̂_{N−1} of real f in the canonical tanh–Jacobi basis.
///
/// With x = −ln tan(θ/2) they are Chebyshev-type sine/cosine coefficients of
/// f(x(θ))/√(sin θ), computed by a midpoint rule with max(16N, 2¹⁴) nodes.
pub fn tanh_chebyshev_coeffs(f: impl Fn(f64) -> f64, kind: TanhChebyshevKind, n: usize) -> Result<CoefficientVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let m = (16 * n).max(1 << 14);
    let delta = kind.offset();
    let dtheta = PI / m as f64;
    let mut h = vec![Complex64::new(0.0, 0.0); 2 * m];
    for (j, slot) in h.iter_mut().take(m).enumerate() {
        let theta = (j as f64 + 0.5) * dtheta;
        let x = -(0.5 * theta).tan().ln();
        let g = f(x) / theta.sin().sqrt();
        if !g.is_finite() {
            return Err(Error::Evaluation { node: x, value: f(x) });
        }
        *slot = Complex64::from_polar(g, -delta * PI * j as f64 / m as f64);
    }
    FftPlanner::new().plan_fft_forward(2 * m).process(&mut h);
    let values = (0..n)
        .map(|k| {
            let c = Complex64::from_polar(1.0, -(k as f64 + delta) * PI / (2 * m) as f64) * h[k];
            let s = if kind.is_cosine() { c.re } else { -c.im };
            let norm = if kind == TanhChebyshevKind::T && k == 0 { 1.0 / PI.sqrt() } else { (2.0 / PI).sqrt() };
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(sign * norm * s * dtheta, 0.0)
        })
        .collect();
    Ok(CoefficientVector::new(0, values))
}
