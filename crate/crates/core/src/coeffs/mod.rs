//! Expansion coefficients f̂_n = ⟨f, φ_n⟩ in a transformed basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients f̂_n for n = offset, offset+1, ….
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    pub offset: i64,
    pub values: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(offset: i64, values: Vec<Complex64>) -> Self {
        Self { offset, values }
    }

    pub fn zeros(offset: i64, len: usize) -> Self {
        Self { offset, values: vec![Complex64::new(0.0, 0.0); len] }
    }

    /// e_n on the index window [offset, offset + len).
    pub fn unit(offset: i64, len: usize, n: i64) -> Result<Self> {
        let mut v = Self::zeros(offset, len);
        let k = v.position(n).ok_or(Error::Index { index: n, len })?;
        v.values[k] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_real(offset: i64, values: &[f64]) -> Self {
        Self { offset, values: values.iter().map(|&v| v.into()).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn indices(&self) -> std::ops::Range<i64> {
        self.offset..self.offset + self.values.len() as i64
    }

    fn position(&self, n: i64) -> Option<usize> {
        let k = n - self.offset;
        (k >= 0 && (k as usize) < self.values.len()).then_some(k as usize)
    }

    /// f̂_n, or zero outside the window.
    pub fn get(&self, n: i64) -> Complex64 {
        self.position(n).map_or(Complex64::new(0.0, 0.0), |k| self.values[k])
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.len() as i64).max(other.offset + other.len() as i64);
        (lo..hi).map(|n| (self.get(n) - other.get(n)).norm()).fold(0.0, f64::max)
    }
}

mod decay;
mod fast;

pub use decay::{decay_fit, DecayFit, DecayModel};
pub use fast::{mt_coeffs_fft, mt_coeffs_fft_grid, mt_coeffs_fft_scaled, tanh_chebyshev_coeffs, TanhChebyshevKind, MT_OVERSAMPLE};

use crate::basis::{i_pow, TransformedBasis};
use crate::quadrature::golub_welsch;

/// f̂_n = (−i)ⁿ∫F(ξ)p_n(ξ)√w(ξ)dξ from the Fourier transform
/// F(ξ) = (2π)^{−1/2}∫f(x)e^{−ixξ}dx, with an `m`-point Gauss rule for dμ.
///
/// Canonical phase only. For MT the window is −N/2+1..N/2 and negative
/// indices use the reflected density on ξ < 0.
pub fn coeffs_fourier_side<C: Into<Complex64>>(
    big_f: impl Fn(f64) -> C,
    basis: &TransformedBasis,
    n: usize,
    m: usize,
) -> Result<CoefficientVector> {
    if m < n {
        return Err(Error::InvalidArgument(format!("rule size {m} below N = {n}")));
    }
    let (offset, degrees) = window(basis, n);
    let top = degrees.iter().map(|&(_, d)| d).max().unwrap_or(0) + 1;
    let j = basis.extended_jacobi(m.max(top))?;
    let rule = golub_welsch(&j, m)?;
    let measure = basis.measure.as_continuous().ok_or_else(|| Error::InvalidArgument("continuous measure required".into()))?;
    let mut values = vec![Complex64::new(0.0, 0.0); degrees.len()];
    let mut p = vec![0.0; top];
    for (&xi, &lam) in rule.nodes.iter().zip(&rule.weights) {
        let w = measure.density(xi);
        if w <= 0.0 {
            continue;
        }
        j.eval_all_into(xi, &mut p);
        let pos: Complex64 = big_f(xi).into();
        let neg: Complex64 = if basis.is_bilateral() { big_f(-xi).into() } else { Complex64::new(0.0, 0.0) };
        for (k, &(idx, d)) in degrees.iter().enumerate() {
            let fv = if idx < 0 { neg } else { pos };
            let v = lam * fv * p[d] / w.sqrt();
            if !v.is_finite() {
                return Err(Error::Evaluation { node: xi, value: v.norm() });
            }
            values[k] += v;
        }
    }
    for (v, &(idx, d)) in values.iter_mut().zip(&degrees) {
        // φ_{−d−1} has Fourier density (−i)^{d+1}p_d(−ξ)√w(−ξ)
        *v *= if idx < 0 { i_pow(d as i64 + 1) } else { i_pow(-(d as i64)) };
    }
    Ok(CoefficientVector::new(offset, values))
}

/// Index window and the polynomial degree behind each index.
pub(crate) fn window(basis: &TransformedBasis, n: usize) -> (i64, Vec<(i64, usize)>) {
    if basis.is_bilateral() {
        let lo = -(n as i64) / 2 + 1;
        let idx = (lo..lo + n as i64).map(|k| (k, if k < 0 { (-k - 1) as usize } else { k as usize })).collect();
        (lo, idx)
    } else {
        (0, (0..n as i64).map(|k| (k, k as usize)).collect())
    }
}

/// x-space coefficients with a bound on what the window may have missed.
#[derive(Debug, Clone, PartialEq)]
pub struct XspaceCoeffs {
    pub coeffs: CoefficientVector,
    /// max |f(±X)|·|φ_n(±X)| over the window ends; large values mean X was
    /// too small.
    pub tail: f64,
}

/// f̂_n = ∫f(x)conj(φ_n(x))dx by the m-point trapezoid rule on [−X, X].
pub fn coeffs_xspace<C: Into<Complex64>>(
    f: impl Fn(f64) -> C,
    basis: &TransformedBasis,
    n: usize,
    x_max: f64,
    m: usize,
) -> Result<XspaceCoeffs> {
    if m < 2 || !(x_max > 0.0) {
        return Err(Error::InvalidArgument(format!("window [−{x_max}, {x_max}] with {m} points")));
    }
    let (offset, degrees) = window(basis, n);
    let ns: Vec<i64> = degrees.iter().map(|d| d.0).collect();
    let h = 2.0 * x_max / (m - 1) as f64;
    let xs: Vec<f64> = (0..m).map(|k| -x_max + k as f64 * h).collect();
    let fx: Vec<Complex64> = xs.iter().map(|&x| f(x).into()).collect();
    if let Some(k) = fx.iter().position(|v| !v.is_finite()) {
        return Err(Error::Evaluation { node: xs[k], value: fx[k].norm() });
    }
    let table = basis.phi_table(&ns, &xs)?;
    let mut tail = 0.0f64;
    let values = table
        .iter()
        .map(|row| {
            tail = tail.max(fx[0].norm() * row[0].norm()).max(fx[m - 1].norm() * row[m - 1].norm());
            let s: Complex64 = fx.iter().zip(row).map(|(a, b)| a * b.conj()).sum();
            let ends = 0.5 * (fx[0] * row[0].conj() + fx[m - 1] * row[m - 1].conj());
            (s - ends) * h
        })
        .collect();
    Ok(XspaceCoeffs { coeffs: CoefficientVector::new(offset, values), tail })
}

/// Σ_n f̂_n φ_n(x).
pub fn reconstruct(basis: &TransformedBasis, a: &CoefficientVector, xs: &[f64]) -> Result<Vec<Complex64>> {
    let ns: Vec<i64> = a.indices().collect();
    let table = basis.phi_table(&ns, xs)?;
    Ok((0..xs.len()).map(|i| table.iter().zip(&a.values).map(|(row, c)| c * row[i]).sum()).collect())
}
