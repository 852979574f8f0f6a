//! Orthonormal polynomial systems defined by three-term recurrences
//!
//! ξ p_n(ξ) = b_{n-1} p_{n-1}(ξ) + c_n p_n(ξ) + b_n p_{n+1}(ξ),  p_{-1} = 0, p_0 = 1,
//!
//! for a unit-mass measure. Coefficients come either from the closed-form
//! families in [`families`] or from an arbitrary [`MeasureSpec`] through the
//! discretized Stieltjes procedure in [`stieltjes`].

pub mod families;
pub mod measure;
pub mod stieltjes;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use families::{
    charlier_bilateral, generalized_hermite_coeffs, hermite_coeffs, jacobi_poly_coeffs,
    laguerre_coeffs, ultraspherical_coeffs,
};
pub use measure::{ContinuousMeasure, DiscreteMeasure, MeasureSpec, Support, Weight};
pub use stieltjes::stieltjes;

/// Recurrence coefficients of an orthonormal polynomial system.
///
/// `b[n] > 0` is the off-diagonal entry coupling p_n and p_{n+1}; `c[n]` is
/// the diagonal. Both sequences have the same length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiMatrix {
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if b.len() != c.len() {
            return Err(Error::LengthMismatch { expected: c.len(), got: b.len() });
        }
        if let Some((index, &value)) = b.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
            return Err(Error::Degenerate { index, value });
        }
        if let Some(&v) = c.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite diagonal entry {v}")));
        }
        Ok(Self { b, c })
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> (f64, f64)) -> Result<Self> {
        let (b, c) = (0..len).map(f).unzip();
        Self::new(b, c)
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Leading `n` coefficients.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.len() {
            return Err(Error::Index { index: n as i64, len: self.len() });
        }
        Ok(Self { b: self.b[..n].to_vec(), c: self.c[..n].to_vec() })
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.c.iter().all(|c| c.abs() <= tol)
    }

    /// p_n(ξ) by forward recurrence.
    pub fn eval_poly(&self, n: usize, xi: f64) -> Result<f64> {
        if n >= self.len() {
            return Err(Error::Index { index: n as i64, len: self.len() });
        }
        let mut prev = 0.0;
        let mut cur = 1.0;
        for k in 0..n {
            let bm1 = if k == 0 { 0.0 } else { self.b[k - 1] };
            let next = ((xi - self.c[k]) * cur - bm1 * prev) / self.b[k];
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// p_0(ξ), …, p_{count-1}(ξ) written into `out`.
    pub fn eval_all_into(&self, xi: f64, out: &mut [f64]) {
        let count = out.len();
        debug_assert!(count <= self.len() + 1);
        if count == 0 {
            return;
        }
        out[0] = 1.0;
        if count > 1 {
            out[1] = (xi - self.c[0]) / self.b[0];
        }
        for k in 1..count.saturating_sub(1) {
            out[k + 1] = ((xi - self.c[k]) * out[k] - self.b[k - 1] * out[k - 1]) / self.b[k];
        }
    }

    pub fn eval_all(&self, xi: f64, count: usize) -> Result<Vec<f64>> {
        if count > self.len() {
            return Err(Error::Index { index: count as i64 - 1, len: self.len() });
        }
        let mut out = vec![0.0; count];
        self.eval_all_into(xi, &mut out);
        Ok(out)
    }

    /// p_0(ξ)…p_{count-1}(ξ) as `(mantissa, ln_scale)` pairs, value =
    /// mantissa·exp(ln_scale). Does not overflow for large ξ or n.
    pub fn eval_all_scaled(&self, xi: f64, count: usize) -> Result<Vec<(f64, f64)>> {
        if count > self.len() {
            return Err(Error::Index { index: count as i64 - 1, len: self.len() });
        }
        let mut out = Vec::with_capacity(count);
        let mut prev = 0.0;
        let mut cur = 1.0;
        let mut scale = 0.0;
        for k in 0..count {
            out.push((cur, scale));
            if k + 1 == count {
                break;
            }
            let bm1 = if k == 0 { 0.0 } else { self.b[k - 1] };
            let next = ((xi - self.c[k]) * cur - bm1 * prev) / self.b[k];
            prev = cur;
            cur = next;
            let m = cur.abs().max(prev.abs());
            if m > 1e150 {
                cur /= m;
                prev /= m;
                scale += m.ln();
            }
        }
        Ok(out)
    }

    /// Σ a_n p_n(ξ) by Clenshaw's backward recurrence.
    pub fn clenshaw(&self, coeffs: &[f64], xi: f64) -> Result<f64> {
        let n = coeffs.len();
        if n > self.len() {
            return Err(Error::Index { index: n as i64 - 1, len: self.len() });
        }
        let mut y1 = 0.0; // y_{k+1}
        let mut y2 = 0.0; // y_{k+2}
        for k in (0..n).rev() {
            let alpha = if k + 1 < n { (xi - self.c[k]) / self.b[k] } else { 0.0 };
            let beta = if k + 2 < n { -self.b[k] / self.b[k + 1] } else { 0.0 };
            let y = coeffs[k] + alpha * y1 + beta * y2;
            y2 = y1;
            y1 = y;
        }
        Ok(y1)
    }
}
