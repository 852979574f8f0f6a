//! Truncated differentiation matrices D_N and their exponentials.
//!
//! In the basis {φ_n} the derivative acts as
//! (Da)_m = b_{m−1}a_{m−1} + i c_m a_m − b_m a_{m+1},
//! a skew-Hermitian tridiagonal matrix.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientVector;
use crate::error::{Error, Result};
use crate::quadrature::tridiag_eigen;
use crate::recurrence::JacobiMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffMatrix {
    /// Index of the first row.
    pub offset: i64,
    /// b_m couples rows m and m+1; length N − 1.
    pub b: Vec<f64>,
    /// c_m, with D_{m,m} = i c_m; length N.
    pub c: Vec<f64>,
}

impl DiffMatrix {
    /// Principal N×N section for the system of `j`.
    pub fn build(j: &JacobiMatrix, n: usize) -> Result<Self> {
        if n == 0 || n > j.len() {
            return Err(Error::Index { index: n as i64, len: j.len() });
        }
        Ok(Self { offset: 0, b: j.b[..n - 1].to_vec(), c: j.c[..n].to_vec() })
    }

    /// Generic section; `b` may vanish or change sign (e.g. the MT system on
    /// a window of ℤ, where b_{−1} = 0 decouples the two halves).
    pub fn from_parts(offset: i64, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if c.is_empty() || b.len() + 1 != c.len() {
            return Err(Error::LengthMismatch { expected: c.len().saturating_sub(1), got: b.len() });
        }
        if b.iter().chain(&c).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(Self { offset, b, c })
    }

    /// MT on indices offset..offset+n: b_m = m + 1, c_m = 2m + 1.
    pub fn malmquist_takenaka(offset: i64, n: usize) -> Result<Self> {
        let b = (0..n.saturating_sub(1)).map(|k| (offset + k as i64 + 1) as f64).collect();
        let c = (0..n).map(|k| (2 * (offset + k as i64) + 1) as f64).collect();
        Self::from_parts(offset, b, c)
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// Entries D_{m,m−1} = b_{m−1}.
    pub fn sub(&self) -> &[f64] {
        &self.b
    }

    /// Entries D_{m,m+1} = −b_m.
    pub fn sup(&self) -> Vec<f64> {
        self.b.iter().map(|b| -b).collect()
    }

    /// Entries D_{m,m} = i c_m.
    pub fn diag(&self) -> Vec<Complex64> {
        self.c.iter().map(|&c| Complex64::new(0.0, c)).collect()
    }

    /// Non-zero entries as (row, column, value) with absolute indices.
    pub fn entries(&self) -> Vec<(i64, i64, Complex64)> {
        let mut out = Vec::with_capacity(3 * self.dim());
        for m in 0..self.dim() {
            let r = self.offset + m as i64;
            if m > 0 {
                out.push((r, r - 1, Complex64::new(self.b[m - 1], 0.0)));
            }
            out.push((r, r, Complex64::new(0.0, self.c[m])));
            if m + 1 < self.dim() {
                out.push((r, r + 1, Complex64::new(-self.b[m], 0.0)));
            }
        }
        out
    }

    /// Da on raw coefficient slices.
    pub fn apply_slice(&self, a: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.dim();
        if a.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: a.len() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for m in 0..n {
            let mut v = Complex64::new(0.0, self.c[m]) * a[m];
            if m > 0 {
                v += self.b[m - 1] * a[m - 1];
            }
            if m + 1 < n {
                v -= self.b[m] * a[m + 1];
            }
            out[m] = v;
        }
        Ok(out)
    }

    fn check_window(&self, a: &CoefficientVector) -> Result<()> {
        if a.offset != self.offset || a.len() != self.dim() {
            return Err(Error::LengthMismatch { expected: self.dim(), got: a.len() });
        }
        Ok(())
    }

    /// Coefficients of the derivative.
    pub fn apply(&self, a: &CoefficientVector) -> Result<CoefficientVector> {
        self.check_window(a)?;
        Ok(CoefficientVector::new(self.offset, self.apply_slice(&a.values)?))
    }

    /// e^{τD}a to ℓ₂ accuracy `tol`, by Lanczos on the Hermitian −iD.
    pub fn expm_apply(&self, tau: f64, a: &CoefficientVector, tol: f64) -> Result<CoefficientVector> {
        self.check_window(a)?;
        let h = |v: &[Complex64]| -> Vec<Complex64> {
            self.apply_slice(v).expect("length checked").into_iter().map(|z| Complex64::new(z.im, -z.re)).collect()
        };
        Ok(CoefficientVector::new(self.offset, expm_i_hermitian(&h, tau, &a.values, tol)?))
    }

    /// e^{iτD²}a for the Hermitian square of the section.
    pub fn expm_i_square_apply(&self, tau: f64, a: &CoefficientVector, tol: f64) -> Result<CoefficientVector> {
        self.check_window(a)?;
        let h = |v: &[Complex64]| -> Vec<Complex64> {
            let d = self.apply_slice(v).expect("length checked");
            self.apply_slice(&d).expect("length checked")
        };
        Ok(CoefficientVector::new(self.offset, expm_i_hermitian(&h, tau, &a.values, tol)?))
    }

    /// max |λ| over the eigenvalues of D, i.e. of the Jacobi section.
    pub fn spectral_radius(&self) -> Result<f64> {
        let eig = tridiag_eigen(&self.c, &self.b, false)?;
        Ok(eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }
}

const KRYLOV_CAP: usize = 120;

/// e^{iτH}a for Hermitian H given as a matvec.
pub(crate) fn expm_i_hermitian(
    h: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    tau: f64,
    a: &[Complex64],
    tol: f64,
) -> Result<Vec<Complex64>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || tau == 0.0 {
        return Ok(a.to_vec());
    }
    match lanczos_step(h, tau, a, norm, tol)? {
        Some(v) => Ok(v),
        None => {
            let half = expm_i_hermitian(h, 0.5 * tau, a, 0.5 * tol)?;
            expm_i_hermitian(h, 0.5 * tau, &half, 0.5 * tol)
        }
    }
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// One Krylov solve; `None` when the subspace cap is hit before `tol`.
fn lanczos_step(
    h: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    tau: f64,
    a: &[Complex64],
    norm: f64,
    tol: f64,
) -> Result<Option<Vec<Complex64>>> {
    let n = a.len();
    let cap = n.min(KRYLOV_CAP);
    let mut basis: Vec<Vec<Complex64>> = vec![a.iter().map(|z| z / norm).collect()];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    loop {
        let k = basis.len() - 1;
        let mut w = h(&basis[k]);
        alpha.push(dot(&basis[k], &w).re);
        // full reorthogonalization, twice
        for _ in 0..2 {
            for q in &basis {
                let d = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= d * qi;
                }
            }
        }
        let b = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let m = alpha.len();
        let eig = tridiag_eigen(&alpha, &beta, true)?;
        let q = eig.vectors.expect("requested");
        // y = Q e^{iτΛ} Qᵀ e_1
        let y: Vec<Complex64> = (0..m)
            .map(|i| {
                (0..m).map(|j| q[i][j] * q[0][j] * Complex64::from_polar(1.0, tau * eig.values[j])).sum()
            })
            .collect();
        let scale = alpha.iter().chain(&beta).fold(1.0f64, |s, v| s.max(v.abs()));
        let done = b <= 1e-14 * scale || m == n;
        let est = b * y[m - 1].norm() * norm;
        if done || est <= tol {
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (yi, v) in y.iter().zip(&basis) {
                for (o, vi) in out.iter_mut().zip(v) {
                    *o += norm * yi * vi;
                }
            }
            return Ok(Some(out));
        }
        if m >= cap {
            return Ok(None);
        }
        beta.push(b);
        basis.push(w.iter().map(|z| z / b).collect());
    }
}
