//! Closed forms for the named transformed families, in their customary
//! normalizations.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use crate::error::Result;
use crate::recurrence::{jacobi_poly_coeffs, JacobiMatrix};
use crate::specfun;

/// (−1)ⁿ(2ⁿn!)^{−1/2}π^{−1/4}e^{−x²/2}H_n(x).
///
/// Runs the normalized three-term recurrence with a tracked exponent,
/// so large n and |x| neither overflow nor underflow prematurely.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut ln_scale = -0.5 * x * x - 0.25 * PI.ln();
    for k in 0..n {
        let next = -x * (2.0 / (k + 1) as f64).sqrt() * cur - (k as f64 / (k + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            cur /= m;
            prev /= m;
            ln_scale += m.ln();
        }
    }
    if cur == 0.0 {
        return 0.0;
    }
    cur.signum() * (cur.abs().ln() + ln_scale).exp()
}

/// √((n+½)/x)·J_{n+½}(x) = √((2n+1)/π)·j_n(x), extended to x ≤ 0.
pub fn transformed_legendre(n: usize, x: f64) -> f64 {
    ((2 * n + 1) as f64 / PI).sqrt() * specfun::spherical_j(n, x)
}

/// √(2/π)·iⁿ(1+2ix)ⁿ/(1−2ix)^{n+1}, n ∈ ℤ.
///
/// With α = arg(1+2ix) this is √(2/π)·iⁿe^{i(2n+1)α}/√(1+4x²).
pub fn malmquist_takenaka(n: i64, x: f64) -> Complex64 {
    let alpha = (2.0 * x).atan();
    let modulus = FRAC_2_PI.sqrt() / (1.0 + 4.0 * x * x).sqrt();
    i_pow(n) * Complex64::from_polar(modulus, (2 * n + 1) as f64 * alpha)
}

/// iⁿ for any integer n.
pub fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// (1−tanh x)^a (1+tanh x)^b p_n^{(2a−1,2b−1)}(tanh x), with p_n orthonormal
/// for the unnormalized weight (1−y)^{2a−1}(1+y)^{2b−1} on (−1, 1).
#[derive(Debug, Clone)]
pub struct TanhJacobi {
    pub a: f64,
    pub b: f64,
    jacobi: JacobiMatrix,
    p0: f64,
}

impl TanhJacobi {
    /// Supports n < `len`.
    pub fn new(a: f64, b: f64, len: usize) -> Result<Self> {
        let (alpha, beta) = (2.0 * a - 1.0, 2.0 * b - 1.0);
        let jacobi = jacobi_poly_coeffs(alpha, beta, len.max(1))?;
        let mass = 2f64.powf(alpha + beta + 1.0) * specfun::beta(alpha + 1.0, beta + 1.0)?;
        Ok(Self { a, b, jacobi, p0: 1.0 / mass.sqrt() })
    }

    pub fn len(&self) -> usize {
        self.jacobi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jacobi.is_empty()
    }

    pub fn eval(&self, n: usize, x: f64) -> Result<f64> {
        let y = x.tanh();
        // 1 ∓ tanh x without cancellation
        let minus = 2.0 / (1.0 + (2.0 * x).exp());
        let plus = 2.0 / (1.0 + (-2.0 * x).exp());
        let p = self.jacobi.eval_poly(n, y)?;
        Ok(minus.powf(self.a) * plus.powf(self.b) * p * self.p0)
    }
}

/// One-off evaluation of [`TanhJacobi`]; prefer the struct for repeated use.
pub fn tanh_jacobi(a: f64, b: f64, n: usize, x: f64) -> Result<f64> {
    TanhJacobi::new(a, b, n + 1)?.eval(n, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_values() {
        let c = PI.powf(-0.25);
        assert!((hermite_function(0, 0.0) - c).abs() < 1e-15);
        assert_eq!(hermite_function(1, 0.0), 0.0);
        // H_2 = 4x² − 2, so φ_2(1) = (8)^{-1/2}π^{-1/4}e^{-1/2}·2
        let want = 2.0 / 8f64.sqrt() * c * (-0.5f64).exp();
        assert!((hermite_function(2, 1.0) - want).abs() < 1e-15);
        // H_3 = 8x³ − 12x with the (−1)ⁿ sign
        let x = 0.7;
        let want = -(8.0 * x * x * x - 12.0 * x) / 48f64.sqrt() * c * (-x * x / 2.0).exp();
        assert!((hermite_function(3, x) - want).abs() < 1e-15);
    }

    #[test]
    fn hermite_no_overflow() {
        for &(n, x) in &[(10_000usize, 100.0), (10_000, 0.3), (5000, 99.0), (0, 100.0), (200, 30.0)] {
            let v = hermite_function(n, x);
            assert!(v.is_finite() && v.abs() <= PI.powf(-0.25) + 1e-12, "{n} {x} {v}");
        }
        // beyond the turning point √(2n+1) the function is tiny but not lost
        let v = hermite_function(10_000, 150.0);
        assert!(v != 0.0 && v.abs() < 1e-50);
        assert!(hermite_function(10_000, 140.0).abs() > 1e-3 * hermite_function(10_000, 139.0).abs());
    }

    #[test]
    fn legendre_values() {
        assert!((transformed_legendre(0, PI / 2.0) - 0.359_174_24).abs() < 1e-8);
        assert!((transformed_legendre(0, 0.0) - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert_eq!(transformed_legendre(3, 0.0), 0.0);
        let want = (3.0 / (2.0 * PI)).sqrt() * 2f64.sqrt() / PI;
        assert!((transformed_legendre(1, PI) - want).abs() < 1e-14);
        assert!((transformed_legendre(1, PI) - 0.311_054_02).abs() < 1e-8);
        assert!((transformed_legendre(3, -2.2) + transformed_legendre(3, 2.2)).abs() < 1e-16);
    }

    #[test]
    fn mt_values() {
        let v = malmquist_takenaka(0, 0.0);
        assert!((v.re - FRAC_2_PI.sqrt()).abs() < 1e-15 && v.im == 0.0);
        // direct rational evaluation at n = 1, x = 1/2
        let z = Complex64::new(1.0, 1.0) / (Complex64::new(1.0, -1.0) * Complex64::new(1.0, -1.0));
        let direct = FRAC_2_PI.sqrt() * Complex64::i() * z;
        let fourier = FRAC_2_PI.sqrt()
            * Complex64::i()
            * Complex64::from_polar(1.0, 1.5 * PI / 2.0)
            * (PI / 4.0).cos();
        let v = malmquist_takenaka(1, 0.5);
        assert!((v - direct).norm() < 1e-15 && (v - fourier).norm() < 1e-15);
        let w = malmquist_takenaka(-3, 1.7);
        let d = FRAC_2_PI.sqrt() * i_pow(-3) * Complex64::new(1.0, 3.4).powi(-3) / Complex64::new(1.0, -3.4).powi(-2);
        assert!((w - d).norm() < 1e-15);
    }

    #[test]
    fn tanh_jacobi_values() {
        let t = TanhJacobi::new(0.5, 0.5, 4).unwrap();
        // α = β = 0: p_0 = 1/√2 against dy on (−1, 1)
        assert!((t.eval(0, 0.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(t.eval(3, 80.0).unwrap().abs() < 1e-30);
        let u = TanhJacobi::new(0.75, 0.75, 3).unwrap();
        // α = β = ½: mass π/2
        assert!((u.eval(0, 0.0).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-14);
        assert!((tanh_jacobi(0.75, 0.75, 0, 0.0).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-14);
        // decay rate e^{−2ax} as x → ∞
        let r = u.eval(1, 12.0).unwrap() / u.eval(1, 11.0).unwrap();
        assert!((r - (-1.5f64).exp()).abs() < 1e-8);
    }
}
