//! 2π-periodic orthonormal systems φ_n(x) = iⁿ Σ_k √σ_k p_n(k) e^{ikx}
//! generated by a discrete measure on the integers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::i_pow;
use crate::error::{Error, Result};
use crate::recurrence::{charlier_bilateral, stieltjes, JacobiMatrix, MeasureSpec};
use crate::specfun::ln_gamma;

const TAIL: f64 = 1e-22;

#[derive(Debug, Clone)]
pub struct PeriodicBasis {
    pub measure: MeasureSpec,
    pub jacobi: JacobiMatrix,
    /// Fourier modes run over |k| ≤ K.
    pub k_max: usize,
    /// Fourier coefficients √σ_k p_n(k), n ≤ len, k = −K..K.
    modes: Vec<Vec<f64>>,
}

impl PeriodicBasis {
    /// Bilateral Charlier system σ_k ∝ a^{|k|}/|k|!, with φ_0…φ_len available.
    ///
    /// K is the smallest cut with a^K/K! < 1e−22 whose discarded tail
    /// Σ_{|k|>K} σ_k p_n(k)² is also below 1e−22 for every n ≤ len.
    pub fn charlier(a: f64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidArgument("len must be positive".into()));
        }
        let mut k0 = 0usize;
        while k0 as f64 * a.ln() - ln_gamma(k0 as f64 + 1.0)? >= TAIL.ln() {
            k0 += 1;
        }
        let k0 = k0.max(len);
        let wide = k0 + 2 * len + 16;
        let probe = Self::build(charlier_bilateral(a, wide)?, len, wide)?;
        let sigma = |k: usize| probe.modes[0][wide + k].powi(2);
        let mut k = k0;
        while k < wide {
            let tail = (k + 1..=wide)
                .map(|j| (0..=len).map(|n| probe.modes[n][wide + j].powi(2) / sigma(j)).fold(0.0, f64::max) * sigma(j))
                .sum::<f64>();
            if 2.0 * tail < TAIL {
                break;
            }
            k += 1;
        }
        if k == wide {
            return Err(Error::Contract(format!("no Fourier cut below |k| = {wide}")));
        }
        Self::build(charlier_bilateral(a, k)?, len, k)
    }

    fn build(measure: MeasureSpec, len: usize, k_max: usize) -> Result<Self> {
        let jacobi = stieltjes(&measure, len, 2 * len)?;
        let MeasureSpec::Discrete(d) = &measure else {
            return Err(Error::InvalidArgument("discrete measure required".into()));
        };
        let mut modes = vec![vec![0.0; d.points.len()]; len + 1];
        let mut p = vec![0.0; len + 1];
        for (j, (&k, &s)) in d.points.iter().zip(&d.masses).enumerate() {
            jacobi.eval_all_into(k, &mut p);
            for n in 0..=len {
                modes[n][j] = s.sqrt() * p[n];
            }
        }
        Ok(Self { measure, jacobi, k_max, modes })
    }

    /// Highest index n with φ_n available.
    pub fn max_index(&self) -> usize {
        self.modes.len() - 1
    }

    /// Fourier coefficients of φ_n, k = −K..K.
    pub fn fourier(&self, n: usize) -> Result<Vec<Complex64>> {
        let row = self.modes.get(n).ok_or(Error::Index { index: n as i64, len: self.modes.len() })?;
        Ok(row.iter().map(|&v| i_pow(n as i64) * v).collect())
    }

    pub fn phi(&self, n: usize, x: f64) -> Result<Complex64> {
        self.synth(n, x, false)
    }

    /// φ_n' by termwise differentiation of the Fourier sum.
    pub fn phi_deriv(&self, n: usize, x: f64) -> Result<Complex64> {
        self.synth(n, x, true)
    }

    fn synth(&self, n: usize, x: f64, deriv: bool) -> Result<Complex64> {
        let c = self.fourier(n)?;
        let k0 = self.k_max as i64;
        Ok(c.iter()
            .enumerate()
            .map(|(j, &v)| {
                let k = j as i64 - k0;
                let e = Complex64::from_polar(1.0, k as f64 * x);
                if deriv { Complex64::new(0.0, k as f64) * v * e } else { v * e }
            })
            .sum())
    }

    /// (1/2π)∫φ_m conj(φ_n) over [−π, π] by the M-point trapezoid rule,
    /// m, n < N. Requires M ≥ 4K so the rule is exact for the products.
    pub fn gram(&self, n: usize, m: usize) -> Result<Vec<Vec<Complex64>>> {
        if m < 4 * self.k_max {
            return Err(Error::Contract(format!("{m} grid points below 4K = {}", 4 * self.k_max)));
        }
        if n > self.modes.len() {
            return Err(Error::Index { index: n as i64 - 1, len: self.modes.len() });
        }
        let xs: Vec<f64> = (0..m).map(|j| -PI + 2.0 * PI * j as f64 / m as f64).collect();
        let vals: Vec<Vec<Complex64>> =
            (0..n).map(|k| xs.iter().map(|&x| self.phi(k, x)).collect::<Result<_>>()).collect::<Result<_>>()?;
        Ok((0..n)
            .map(|i| (0..n).map(|j| vals[i].iter().zip(&vals[j]).map(|(a, b)| a * b.conj()).sum::<Complex64>() / m as f64).collect())
            .collect())
    }

    /// max over n < N and a 97-point grid of
    /// |φ_n' + b_{n−1}φ_{n−1} − ic_nφ_n − b_nφ_{n+1}|.
    pub fn diff_check(&self, n: usize) -> Result<f64> {
        if n > self.jacobi.len() {
            return Err(Error::Index { index: n as i64, len: self.jacobi.len() });
        }
        let (b, c) = (&self.jacobi.b, &self.jacobi.c);
        let mut worst = 0.0f64;
        for j in 0..97 {
            let x = -PI + 2.0 * PI * j as f64 / 96.0;
            for k in 0..n {
                let mut r = self.phi_deriv(k, x)? - Complex64::new(0.0, c[k]) * self.phi(k, x)? - b[k] * self.phi(k + 1, x)?;
                if k > 0 {
                    r += b[k - 1] * self.phi(k - 1, x)?;
                }
                worst = worst.max(r.norm());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charlier_phi0() {
        let p = PeriodicBasis::charlier(0.5, 8).unwrap();
        // direct summation with σ_k = a^{|k|}/|k|!/(2e^a − 1)
        let z = 1.0 / (2.0 * 0.5f64.exp() - 1.0);
        let mut direct = 0.0;
        let mut fact = 1.0;
        for k in 0..40 {
            if k > 0 {
                fact *= k as f64;
            }
            let s = (0.5f64.powi(k) / fact * z).sqrt();
            direct += if k == 0 { s } else { 2.0 * s };
        }
        let v = p.phi(0, 0.0).unwrap();
        assert!((v.re - direct).abs() < 1e-12 && v.im.abs() < 1e-15);
        assert!(v.re > 0.0);
    }

    #[test]
    fn real_and_periodic() {
        let p = PeriodicBasis::charlier(0.5, 8).unwrap();
        for n in 0..=8 {
            for &x in &[-2.9, -0.4, 0.0, 1.1, 3.0] {
                let v = p.phi(n, x).unwrap();
                assert!(v.im.abs() < 1e-12, "{n} {x} {v}");
                assert!((p.phi(n, x + 2.0 * PI).unwrap() - v).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn orthonormal() {
        let p = PeriodicBasis::charlier(0.5, 8).unwrap();
        let g = p.gram(9, 4096).unwrap();
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).norm() < 1e-12, "{i} {j} {v}");
            }
        }
        assert!(matches!(p.gram(4, 4 * p.k_max - 1), Err(Error::Contract(_))));
    }

    #[test]
    fn differential_recurrence() {
        for a in [0.5, 2.0] {
            let p = PeriodicBasis::charlier(a, 8).unwrap();
            assert!(p.diff_check(8).unwrap() < 1e-10);
        }
        let p = PeriodicBasis::charlier(0.5, 4).unwrap();
        // the symmetric measure has c_n = 0
        assert!(p.jacobi.c.iter().all(|c| c.abs() < 1e-14));
        assert!(p.diff_check(5).is_err());
    }

    #[test]
    fn cut_is_adequate() {
        let p = PeriodicBasis::charlier(0.5, 8).unwrap();
        let MeasureSpec::Discrete(d) = &p.measure else { unreachable!() };
        let k = p.k_max as f64;
        assert_eq!(d.points.first(), Some(&-k));
        assert!(0.5f64.powf(k) / crate::specfun::gamma(k + 1.0).unwrap() < TAIL);
        assert!(p.max_index() == 8);
    }
}
