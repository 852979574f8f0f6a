//! Gauss rules from Jacobi matrices and panel integration of oscillatory
//! Fourier-type integrals.

pub mod eigen;
pub mod panels;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recurrence::{JacobiMatrix, Support};

pub use eigen::{tridiag_eigen, TridiagEigen};
pub use panels::{gauss_legendre, Node};

/// Nodes (ascending) and positive weights of a Gauss rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Highest polynomial degree integrated exactly.
    pub exactness: usize,
    /// Name of the measure the rule integrates against, when known.
    pub target: Option<String>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn with_target(mut self, name: impl Into<String>) -> Self {
        self.target = Some(name.into());
        self
    }
}

/// N-point Gauss rule for the unit-mass measure of `j`.
///
/// Nodes are the eigenvalues of the leading N×N block. Weights use the
/// Christoffel form 1/Σ_{k<N} p_k(x)², which equals the squared first
/// eigenvector component but keeps relative accuracy in tiny weights.
pub fn golub_welsch(j: &JacobiMatrix, n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > j.len() {
        return Err(Error::Index { index: n as i64, len: j.len() });
    }
    let eig = tridiag_eigen(&j.c[..n], &j.b[..n - 1], false)?;
    let mut weights = Vec::with_capacity(n);
    for &x in &eig.values {
        let vals = j.eval_all_scaled(x, n)?;
        let top = vals.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = vals.iter().map(|(m, s)| m * m * (2.0 * (s - top)).exp()).sum();
        weights.push((-2.0 * top).exp() / sum);
    }
    Ok(QuadratureRule { nodes: eig.values, weights, exactness: 2 * n - 1, target: None })
}

/// Σ w_i f(x_i).
pub fn integrate<C: Into<Complex64>>(f: impl Fn(f64) -> C, rule: &QuadratureRule) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v: Complex64 = f(x).into();
        if !v.is_finite() {
            return Err(Error::Evaluation { node: x, value: v.norm() });
        }
        acc += w * v;
    }
    Ok(acc)
}

const MAX_NODES: usize = 1 << 21;

/// Where the integrand is negligible: |g| < 1e-18·max|g| beyond [lo, hi].
pub(crate) fn truncate(g: &dyn Fn(f64) -> f64, support: Support) -> Result<(f64, f64)> {
    let centre = if support.contains(0.0) {
        0.0
    } else if support.lo.is_finite() {
        support.lo
    } else {
        support.hi
    };
    let scan = |dir: f64| -> Result<f64> {
        let mut x = centre;
        let mut peak = 0.0f64;
        let mut last_big = centre;
        while (x - centre).abs() < 1e5 {
            let v = g(x).abs();
            if !v.is_finite() {
                return Err(Error::Evaluation { node: x, value: v });
            }
            peak = peak.max(v);
            if v >= 1e-18 * peak {
                last_big = x;
            } else if (x - last_big).abs() > 4.0 + 0.25 * last_big.abs() {
                return Ok(last_big + dir * 0.25);
            }
            x += dir * (0.05 + 0.01 * (x - centre).abs());
        }
        Err(Error::Contract("integrand does not decay; cannot truncate".into()))
    };
    let lo = if support.lo.is_finite() { support.lo } else { scan(-1.0)? };
    let hi = if support.hi.is_finite() { support.hi } else { scan(1.0)? };
    Ok((lo, hi))
}

/// ∫ e^{ixξ} g(node) dξ over `nodes`.
pub(crate) fn fourier_sum(nodes: &[Node], g: &dyn Fn(&Node) -> Complex64, x: f64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in nodes {
        let v = g(n);
        if !v.is_finite() {
            return Err(Error::Evaluation { node: n.x, value: v.norm() });
        }
        acc += n.w * v * Complex64::from_polar(1.0, x * n.x);
    }
    Ok(acc)
}

/// (1/√2π)∫ e^{ixξ} g(ξ) dξ on `[lo, hi]`, refining panels by doubling
/// until two successive levels agree to `tol`. `freq` bounds any extra
/// oscillation of g itself (rad per unit ξ).
pub(crate) fn oscillatory_on(
    g: &dyn Fn(&Node) -> Complex64,
    support: Support,
    breaks: &[f64],
    (lo, hi): (f64, f64),
    x: f64,
    freq: f64,
    tol: f64,
) -> Result<(Complex64, f64)> {
    let norm = 1.0 / (2.0 * PI).sqrt();
    let mut width = (PI / (1.0 + x.abs() + freq)).min(1.0);
    let mut prev = fourier_sum(&panels::support_nodes(support, lo, hi, breaks, width), g, x)? * norm;
    loop {
        width *= 0.5;
        let nodes = panels::support_nodes(support, lo, hi, breaks, width);
        let cur = fourier_sum(&nodes, g, x)? * norm;
        let est = (cur - prev).norm();
        if est <= tol {
            return Ok((cur, est));
        }
        if 2 * nodes.len() > MAX_NODES {
            return Err(Error::Accuracy { tol, achieved: est });
        }
        prev = cur;
    }
}

/// (1/√2π)∫ e^{ixξ} p(ξ)√w(ξ) dξ over `support`, truncated where the
/// integrand drops below 1e-18 of its maximum.
pub fn oscillatory_transform(
    p: impl Fn(f64) -> f64,
    sqrtw: impl Fn(f64) -> f64,
    support: Support,
    x: f64,
    tol: f64,
) -> Result<Complex64> {
    let g = |xi: f64| {
        let s = sqrtw(xi);
        if s == 0.0 {
            0.0
        } else {
            p(xi) * s
        }
    };
    let range = truncate(&g, support)?;
    let gn = |n: &Node| Complex64::from(g(n.x));
    Ok(oscillatory_on(&gn, support, &[], range, x, 0.0, tol)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{hermite_coeffs, ultraspherical_coeffs, laguerre_coeffs};
    use crate::specfun;

    fn hermite(n: usize) -> JacobiMatrix {
        JacobiMatrix::from_fn(n, hermite_coeffs).unwrap()
    }

    #[test]
    fn small_rules() {
        let r = golub_welsch(&hermite(5), 1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
        let leg = JacobiMatrix::from_fn(5, |n| ultraspherical_coeffs(0.0, n).unwrap()).unwrap();
        let r = golub_welsch(&leg, 2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 0.5).abs() < 1e-15 && (r.weights[1] - 0.5).abs() < 1e-15);
        assert!(golub_welsch(&leg, 6).is_err());
        assert_eq!(r.exactness, 3);
    }

    #[test]
    fn hermite_moment() {
        let r = golub_welsch(&hermite(20), 20).unwrap();
        let m = integrate(|x| x.powi(38), &r).unwrap().re;
        let exact = (specfun::ln_gamma(19.5).unwrap() - specfun::ln_gamma(0.5).unwrap()).exp();
        assert!((m / exact - 1.0).abs() < 1e-12, "{m} vs {exact}");
        let total: f64 = r.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn integrate_orthonormality() {
        let j = hermite(10);
        let r = golub_welsch(&j, 4).unwrap();
        let one = integrate(|_| 1.0, &r).unwrap();
        let p11 = integrate(|x| j.eval_poly(1, x).unwrap().powi(2), &r).unwrap();
        let p12 = integrate(|x| j.eval_poly(1, x).unwrap() * j.eval_poly(2, x).unwrap(), &r).unwrap();
        assert!((one.re - 1.0).abs() < 1e-14 && (p11.re - 1.0).abs() < 1e-14 && p12.norm() < 1e-14);
        assert!(matches!(integrate(|x: f64| x.ln(), &golub_welsch(&j, 4).unwrap()), Err(Error::Evaluation { .. })));
    }

    #[test]
    fn exactness_all_families() {
        let n = 20;
        let fams = [
            hermite(2 * n),
            JacobiMatrix::from_fn(2 * n, |k| ultraspherical_coeffs(0.0, k).unwrap()).unwrap(),
            JacobiMatrix::from_fn(2 * n, |k| ultraspherical_coeffs(1.5, k).unwrap()).unwrap(),
            JacobiMatrix::from_fn(2 * n, |k| laguerre_coeffs(0.5, k).unwrap()).unwrap(),
        ];
        for j in &fams {
            let r = golub_welsch(j, n).unwrap();
            let p: Vec<Vec<f64>> = r.nodes.iter().map(|&x| j.eval_all(x, 2 * n).unwrap()).collect();
            for a in 0..2 * n {
                for b in 0..2 * n - a {
                    let v: f64 = r.weights.iter().zip(&p).map(|(w, p)| w * p[a] * p[b]).sum();
                    let d = if a == b { 1.0 } else { 0.0 };
                    assert!((v - d).abs() < 1e-12, "({a},{b}): {v}");
                }
            }
        }
    }

    #[test]
    fn interlacing() {
        let j = hermite(30);
        for n in 2..25 {
            let a = golub_welsch(&j, n).unwrap().nodes;
            let b = golub_welsch(&j, n + 1).unwrap().nodes;
            for k in 0..n {
                assert!(b[k] < a[k] && a[k] < b[k + 1]);
            }
        }
    }

    #[test]
    fn transform_examples() {
        let unit = Support::new(-1.0, 1.0).unwrap();
        let v = oscillatory_transform(|_| 1.0, |_| 0.5f64.sqrt(), unit, 0.0, 1e-13).unwrap();
        assert!((v.re - 1.0 / PI.sqrt()).abs() < 1e-13 && v.im.abs() < 1e-15);
        let x = PI / 2.0;
        let v = oscillatory_transform(|_| 1.0, |_| 0.5f64.sqrt(), unit, x, 1e-13).unwrap();
        assert!((v.re - 0.35917424).abs() < 1e-8);
        let h = oscillatory_transform(|_| 1.0, |xi| (-xi * xi / 2.0).exp() / PI.powf(0.25), Support::real_line(), 0.0, 1e-13)
            .unwrap();
        assert!((h.re - PI.powf(-0.25)).abs() < 1e-13);
        // Gaussian transform at large x
        let h = oscillatory_transform(|_| 1.0, |xi| (-xi * xi / 2.0).exp(), Support::real_line(), 7.0, 1e-14).unwrap();
        assert!((h.re - (-24.5f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn refinement_error_shrinks() {
        // error estimates at successive panel counts decrease by at least half
        let sup = Support::new(-1.0, 1.0).unwrap();
        let g = |n: &Node| Complex64::from((1.0 - n.x * n.x).powi(3));
        let norm = 1.0 / (2.0 * PI).sqrt();
        let x = 40.0;
        let mut w = 0.8;
        let vals: Vec<Complex64> = (0..5)
            .map(|_| {
                let v = fourier_sum(&panels::support_nodes(sup, -1.0, 1.0, &[], w), &g, x).unwrap() * norm;
                w *= 0.5;
                v
            })
            .collect();
        let est: Vec<f64> = vals.windows(2).map(|p| (p[1] - p[0]).norm()).collect();
        for e in est.windows(2) {
            assert!(e[1] <= 0.5 * e[0] || e[1] < 1e-15, "{est:?}");
        }
    }
}
