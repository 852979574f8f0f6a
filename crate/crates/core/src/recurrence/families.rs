//! Closed-form recurrence coefficients and named measures.

use std::f64::consts::PI;
use std::sync::Arc;

use super::measure::{DiscreteMeasure, JacobiWeight, MeasureSpec, Support};
use super::stieltjes::stieltjes;
use super::JacobiMatrix;
use crate::error::{Error, Result};
use crate::specfun;

/// Orthonormal Hermite coefficients for e^{-ξ²}dξ/√π.
pub fn hermite_coeffs(n: usize) -> (f64, f64) {
    (((n + 1) as f64 / 2.0).sqrt(), 0.0)
}

/// Jacobi(α, α) coefficients, normalized to unit mass.
pub fn ultraspherical_coeffs(alpha: f64, n: usize) -> Result<(f64, f64)> {
    if !(alpha > -1.0) {
        return Err(Error::domain("ultraspherical_coeffs", format!("alpha = {alpha} must exceed -1")));
    }
    let n = n as f64;
    let num = (n + 1.0) * (n + 2.0 * alpha + 1.0);
    let den = (2.0 * n + 2.0 * alpha + 1.0) * (2.0 * n + 2.0 * alpha + 3.0);
    Ok(((num / den).sqrt(), 0.0))
}

/// Generalized Laguerre ξ^α e^{-ξ} on (0, ∞).
pub fn laguerre_coeffs(alpha: f64, n: usize) -> Result<(f64, f64)> {
    if !(alpha > -1.0) {
        return Err(Error::domain("laguerre_coeffs", format!("alpha = {alpha} must exceed -1")));
    }
    let n = n as f64;
    Ok((((n + 1.0) * (n + 1.0 + alpha)).sqrt(), 2.0 * n + 1.0 + alpha))
}

/// Generalized Hermite |ξ|^{2η} e^{-ξ²}. The monic recurrence
/// h_{n+1} = ξ h_n - ((n + θ_n)/2) h_{n-1}, θ_n = 0 (n even), 2η (n odd),
/// gives b_n² = (n + 1 + θ_{n+1})/2.
pub fn generalized_hermite_coeffs(eta: f64, n: usize) -> Result<(f64, f64)> {
    if !(eta > -0.5) {
        return Err(Error::domain("generalized_hermite_coeffs", format!("eta = {eta} must exceed -1/2")));
    }
    let m = n + 1;
    let theta = if m % 2 == 1 { 2.0 * eta } else { 0.0 };
    Ok((((m as f64 + theta) / 2.0).sqrt(), 0.0))
}

/// Orthonormal Jacobi(α, β) coefficients by Stieltjes on the unit-mass
/// Jacobi measure.
pub fn jacobi_poly_coeffs(alpha: f64, beta: f64, n: usize) -> Result<JacobiMatrix> {
    let m = MeasureSpec::jacobi(alpha, beta)?;
    stieltjes(&m, n, (40 * n).max(400))
}

/// Symmetrized Charlier masses σ_k ∝ a^{|k|}/|k|! on k = -K..K.
pub fn charlier_bilateral(a: f64, k_max: usize) -> Result<MeasureSpec> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("charlier_bilateral", format!("a = {a} must be positive")));
    }
    let k_max = k_max as i64;
    let mut points = Vec::with_capacity(2 * k_max as usize + 1);
    let mut raw = Vec::with_capacity(points.capacity());
    for k in -k_max..=k_max {
        let m = k.unsigned_abs();
        // a^m / m! via logs
        let ln = m as f64 * a.ln() - specfun::ln_gamma(m as f64 + 1.0)?;
        points.push(k as f64);
        raw.push(ln.exp());
    }
    let c = 1.0 / (2.0 * a.exp() - 1.0);
    let masses = raw.into_iter().map(|r| r * c).collect();
    Ok(MeasureSpec::Discrete(DiscreteMeasure::new_normalized(
        format!("charlier:{a}"),
        points,
        masses,
    )?))
}

impl JacobiMatrix {
    pub fn hermite(n: usize) -> Self {
        Self::from_fn(n, hermite_coeffs).expect("hermite coefficients are positive")
    }

    pub fn legendre(n: usize) -> Self {
        Self::ultraspherical(0.0, n).expect("legendre coefficients are positive")
    }

    pub fn ultraspherical(alpha: f64, n: usize) -> Result<Self> {
        ultraspherical_coeffs(alpha, 0)?;
        Self::from_fn(n, |k| ultraspherical_coeffs(alpha, k).unwrap())
    }

    pub fn laguerre(alpha: f64, n: usize) -> Result<Self> {
        laguerre_coeffs(alpha, 0)?;
        Self::from_fn(n, |k| laguerre_coeffs(alpha, k).unwrap())
    }

    pub fn generalized_hermite(eta: f64, n: usize) -> Result<Self> {
        generalized_hermite_coeffs(eta, 0)?;
        Self::from_fn(n, |k| generalized_hermite_coeffs(eta, k).unwrap())
    }
}

impl MeasureSpec {
    /// e^{-ξ²}/√π on ℝ.
    pub fn hermite() -> Self {
        MeasureSpec::continuous_with_mass(
            "hermite",
            Support::real_line(),
            Arc::new(|x: f64| (-x * x).exp()),
            PI.sqrt(),
            vec![],
        )
    }

    /// |ξ|^{2η} e^{-ξ²} / Γ(η + 1/2).
    pub fn generalized_hermite(eta: f64) -> Result<Self> {
        if !(eta > -0.5) {
            return Err(Error::domain("generalized_hermite", format!("eta = {eta} must exceed -1/2")));
        }
        Ok(MeasureSpec::continuous_with_mass(
            format!("genhermite:{eta}"),
            Support::real_line(),
            Arc::new(move |x: f64| if x == 0.0 && eta > 0.0 { 0.0 } else { x.abs().powf(2.0 * eta) * (-x * x).exp() }),
            specfun::gamma(eta + 0.5)?,
            vec![0.0],
        ))
    }

    /// (1-ξ)^α (1+ξ)^β on (-1, 1), unit mass.
    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        let w = JacobiWeight::new(alpha, beta)?;
        let mass = w.mass()?;
        Ok(MeasureSpec::continuous_with_mass(
            format!("jacobi:{alpha},{beta}"),
            Support::new(-1.0, 1.0)?,
            Arc::new(w),
            mass,
            vec![],
        ))
    }

    pub fn legendre() -> Self {
        Self::jacobi(0.0, 0.0).expect("valid parameters")
    }

    /// ξ^α e^{-ξ} on (0, ∞), unit mass.
    pub fn laguerre(alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::domain("laguerre", format!("alpha = {alpha} must exceed -1")));
        }
        Ok(MeasureSpec::continuous_with_mass(
            format!("laguerre:{alpha}"),
            Support::new(0.0, f64::INFINITY)?,
            Arc::new(move |x: f64| if x <= 0.0 { if alpha == 0.0 { 1.0 } else { 0.0 } } else { x.powf(alpha) * (-x).exp() }),
            specfun::gamma(alpha + 1.0)?,
            vec![],
        ))
    }

    /// (1/2π)|Γ(a+iξ/s)Γ(b-iξ/s)|² dξ, unit mass. `s = 1` is the continuous
    /// Hahn measure; `s = 2` is the dilation whose transform is the
    /// tanh–Jacobi system in the variable x rather than x/2.
    pub fn continuous_hahn_scaled(a: f64, b: f64, s: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::domain("continuous_hahn", format!("({a}, {b}) must be positive")));
        }
        if !(s > 0.0) {
            return Err(Error::domain("continuous_hahn", format!("scale {s} must be positive")));
        }
        // Total mass of (1/2π)|Γ(a+iξ)Γ(b-iξ)|²dξ is Γ(2a)Γ(2b)Γ(a+b)²/Γ(2a+2b)
        // (Barnes' first lemma), times s after dilation.
        let ln_mass = specfun::ln_gamma(2.0 * a)? + specfun::ln_gamma(2.0 * b)?
            + 2.0 * specfun::ln_gamma(a + b)?
            - specfun::ln_gamma(2.0 * a + 2.0 * b)?;
        let ln_ref = specfun::ln_gamma_abs2(a, 0.0)? + specfun::ln_gamma_abs2(b, 0.0)?;
        let weight = move |x: f64| {
            let t = x / s;
            let l = specfun::ln_gamma_abs2(a, t).unwrap() + specfun::ln_gamma_abs2(b, -t).unwrap();
            (l - ln_ref).exp() / (2.0 * PI)
        };
        let mass = s * (ln_mass - ln_ref).exp();
        let name = if s == 1.0 { format!("conthahn:{a},{b}") } else { format!("conthahn:{a},{b}/{s}") };
        Ok(MeasureSpec::continuous_with_mass(name, Support::real_line(), Arc::new(weight), mass, vec![]))
    }

    pub fn continuous_hahn(a: f64, b: f64) -> Result<Self> {
        Self::continuous_hahn_scaled(a, b, 1.0)
    }
}
