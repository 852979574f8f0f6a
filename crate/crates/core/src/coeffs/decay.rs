//! Least-squares decay-rate fits for coefficient sequences.

use super::CoefficientVector;
use crate::error::{Error, Result};

const MIN_INDEX: i64 = 8;
const FLOOR: f64 = 1e-13;
const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum DecayModel {
    /// |f̂_n| ~ Cρ^{−n}
    Exponential,
    /// |f̂_n| ~ Cn^{−s}
    Algebraic,
    /// |f̂_n| ~ Ce^{−κn^p}
    Stretched(f64),
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DecayFit {
    pub model: DecayModel,
    /// ρ, s or κ.
    pub param: f64,
    /// Fitted log C.
    pub intercept: f64,
    pub r2: f64,
    /// Number of points that entered the fit.
    pub used: usize,
}

/// Fits log|f̂_n| against n, ln n or n^p.
///
/// Negative indices are folded onto m = −n−1. Points with m < 8 or
/// |f̂| ≤ 1e−13 are dropped; at least 16 must remain.
pub fn decay_fit(coeffs: &CoefficientVector, model: DecayModel) -> Result<DecayFit> {
    if let DecayModel::Stretched(p) = model {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("stretch exponent {p} must be positive")));
        }
    }
    let pts: Vec<(f64, f64)> = coeffs
        .indices()
        .zip(&coeffs.values)
        .filter_map(|(n, v)| {
            let m = if n < 0 { -n - 1 } else { n };
            let a = v.norm();
            (m >= MIN_INDEX && a > FLOOR && a.is_finite()).then(|| {
                let m = m as f64;
                let x = match model {
                    DecayModel::Exponential => m,
                    DecayModel::Algebraic => m.ln(),
                    DecayModel::Stretched(p) => m.powf(p),
                };
                (x, a.ln())
            })
        })
        .collect();
    if pts.len() < MIN_POINTS {
        return Err(Error::Fit(format!("{} usable coefficients, need {MIN_POINTS}", pts.len())));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all points share one abscissa".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    let param = match model {
        DecayModel::Exponential => (-slope).exp(),
        _ => -slope,
    };
    Ok(DecayFit { model, param, intercept, r2, used: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(lo: i64, n: usize, f: impl Fn(f64) -> f64) -> CoefficientVector {
        let v: Vec<f64> = (lo..lo + n as i64).map(|k| f((if k < 0 { -k - 1 } else { k }) as f64)).collect();
        CoefficientVector::from_real(lo, &v)
    }

    #[test]
    fn too_few_points() {
        let c = seq(0, 20, |m| 0.5f64.powf(m));
        assert!(matches!(decay_fit(&c, DecayModel::Exponential), Err(Error::Fit(_))));
        assert!(decay_fit(&seq(0, 40, |m| 1.0 / m), DecayModel::Stretched(0.0)).is_err());
    }

    #[test]
    fn folds_negative_indices() {
        let c = seq(-31, 64, |m| 0.8f64.powf(m));
        let fit = decay_fit(&c, DecayModel::Exponential).unwrap();
        assert!((fit.param - 1.25).abs() < 1e-12);
        assert_eq!(fit.used, 2 * 24);
    }

    proptest! {
        #[test]
        fn recovers_exponential(rho in 1.05f64..3.0, c in 0.1f64..10.0) {
            let s = seq(0, 40, |m| c * rho.powf(-m));
            let fit = decay_fit(&s, DecayModel::Exponential).unwrap();
            prop_assert!((fit.param - rho).abs() < 1e-9 * rho);
            prop_assert!((fit.intercept - c.ln()).abs() < 1e-8);
            prop_assert!(fit.r2 > 1.0 - 1e-12);
        }

        #[test]
        fn recovers_algebraic(s in 0.5f64..4.0) {
            let v = seq(0, 200, |m| m.powf(-s));
            let fit = decay_fit(&v, DecayModel::Algebraic).unwrap();
            prop_assert!((fit.param - s).abs() < 1e-9);
        }

        #[test]
        fn recovers_stretched(p in 0.3f64..0.6, kappa in 0.5f64..1.0) {
            let v = seq(0, 100, |m| (-kappa * m.powf(p)).exp());
            let fit = decay_fit(&v, DecayModel::Stretched(p)).unwrap();
            prop_assert!((fit.param - kappa).abs() < 1e-9);
        }
    }
}
