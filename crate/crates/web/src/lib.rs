#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! WebAssembly bindings for the page in `www/`.
//!
//! Each export wraps a plain function so the numerics are testable natively.

use favard::basis::Family;
use favard::coeffs::{self, DecayModel};
use favard::expr::Expr;
use favard::family::FamilySpec;
use favard::schrodinger::{free_propagate, PropagatedState};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 4000;
const MAX_CURVES: i32 = 8;

fn linspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(lo < hi) || !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("need lo < hi and 2..={MAX_POINTS} points"));
    }
    Ok((0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect())
}

fn parse_expr(s: &str) -> Result<Expr, String> {
    Expr::parse(s).map_err(|e| e.to_string())
}

/// `[re φ_n(x), im φ_n(x)]` blocks for n = lo..=hi, each block `points` long.
pub fn curves(family: &str, lo: i32, hi: i32, x_lo: f64, x_hi: f64, points: usize) -> Result<Vec<f64>, String> {
    if hi < lo || hi - lo >= MAX_CURVES {
        return Err(format!("choose between 1 and {MAX_CURVES} indices"));
    }
    let spec = FamilySpec::parse(family).map_err(|e| e.to_string())?;
    let xs = linspace(x_lo, x_hi, points)?;
    let ns: Vec<i64> = (lo as i64..=hi as i64).collect();
    let len = ns.iter().map(|&n| if n < 0 { -n } else { n + 1 }).max().unwrap_or(1) as usize;
    let basis = spec.basis(len).map_err(|e| e.to_string())?;
    let table = basis.phi_table(&ns, &xs).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * ns.len() * points);
    for row in &table {
        out.extend(row.iter().map(|z| z.re));
        out.extend(row.iter().map(|z| z.im));
    }
    Ok(out)
}

#[wasm_bindgen]
pub struct Decay {
    abs: Vec<f64>,
    offset: i32,
    param: f64,
    r2: f64,
    message: String,
}

#[wasm_bindgen]
impl Decay {
    /// |f̂_n| for n = offset, offset+1, …
    #[wasm_bindgen(getter)]
    pub fn abs(&self) -> Vec<f64> {
        self.abs.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn offset(&self) -> i32 {
        self.offset
    }

    /// ρ, s or κ; NaN when the fit failed.
    #[wasm_bindgen(getter)]
    pub fn param(&self) -> f64 {
        self.param
    }

    #[wasm_bindgen(getter)]
    pub fn r2(&self) -> f64 {
        self.r2
    }

    /// Why the fit failed, or empty.
    #[wasm_bindgen(getter)]
    pub fn message(&self) -> String {
        self.message.clone()
    }
}

/// MT coefficients of f by FFT in the basis dilated by `scale`, with a fit
/// of the decay model `exp`, `alg` or `stretched:<p>`.
pub fn mt_decay_inner(f: &str, n: usize, scale: f64, model: &str) -> Result<Decay, String> {
    let model = match model.split_once(':') {
        None if model == "exp" => DecayModel::Exponential,
        None if model == "alg" => DecayModel::Algebraic,
        Some(("stretched", p)) => match p.trim().parse::<f64>() {
            Ok(p) if p > 0.0 && p.is_finite() => DecayModel::Stretched(p),
            _ => return Err(format!("bad exponent `{p}`")),
        },
        _ => return Err(format!("unknown model `{model}`")),
    };
    if !n.is_power_of_two() || !(16..=1 << 16).contains(&n) {
        return Err("N must be a power of two between 16 and 65536".into());
    }
    let e = parse_expr(f)?;
    let c = coeffs::mt_coeffs_fft_scaled(|x| e.eval_or_nan(x), n, scale).map_err(|e| e.to_string())?;
    let (param, r2, message) = match coeffs::decay_fit(&c, model) {
        Ok(fit) => (fit.param, fit.r2, String::new()),
        Err(e) => (f64::NAN, f64::NAN, e.to_string()),
    };
    Ok(Decay { abs: c.values.iter().map(|z| z.norm()).collect(), offset: c.offset as i32, param, r2, message })
}

/// `[re u, im u]` of the free solution at time t, expanded in the first
/// `n` Hermite functions.
pub fn free_schrodinger_inner(f0: &str, n: usize, t: f64, x_lo: f64, x_hi: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(1..=64).contains(&n) || !t.is_finite() {
        return Err("need 1 ≤ N ≤ 64 and finite t".into());
    }
    let e = parse_expr(f0)?;
    let xs = linspace(x_lo, x_hi, points)?;
    let basis = FamilySpec::Transformed(Family::Hermite).basis(n + 1).map_err(|e| e.to_string())?;
    let a = coeffs::coeffs_xspace(|x| e.eval_or_nan(x), &basis, n, 20.0, 4001).map_err(|e| e.to_string())?.coeffs;
    let state = PropagatedState::new(&basis, a);
    let u = free_propagate(&state, t).eval(&xs).map_err(|e| e.to_string())?;
    Ok(u.iter().map(|z| z.re).chain(u.iter().map(|z| z.im)).collect())
}

#[wasm_bindgen]
pub fn basis_curves(family: &str, lo: i32, hi: i32, x_lo: f64, x_hi: f64, points: usize) -> Result<Vec<f64>, JsError> {
    curves(family, lo, hi, x_lo, x_hi, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mt_decay(f: &str, n: usize, scale: f64, model: &str) -> Result<Decay, JsError> {
    mt_decay_inner(f, n, scale, model).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn free_schrodinger(f0: &str, n: usize, t: f64, x_lo: f64, x_hi: f64, points: usize) -> Result<Vec<f64>, JsError> {
    free_schrodinger_inner(f0, n, t, x_lo, x_hi, points).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn hermite_curves() {
        let v = curves("hermite", 0, 1, -1.0, 1.0, 3).unwrap();
        assert_eq!(v.len(), 12);
        assert!((v[1] - PI.powf(-0.25)).abs() < 1e-15);
        // φ_1 = −√2 x π^{−1/4} e^{−x²/2}, real
        assert!((v[6 + 2] + 2f64.sqrt() * PI.powf(-0.25) * (-0.5f64).exp()).abs() < 1e-14);
        assert!(v[9..12].iter().all(|&z| z == 0.0));
        assert!(curves("hermite", 0, 9, -1.0, 1.0, 3).is_err());
        assert!(curves("nope", 0, 1, -1.0, 1.0, 3).is_err());
        assert!(curves("hermite", -1, 1, -1.0, 1.0, 3).is_err());
    }

    #[test]
    fn mt_curves_accept_negative_indices() {
        let v = curves("mt", -1, 0, 0.0, 1.0, 2).unwrap();
        // φ_{−1}(0) = −i·conj(φ_0(0)) = −i√(2/π)
        assert!(v[0].abs() < 1e-15 && (v[2] + (2.0 / PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn decay_rate_dilated() {
        let d = mt_decay_inner("1/(1+x^4)", 4096, 1.0, "exp").unwrap();
        assert_eq!(d.abs.len(), 4096);
        assert_eq!(d.offset, -2047);
        assert!((d.param - (1.0 + 2f64.sqrt())).abs() < 1e-3, "{}", d.param);
        let bad = mt_decay_inner("0", 64, 1.0, "exp").unwrap();
        assert!(bad.param.is_nan() && !bad.message.is_empty());
        assert!(mt_decay_inner("1", 100, 1.0, "exp").is_err());
        assert!(mt_decay_inner("1", 64, 1.0, "cubic").is_err());
    }

    #[test]
    fn free_gaussian_spreads_exactly() {
        let t = 0.3;
        let v = free_schrodinger_inner("exp(-x^2/2)", 40, t, -3.0, 3.0, 7).unwrap();
        for i in 0..7 {
            let x = -3.0 + i as f64;
            let z = Complex64::new(1.0, 2.0 * t);
            let want = (Complex64::new(-x * x, 0.0) / (z * 2.0)).exp() / z.sqrt();
            assert!((v[i] - want.re).abs() < 1e-9 && (v[7 + i] - want.im).abs() < 1e-9, "{x}");
        }
    }
}

