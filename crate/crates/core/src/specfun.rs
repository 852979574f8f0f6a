//! Gamma, Beta and half-integer-order Bessel functions.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A Gamma value carried as `value * exp(log_scale)` so that large
/// arguments do not overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaValue {
    pub value: f64,
    pub log_scale: f64,
}

impl GammaValue {
    pub fn to_f64(self) -> f64 {
        self.value * self.log_scale.exp()
    }
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_ln_gamma(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("x = {x} must be positive")));
    }
    if x >= 15.0 {
        return Ok(stirling_ln_gamma(Complex64::new(x, 0.0)).re);
    }
    if x < 0.5 {
        return Ok(lanczos_ln_gamma(x + 1.0) - x.ln());
    }
    Ok(lanczos_ln_gamma(x))
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("gamma", format!("x = {x} must be positive")));
    }
    // Small integers exactly.
    if x <= 25.0 && x.fract() == 0.0 {
        return Ok((1..x as u64).map(|k| k as f64).product());
    }
    if x < 0.5 {
        return Ok(gamma(x + 1.0)? / x);
    }
    Ok(ln_gamma(x)?.exp())
}

/// Γ(x) with an exponent offset; never overflows for finite x > 0.
pub fn gamma_scaled(x: f64) -> Result<GammaValue> {
    let lg = ln_gamma(x)?;
    let log_scale = if lg > 700.0 { lg.floor() } else { 0.0 };
    Ok(GammaValue { value: (lg - log_scale).exp(), log_scale })
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain("beta", format!("arguments ({a}, {b}) must be positive")));
    }
    Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?).exp())
}

// B_{2k} / (2k (2k-1)) for k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    // assumes |z| >= 15 and Re z > 0
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING {
        series += term * c;
        term *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

/// Re log Γ(a + iξ), via upward argument shift followed by Stirling's series.
fn re_ln_gamma_complex(a: f64, xi: f64) -> f64 {
    let mut z = Complex64::new(a, xi);
    let mut shift = 0.0;
    while z.norm() < 15.0 {
        shift += z.norm().ln();
        z += 1.0;
    }
    stirling_ln_gamma(z).re - shift
}

/// |Γ(a + iξ)|² for a > 0.
pub fn gamma_abs2(a: f64, xi: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("gamma_abs2", format!("a = {a} must be positive")));
    }
    Ok((2.0 * re_ln_gamma_complex(a, xi)).exp())
}

/// ln |Γ(a + iξ)|², for weights whose magnitude would underflow.
pub fn ln_gamma_abs2(a: f64, xi: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("ln_gamma_abs2", format!("a = {a} must be positive")));
    }
    Ok(2.0 * re_ln_gamma_complex(a, xi))
}

/// Spherical Bessel function j_n(x), any real x.
pub fn spherical_j(n: usize, x: f64) -> f64 {
    if x < 0.0 {
        let v = spherical_j(n, -x);
        return if n.is_multiple_of(2) { v } else { -v };
    }
    if x < 0.5 {
        return spherical_j_series(n, x);
    }
    if x >= n as f64 + 0.5 {
        // upward recurrence is stable past the turning point
        let j0 = x.sin() / x;
        if n == 0 {
            return j0;
        }
        let mut prev = j0;
        let mut cur = x.sin() / (x * x) - x.cos() / x;
        for k in 1..n {
            let next = (2 * k + 1) as f64 / x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    spherical_j_miller(n, x)
}

fn spherical_j_series(n: usize, x: f64) -> f64 {
    // x^n / (2n+1)!! * sum_k (-x^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1))
    let mut lead = 1.0;
    for k in 0..n {
        lead *= x / (2 * k + 3) as f64;
    }
    // lead = x^n / (3*5*...*(2n+1)) = x^n/(2n+1)!!
    let h = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        term *= h / (k as f64 * (2 * n + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn spherical_j_miller(n: usize, x: f64) -> f64 {
    let start = n + x as usize + 40;
    let mut next = 0.0_f64;
    let mut cur = 1e-300_f64;
    let mut at_n = if start == n { cur } else { 0.0 };
    let mut j1 = 0.0;
    // downward: j_{k-1} = (2k+1)/x j_k - j_{k+1}
    for k in (1..=start).rev() {
        let prev = (2 * k + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if k - 1 == n {
            at_n = cur;
        }
        if k == 1 {
            j1 = next;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            at_n *= 1e-250;
            j1 *= 1e-250;
        }
    }
    let j0 = cur;
    let true_j0 = x.sin() / x;
    let true_j1 = x.sin() / (x * x) - x.cos() / x;
    if true_j0.abs() >= true_j1.abs() {
        at_n * (true_j0 / j0)
    } else {
        at_n * (true_j1 / j1)
    }
}

/// J_{m+1/2}(x) for x > 0.
pub fn bessel_j_half(m: usize, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "bessel_j_half",
            format!("x = {x}; the half-integer order Bessel function is real only for x > 0"),
        ));
    }
    Ok((2.0 * x / PI).sqrt() * spherical_j(m, x))
}
