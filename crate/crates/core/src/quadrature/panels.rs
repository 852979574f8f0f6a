//! Composite panel rules: Gauss–Legendre in the interior, tanh–sinh on
//! panels that touch a finite support end or a breakpoint.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::recurrence::Support;

pub const GL_ORDER: usize = 32;

/// A quadrature node with exact distances to the ends of the support
/// (infinite when that end is unbounded).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: f64,
    pub w: f64,
    pub from_lo: f64,
    pub from_hi: f64,
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// tanh–sinh rule on [0, 1] as (t, 1 - t, weight), both complements exact.
fn tanh_sinh() -> &'static [(f64, f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let h = 1.0 / 8.0;
        let mut out = Vec::new();
        let kmax = (6.6 / h) as i64;
        for k in -kmax..=kmax {
            let u = k as f64 * h;
            let s = 0.5 * PI * u.sinh();
            let t = 1.0 / (1.0 + (-2.0 * s).exp());
            let tc = 1.0 / (1.0 + (2.0 * s).exp());
            let sech = 1.0 / s.cosh();
            let w = h * 0.5 * sech * sech * 0.5 * PI * u.cosh();
            if t > 0.0 && tc > 0.0 && w > 0.0 {
                out.push((t, tc, w));
            }
        }
        out
    })
}

/// Nodes for ∫_lo^hi over panels of width at most `max_width`.
pub fn support_nodes(support: Support, lo: f64, hi: f64, breaks: &[f64], max_width: f64) -> Vec<Node> {
    let mut cuts = vec![lo];
    cuts.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
    cuts.push(hi);
    let mut out = Vec::new();
    for seg in cuts.windows(2) {
        let (s0, s1) = (seg[0], seg[1]);
        let sing_left = (s0 == support.lo && s0.is_finite()) || breaks.contains(&s0);
        let sing_right = (s1 == support.hi && s1.is_finite()) || breaks.contains(&s1);
        let k = ((s1 - s0) / max_width).ceil().max(1.0) as usize;
        let width = (s1 - s0) / k as f64;
        for p in 0..k {
            let a = s0 + p as f64 * width;
            let b = if p + 1 == k { s1 } else { a + width };
            let left_adj = sing_left && p == 0;
            let right_adj = sing_right && p + 1 == k;
            if left_adj || right_adj {
                let width = b - a;
                for &(t, tc, w) in tanh_sinh() {
                    let x = if t <= 0.5 { a + t * width } else { b - tc * width };
                    let from_lo = if left_adj && a == support.lo {
                        t * width
                    } else {
                        x - support.lo
                    };
                    let from_hi = if right_adj && b == support.hi {
                        tc * width
                    } else {
                        support.hi - x
                    };
                    out.push(Node { x, w: w * width, from_lo, from_hi });
                }
            } else {
                let (xs, ws) = gl32();
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                for (&x, &w) in xs.iter().zip(ws) {
                    let x = mid + half * x;
                    out.push(Node { x, w: w * half, from_lo: x - support.lo, from_hi: support.hi - x });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(GL_ORDER);
        for k in 0..(2 * GL_ORDER) {
            let num: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((num - exact).abs() < 1e-14, "k = {k}: {num} vs {exact}");
        }
        let (x2, w2) = gauss_legendre(2);
        assert!((x2[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15 && (w2[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 t^{-1/2} dt = 2 and ∫_0^1 (1-t)^{-0.9} dt = 10
        let s = Support::new(0.0, 1.0).unwrap();
        let nodes = support_nodes(s, 0.0, 1.0, &[], 0.3);
        let a: f64 = nodes.iter().map(|n| n.w * n.from_lo.powf(-0.5)).sum();
        let b: f64 = nodes.iter().map(|n| n.w * n.from_hi.powf(-0.9)).sum();
        assert!((a - 2.0).abs() < 1e-12, "{a}");
        assert!((b - 10.0).abs() < 1e-10, "{b}");
    }

    #[test]
    fn breakpoint_kink() {
        // ∫_{-1}^{1} |x|^{0.3} dx = 2/1.3
        let s = Support::real_line();
        let nodes = support_nodes(s, -1.0, 1.0, &[0.0], 0.5);
        let v: f64 = nodes.iter().map(|n| n.w * n.x.abs().powf(0.3)).sum();
        assert!((v - 2.0 / 1.3).abs() < 1e-13, "{v}");
    }
}
