//! Discretized Stieltjes procedure.

use super::measure::{ContinuousMeasure, DiscreteMeasure, MeasureSpec};
use super::JacobiMatrix;
use crate::error::{Error, Result};
use crate::quadrature::panels::GL_ORDER;

/// First `n` recurrence coefficient pairs of the orthonormal system for
/// `measure`, from a discretization with at least `m` nodes.
pub fn stieltjes(measure: &MeasureSpec, n: usize, m: usize) -> Result<JacobiMatrix> {
    if m < 2 * n {
        return Err(Error::InvalidArgument(format!("discretization size {m} below 2N = {}", 2 * n)));
    }
    match measure {
        MeasureSpec::Discrete(d) => discrete(d, n),
        MeasureSpec::Continuous(c) => continuous(c, n, m),
    }
}

fn discrete(d: &DiscreteMeasure, n: usize) -> Result<JacobiMatrix> {
    run(&d.points, &d.masses, n)
}

fn continuous(c: &ContinuousMeasure, n: usize, m: usize) -> Result<JacobiMatrix> {
    let (mut lo, mut hi) = c.truncation(n, 1e-30)?;
    for _ in 0..6 {
        let span = hi - lo;
        let panels = m.div_ceil(GL_ORDER).max(1);
        let width = (span / panels as f64).min(0.25).max(span / 4096.0);
        let nodes = c.nodes(lo, hi, width);
        let xs: Vec<f64> = nodes.iter().map(|q| q.x).collect();
        let ws: Vec<f64> = nodes.iter().map(|q| q.w * c.density_at(q)).collect();
        if let Some((i, &w)) = ws.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::Evaluation { node: xs[i], value: w });
        }
        let j = run(&xs, &ws, n)?;
        // p_k² w must be negligible at the truncation points
        let edge = |x: f64| -> Result<f64> {
            let w = c.density(x);
            if w == 0.0 {
                return Ok(0.0);
            }
            let vals = j.eval_all_scaled(x, n)?;
            Ok(vals
                .iter()
                .map(|(mm, s)| (2.0 * s + w.ln()).exp() * mm * mm)
                .fold(0.0, f64::max))
        };
        let bad_lo = !c.support.lo.is_finite() && edge(lo)? > 1e-24;
        let bad_hi = !c.support.hi.is_finite() && edge(hi)? > 1e-24;
        if !bad_lo && !bad_hi {
            return Ok(j);
        }
        let mid = 0.5 * (lo + hi);
        if bad_lo {
            lo = mid - 1.5 * (mid - lo);
        }
        if bad_hi {
            hi = mid + 1.5 * (hi - mid);
        }
    }
    Err(Error::Contract(format!("cannot find a truncation for '{}'", c.name)))
}

/// Lanczos-type Stieltjes iteration on a discrete measure Σ w_i δ_{x_i}.
fn run(xs: &[f64], ws: &[f64], n: usize) -> Result<JacobiMatrix> {
    let total: f64 = ws.iter().sum();
    let mut prev = vec![0.0; xs.len()];
    let mut cur = vec![1.0 / total.sqrt(); xs.len()];
    let mut b = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    let mut b_prev = 0.0;
    for k in 0..n {
        let ck: f64 = xs.iter().zip(ws).zip(&cur).map(|((x, w), p)| w * x * p * p).sum();
        let mut next: Vec<f64> = (0..xs.len()).map(|i| (xs[i] - ck) * cur[i] - b_prev * prev[i]).collect();
        // one pass of reorthogonalization against the last two
        for q in [&cur, &prev] {
            let dot: f64 = (0..xs.len()).map(|i| ws[i] * next[i] * q[i]).sum();
            for i in 0..xs.len() {
                next[i] -= dot * q[i];
            }
        }
        let nrm2: f64 = ws.iter().zip(&next).map(|(w, v)| w * v * v).sum();
        let bk = nrm2.sqrt();
        let scale = xs.iter().map(|x| x.abs()).fold(1.0, f64::max);
        if !(bk > 1e-13 * scale) {
            return Err(Error::Degenerate { index: k, value: bk });
        }
        for v in next.iter_mut() {
            *v /= bk;
        }
        b.push(bk);
        c.push(ck);
        prev = std::mem::replace(&mut cur, next);
        b_prev = bk;
    }
    JacobiMatrix::new(b, c)
}
