//! Symmetric tridiagonal eigenproblem by implicit QL with Wilkinson shifts.

use crate::error::{Error, Result};

const MAX_ITER: usize = 50;

/// Eigen-decomposition of a symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// `vectors[i][k]` is component i of the eigenvector for `values[k]`.
    pub vectors: Option<Vec<Vec<f64>>>,
}

/// `diag` has length n, `off` length n - 1 (extra entries are ignored).
pub fn tridiag_eigen(diag: &[f64], off: &[f64], want_vectors: bool) -> Result<TridiagEigen> {
    let n = diag.len();
    if n == 0 {
        return Ok(TridiagEigen { values: vec![], vectors: want_vectors.then(Vec::new) });
    }
    if off.len() + 1 < n {
        return Err(Error::LengthMismatch { expected: n - 1, got: off.len() });
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);
    let mut z: Option<Vec<Vec<f64>>> = want_vectors.then(|| {
        (0..n).map(|i| (0..n).map(|k| if i == k { 1.0 } else { 0.0 }).collect()).collect()
    });

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(Error::NoConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_mut() {
                    for row in z.iter_mut() {
                        let f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = z.map(|z| z.iter().map(|row| order.iter().map(|&k| row[k]).collect()).collect());
    Ok(TridiagEigen { values, vectors })
}
