//! Free Schrödinger flow u_t = i u_xx in a transformed basis, and Strang
//! splitting for u_t = i u_xx − iV(x)u.
//!
//! Free flow multiplies the Fourier transform by e^{−iξ²t}, so putting the
//! multiplier inside the transform that defines φ_n gives functions ψ_n(x,t)
//! with u(x,t) = Σ û_n ψ_n(x,t) for fixed coefficients û.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::basis::{hermite_function, i_pow, Family, Phase, PhaseFn, Strategy, TransformedBasis};
use crate::coeffs::CoefficientVector;
use crate::diffop::DiffMatrix;
use crate::error::{Error, Result};
use crate::quadrature::golub_welsch;
use crate::recurrence::JacobiMatrix;

/// Fourier-side multiplier rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub enum Multiplier {
    /// e^{−iξ²t}, the solution operator of u_t = i u_xx.
    #[default]
    Schrodinger,
    /// e^{iξt²}, kept for comparison only.
    Printed,
}

impl Multiplier {
    pub fn phase(self, t: f64) -> PhaseFn {
        match self {
            Self::Schrodinger => Arc::new(move |xi: f64| -xi * xi * t),
            Self::Printed => Arc::new(move |xi: f64| xi * t * t),
        }
    }
}

/// ψ_n(x, t); equals φ_n(x) at t = 0.
pub fn free_psi(basis: &TransformedBasis, n: i64, x: f64, t: f64) -> Result<Complex64> {
    free_psi_with(basis, Multiplier::Schrodinger, n, x, t)
}

pub fn free_psi_with(basis: &TransformedBasis, m: Multiplier, n: i64, x: f64, t: f64) -> Result<Complex64> {
    if t == 0.0 {
        return basis.phi(n, x);
    }
    if hermite_closed_form(basis, m) && basis.index_range().contains(&n) {
        return Ok(hermite_free_psi(n as usize, x, t));
    }
    basis.phi_with_phase(&m.phase(t), n, x)
}

/// Free flow of a Hermite function:
/// (1+2it)^{−1/2}e^{−inα}e^{ity²}φ_n(y) with y = x/√(1+4t²), α = arctan 2t.
pub fn hermite_free_psi(n: usize, x: f64, t: f64) -> Complex64 {
    let y = x / (1.0 + 4.0 * t * t).sqrt();
    let chirp = Complex64::from_polar(hermite_function(n, y), t * y * y - n as f64 * (2.0 * t).atan());
    chirp / Complex64::new(1.0, 2.0 * t).sqrt()
}

fn hermite_closed_form(basis: &TransformedBasis, m: Multiplier) -> bool {
    basis.family == Family::Hermite
        && m == Multiplier::Schrodinger
        && basis.phase == Phase::Canonical
        && basis.sigma.is_none()
        && basis.strategy == Strategy::Auto
}

/// Coefficients frozen at t = 0 together with the time they are read at.
#[derive(Debug, Clone)]
pub struct PropagatedState<'a> {
    pub coeffs: CoefficientVector,
    pub t: f64,
    pub basis: &'a TransformedBasis,
    pub multiplier: Multiplier,
}

impl<'a> PropagatedState<'a> {
    pub fn new(basis: &'a TransformedBasis, coeffs: CoefficientVector) -> Self {
        Self { coeffs, t: 0.0, basis, multiplier: Multiplier::Schrodinger }
    }

    /// u(x, t) = Σ û_n ψ_n(x, t) on `xs`.
    pub fn eval(&self, xs: &[f64]) -> Result<Vec<Complex64>> {
        let ns: Vec<i64> = self.coeffs.indices().collect();
        let table = if self.t == 0.0 {
            self.basis.phi_table(&ns, xs)?
        } else if hermite_closed_form(self.basis, self.multiplier) && ns.iter().all(|n| self.basis.index_range().contains(n)) {
            ns.iter().map(|&n| xs.iter().map(|&x| hermite_free_psi(n as usize, x, self.t)).collect()).collect()
        } else {
            self.basis.phi_table_with_phase(&self.multiplier.phase(self.t), &ns, xs)?
        };
        Ok((0..xs.len()).map(|i| table.iter().zip(&self.coeffs.values).map(|(row, c)| c * row[i]).sum()).collect())
    }
}

/// The state read at time `t`; the coefficients are unchanged.
pub fn free_propagate<'a>(state: &PropagatedState<'a>, t: f64) -> PropagatedState<'a> {
    PropagatedState { t, ..state.clone() }
}

/// Reference solution of u_t = i u_xx on a periodic grid of `m` points over
/// [−X, X), by one FFT pair. Returns the grid and u(·, t).
pub fn fft_reference(u0: impl Fn(f64) -> Complex64, t: f64, x_max: f64, m: usize) -> (Vec<f64>, Vec<Complex64>) {
    let h = 2.0 * x_max / m as f64;
    let xs: Vec<f64> = (0..m).map(|j| -x_max + j as f64 * h).collect();
    let mut u: Vec<Complex64> = xs.iter().map(|&x| u0(x)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut u);
    for (k, v) in u.iter_mut().enumerate() {
        let kk = if k <= m / 2 { k as f64 } else { k as f64 - m as f64 };
        let xi = PI * kk / x_max;
        *v *= Complex64::from_polar(1.0 / m as f64, -xi * xi * t);
    }
    planner.plan_fft_inverse(m).process(&mut u);
    (xs, u)
}

#[derive(Debug, Clone)]
enum Grid {
    /// Q_{jn} = (−1)ⁿ√λ_j p_n(x_j) at Gauss–Hermite nodes, an orthogonal matrix.
    Hermite { q: Vec<Vec<f64>> },
    /// Midpoints θ_j of (−π, π), x_j = ½tan(θ_j/2).
    Mt { offset: i64 },
}

/// One potential and one basis section, ready for repeated Strang steps.
pub struct StrangSplitting {
    d: DiffMatrix,
    grid: Grid,
    xs: Vec<f64>,
    potential: Vec<f64>,
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub coeffs: CoefficientVector,
    /// |‖a_out‖₂ − ‖a_in‖₂|.
    pub drift: f64,
    pub warning: Option<String>,
}

impl StrangSplitting {
    /// Hermite (Gauss–Hermite nodes) or MT (θ midpoints) section of size `n`.
    pub fn new(basis: &TransformedBasis, n: usize, v: impl Fn(f64) -> f64) -> Result<Self> {
        let (d, grid, xs) = match basis.family {
            Family::Hermite => {
                let j = JacobiMatrix::hermite(n);
                let rule = golub_welsch(&j, n)?;
                let mut q = vec![vec![0.0; n]; n];
                let mut p = vec![0.0; n];
                for (row, (&x, &w)) in q.iter_mut().zip(rule.nodes.iter().zip(&rule.weights)) {
                    j.eval_all_into(x, &mut p);
                    for (k, slot) in row.iter_mut().enumerate() {
                        *slot = if k % 2 == 0 { 1.0 } else { -1.0 } * w.sqrt() * p[k];
                    }
                }
                (DiffMatrix::build(&j, n)?, Grid::Hermite { q }, rule.nodes)
            }
            Family::MalmquistTakenaka => {
                if n < 2 || !n.is_power_of_two() {
                    return Err(Error::InvalidArgument(format!("MT section size {n} must be a power of two")));
                }
                let offset = -(n as i64) / 2 + 1;
                let xs = (0..n).map(|j| 0.5 * (0.5 * (-PI + (2 * j + 1) as f64 * PI / n as f64)).tan()).collect();
                (DiffMatrix::malmquist_takenaka(offset, n)?, Grid::Mt { offset }, xs)
            }
            ref f => return Err(Error::InvalidArgument(format!("no splitting grid for {f}"))),
        };
        let potential: Vec<f64> = xs.iter().map(|&x| v(x)).collect();
        if let Some(k) = potential.iter().position(|p| !p.is_finite()) {
            return Err(Error::Evaluation { node: xs[k], value: potential[k] });
        }
        Ok(Self { d, grid, xs, potential, tol: 1e-13 })
    }

    pub fn diff_matrix(&self) -> &DiffMatrix {
        &self.d
    }

    /// Physical nodes of the potential step.
    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    /// e^{i(τ/2)D²} · e^{−iτV} · e^{i(τ/2)D²}.
    pub fn step(&self, a: &CoefficientVector, tau: f64) -> Result<StepOutcome> {
        let half = self.d.expm_i_square_apply(0.5 * tau, a, self.tol)?;
        let mut g = self.synthesize_scaled(&half);
        for (gv, &v) in g.iter_mut().zip(&self.potential) {
            *gv *= Complex64::from_polar(1.0, -tau * v);
        }
        let mid = self.analyze_scaled(&g);
        let out = self.d.expm_i_square_apply(0.5 * tau, &mid, self.tol)?;
        let drift = (out.norm() - a.norm()).abs();
        let warning = (drift > 1e-6).then(|| format!("norm drift {drift:e} in one step (truncation loss)"));
        Ok(StepOutcome { coeffs: out, drift, warning })
    }

    /// `steps` steps of size τ.
    pub fn run(&self, a: &CoefficientVector, tau: f64, steps: usize) -> Result<StepOutcome> {
        let mut cur = StepOutcome { coeffs: a.clone(), drift: 0.0, warning: None };
        for _ in 0..steps {
            let next = self.step(&cur.coeffs, tau)?;
            cur = StepOutcome { drift: (next.coeffs.norm() - a.norm()).abs(), warning: next.warning.or(cur.warning), ..next };
        }
        Ok(cur)
    }

    /// u(x_j) at the splitting nodes.
    pub fn synthesize(&self, a: &CoefficientVector) -> Vec<Complex64> {
        let g = self.synthesize_scaled(a);
        match &self.grid {
            Grid::Hermite { .. } => {
                let j = JacobiMatrix::hermite(self.xs.len());
                let rule = golub_welsch(&j, self.xs.len()).expect("rule built in new");
                g.iter()
                    .zip(rule.weights.iter().zip(&self.xs))
                    .map(|(v, (&w, &x))| v / (PI.sqrt() * w * (x * x).exp()).sqrt())
                    .collect()
            }
            Grid::Mt { .. } => g.iter().zip(&self.xs).map(|(v, &x)| v / Complex64::new(1.0, -2.0 * x)).collect(),
        }
    }

    /// Grid values in the frame where the potential step is diagonal.
    fn synthesize_scaled(&self, a: &CoefficientVector) -> Vec<Complex64> {
        match &self.grid {
            Grid::Hermite { q } => q.iter().map(|row| row.iter().zip(&a.values).map(|(&qv, &c)| qv * c).sum()).collect(),
            Grid::Mt { offset } => {
                let n = self.xs.len();
                let mut c = vec![Complex64::new(0.0, 0.0); n];
                for (k, &v) in a.values.iter().enumerate() {
                    let idx = offset + k as i64;
                    let shift = Complex64::from_polar(1.0, idx as f64 * (-PI + PI / n as f64));
                    c[idx.rem_euclid(n as i64) as usize] = v * i_pow(idx) * shift;
                }
                FftPlanner::new().plan_fft_inverse(n).process(&mut c);
                c.iter().map(|v| v * (2.0 / PI).sqrt()).collect()
            }
        }
    }

    fn analyze_scaled(&self, g: &[Complex64]) -> CoefficientVector {
        match &self.grid {
            Grid::Hermite { q } => {
                let n = q.len();
                let values = (0..n).map(|k| q.iter().zip(g).map(|(row, &v)| row[k] * v).sum()).collect();
                CoefficientVector::new(0, values)
            }
            Grid::Mt { offset } => {
                let n = g.len();
                let mut h = g.to_vec();
                FftPlanner::new().plan_fft_forward(n).process(&mut h);
                let values = (0..n as i64)
                    .map(|k| {
                        let idx = offset + k;
                        let shift = Complex64::from_polar(1.0, -idx as f64 * (-PI + PI / n as f64));
                        h[idx.rem_euclid(n as i64) as usize] * shift * i_pow(-idx) * (PI / 2.0).sqrt() / n as f64
                    })
                    .collect();
                CoefficientVector::new(*offset, values)
            }
        }
    }
}

/// One Strang step; see [`StrangSplitting::step`].
pub fn strang_step(
    a: &CoefficientVector,
    tau: f64,
    v: impl Fn(f64) -> f64,
    basis: &TransformedBasis,
) -> Result<StepOutcome> {
    StrangSplitting::new(basis, a.len(), v)?.step(a, tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{coeffs_xspace, mt_coeffs_fft};

    fn gaussian(x: f64) -> Complex64 {
        Complex64::new((-(x - 0.5) * (x - 0.5)).exp(), 0.0)
    }

    /// e^{−(x−s)²} evolved by u_t = i u_xx.
    fn exact(x: f64, t: f64) -> Complex64 {
        let z = Complex64::new(1.0, 4.0 * t);
        (-(x - 0.5) * (x - 0.5) / z).exp() / z.sqrt()
    }

    #[test]
    fn reference_solver_matches_exact() {
        let (xs, u) = fft_reference(gaussian, 1.0, 64.0, 4096);
        let err = xs.iter().zip(&u).filter(|(x, _)| x.abs() <= 8.0).map(|(&x, v)| (v - exact(x, 1.0)).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn hermite_closed_form_matches_quadrature() {
        let b = TransformedBasis::new(Family::Hermite, 8).unwrap();
        let q = b.clone().with_strategy(Strategy::Quadrature);
        for n in [0usize, 1, 4, 7] {
            for &(x, t) in &[(0.0, 0.3), (1.3, 0.3), (-2.2, 1.5), (4.0, -0.7), (0.5, 6.0)] {
                let closed = hermite_free_psi(n, x, t);
                let quad = free_psi(&q, n as i64, x, t).unwrap();
                assert!((closed - quad).norm() < 1e-10, "{n} {x} {t}: {closed} vs {quad}");
            }
        }
        // u0 = e^{−x²/2} = π^{1/4}φ_0 spreads as e^{−x²/(2(1+2it))}/√(1+2it)
        let z = Complex64::new(1.0, 2.0);
        let want = (-Complex64::new(0.49, 0.0) / (2.0 * z)).exp() / z.sqrt();
        assert!((PI.powf(0.25) * hermite_free_psi(0, 0.7, 1.0) - want).norm() < 1e-15);
    }

    #[test]
    fn psi_at_zero_is_phi() {
        let b = TransformedBasis::new(Family::Hermite, 6).unwrap();
        for n in 0..6 {
            let d = free_psi(&b, n, 0.7, 0.0).unwrap() - b.phi(n, 0.7).unwrap();
            assert!(d.norm() < 1e-10);
        }
        // quadrature path with a vanishing phase
        let z: PhaseFn = Arc::new(|_| 0.0);
        assert!((b.phi_with_phase(&z, 3, 0.7).unwrap() - b.phi(3, 0.7).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn legendre_psi0_fresnel() {
        // ψ_0(0, 1) = (2π)^{−1/2}∫_{−1}^{1} e^{−iξ²}/√2 dξ, by plain Gauss–Legendre
        let b = TransformedBasis::new(Family::Legendre, 2).unwrap();
        let j = JacobiMatrix::legendre(200);
        let rule = golub_welsch(&j, 200).unwrap();
        let direct: Complex64 = rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| 2.0 * w * Complex64::from_polar(1.0, -x * x)).sum::<Complex64>() / (2.0 * PI).sqrt() / 2f64.sqrt();
        let v = free_psi(&b, 0, 0.0, 1.0).unwrap();
        assert!((v - direct).norm() < 1e-10, "{v} {direct}");
        let p = free_psi_with(&b, Multiplier::Printed, 0, 0.0, 1.0).unwrap();
        assert!((p - direct).norm() > 1e-2);
    }

    #[test]
    fn psi_norms() {
        let b = TransformedBasis::new(Family::Hermite, 4).unwrap();
        let h = 0.05;
        let xs: Vec<f64> = (0..801).map(|k| -20.0 + k as f64 * h).collect();
        for t in [0.5, 1.0, 2.0] {
            let s = PropagatedState { t, ..PropagatedState::new(&b, CoefficientVector::unit(0, 4, 2).unwrap()) };
            let u = s.eval(&xs).unwrap();
            let norm: f64 = u.iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
            assert!((norm - 1.0).abs() < 1e-6, "{t} {norm}");
        }
    }

    #[test]
    fn gaussian_matches_reference() {
        let b = TransformedBasis::new(Family::Hermite, 48).unwrap();
        let a = coeffs_xspace(gaussian, &b, 48, 12.0, 2401).unwrap().coeffs;
        let s = free_propagate(&PropagatedState::new(&b, a.clone()), 1.0);
        let xs: Vec<f64> = (0..33).map(|k| -8.0 + 0.5 * k as f64).collect();
        let u = s.eval(&xs).unwrap();
        let err = xs.iter().zip(&u).map(|(&x, v)| (v - exact(x, 1.0)).norm()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
        assert_eq!(s.coeffs, a);
    }

    #[test]
    fn free_step_is_pure_exponential() {
        let b = TransformedBasis::new(Family::Hermite, 32).unwrap();
        let a = coeffs_xspace(gaussian, &b, 32, 12.0, 2401).unwrap().coeffs;
        let sp = StrangSplitting::new(&b, 32, |_| 0.0).unwrap();
        let one = sp.step(&a, 0.1).unwrap();
        let want = sp.diff_matrix().expm_i_square_apply(0.1, &a, 1e-14).unwrap();
        assert!(one.coeffs.max_abs_diff(&want) < 1e-10);
    }

    #[test]
    fn grids_round_trip() {
        let b = TransformedBasis::new(Family::Hermite, 16).unwrap();
        let sp = StrangSplitting::new(&b, 16, |x| x * x).unwrap();
        let a = CoefficientVector::from_real(0, &(0..16).map(|k| 1.0 / (1.0 + k as f64)).collect::<Vec<_>>());
        assert!(sp.analyze_scaled(&sp.synthesize_scaled(&a)).max_abs_diff(&a) < 1e-13);
        let u = sp.synthesize(&a);
        for (x, v) in sp.nodes().iter().zip(&u).step_by(5) {
            let direct: f64 = (0..16).map(|k| a.values[k].re * b.phi(k as i64, *x).unwrap().re).sum();
            assert!((v.re - direct).abs() < 1e-12);
        }

        let m = TransformedBasis::new(Family::MalmquistTakenaka, 32).unwrap();
        let sp = StrangSplitting::new(&m, 32, |x| x * x).unwrap();
        let a = mt_coeffs_fft(|x: f64| (-x * x).exp(), 32).unwrap();
        assert!(sp.analyze_scaled(&sp.synthesize_scaled(&a)).max_abs_diff(&a) < 1e-13);
        let u = sp.synthesize(&a);
        for (x, v) in sp.nodes().iter().zip(&u).step_by(7) {
            let direct: Complex64 = a.indices().map(|k| a.get(k) * m.phi(k, *x).unwrap()).sum();
            assert!((v - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn harmonic_norm_and_order() {
        let b = TransformedBasis::new(Family::Hermite, 40).unwrap();
        let a = coeffs_xspace(gaussian, &b, 40, 12.0, 2401).unwrap().coeffs;
        let sp = StrangSplitting::new(&b, 40, |x| x * x).unwrap();
        let one = sp.step(&a, 0.05).unwrap();
        assert!(one.drift < 1e-8 && one.warning.is_none());
        let big = sp.run(&a, 1.0 / 8.0, 8).unwrap();
        let mid = sp.run(&a, 1.0 / 16.0, 16).unwrap();
        let small = sp.run(&a, 1.0 / 32.0, 32).unwrap();
        let ratio = big.coeffs.max_abs_diff(&mid.coeffs) / mid.coeffs.max_abs_diff(&small.coeffs);
        assert!((ratio - 4.0).abs() < 0.5, "{ratio}");
        assert!(small.drift < 1e-8);
    }

    #[test]
    fn truncated_flow_consistency() {
        // ψ-synthesis at small t against e^{itD_N²} on the coefficients
        let t = 0.05;
        let xs: Vec<f64> = (0..21).map(|k| -5.0 + 0.5 * k as f64).collect();
        let mut last = f64::INFINITY;
        for n in [16usize, 32, 64] {
            let b = TransformedBasis::new(Family::Hermite, n).unwrap();
            let a = coeffs_xspace(|x: f64| 1.0 / x.cosh(), &b, n, 40.0, 8001).unwrap().coeffs;
            let u = free_propagate(&PropagatedState::new(&b, a.clone()), t).eval(&xs).unwrap();
            let d = DiffMatrix::build(&b.jacobi, n).unwrap();
            let at = d.expm_i_square_apply(t, &a, 1e-14).unwrap();
            let v = PropagatedState::new(&b, at).eval(&xs).unwrap();
            let gap = u.iter().zip(&v).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            assert!(gap < last, "{n} {gap} {last}");
            last = gap;
        }
    }
}
