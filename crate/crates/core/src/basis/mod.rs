//! Transformed function systems
//!
//! φ_n(x) = e^{iθ_n}/√(2π) ∫ e^{ixξ} p_n(ξ) √w(ξ) dξ,
//!
//! with the canonical phase θ_n = nπ/2. Any such system satisfies
//! φ_n' = −b_{n−1}φ_{n−1} + i c_n φ_n + b_n φ_{n+1} and is orthonormal in
//! L₂(ℝ). Named families carry closed-form fast paths; everything else goes
//! through the oscillatory quadrature.

mod closed;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{self, panels, Node};
use crate::recurrence::{ContinuousMeasure, JacobiMatrix, MeasureSpec, Support};
use crate::{par, recurrence};

pub use closed::{hermite_function, i_pow, malmquist_takenaka, tanh_jacobi, transformed_legendre, TanhJacobi};

/// Named families. `Laguerre { alpha: 0 }` and `MalmquistTakenaka` share a
/// measure; the latter is indexed by all of ℤ.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Hermite,
    GeneralizedHermite { eta: f64 },
    Legendre,
    Ultraspherical { alpha: f64 },
    Jacobi { alpha: f64, beta: f64 },
    Laguerre { alpha: f64 },
    MalmquistTakenaka,
    ContinuousHahn { a: f64, b: f64 },
    /// Transforms of the dilated continuous Hahn weight |Γ(a+iξ/2)Γ(b−iξ/2)|²,
    /// i.e. the tanh–Jacobi functions in the variable x.
    TanhJacobi { a: f64, b: f64 },
    Custom { name: String },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Hermite => write!(f, "hermite"),
            Family::GeneralizedHermite { eta } => write!(f, "genhermite:{eta}"),
            Family::Legendre => write!(f, "legendre"),
            Family::Ultraspherical { alpha } => write!(f, "ultraspherical:{alpha}"),
            Family::Jacobi { alpha, beta } => write!(f, "jacobi:{alpha},{beta}"),
            Family::Laguerre { alpha } => write!(f, "laguerre:{alpha}"),
            Family::MalmquistTakenaka => write!(f, "mt"),
            Family::ContinuousHahn { a, b } => write!(f, "conthahn:{a},{b}"),
            Family::TanhJacobi { a, b } => write!(f, "tanhjacobi:{a},{b}"),
            Family::Custom { name } => write!(f, "{name}"),
        }
    }
}

/// θ_n rule.
#[derive(Debug, Clone, PartialEq)]
pub enum Phase {
    /// e^{iθ_n} = iⁿ.
    Canonical,
    /// θ_0, θ_1, … in radians.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Closed form when the family has one, else quadrature.
    Auto,
    Quadrature,
}

/// A real phase function σ(ξ).
pub type PhaseFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Fast {
    None,
    Hermite,
    Legendre,
    Mt,
    TanhJacobi(Arc<TanhJacobi>),
}

#[derive(Clone)]
pub struct TransformedBasis {
    pub family: Family,
    pub measure: MeasureSpec,
    pub jacobi: JacobiMatrix,
    pub phase: Phase,
    pub sigma: Option<PhaseFn>,
    pub strategy: Strategy,
    pub tol: f64,
    fast: Fast,
    range: Arc<OnceLock<(f64, f64)>>,
}

impl fmt::Debug for TransformedBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformedBasis")
            .field("family", &self.family)
            .field("len", &self.len())
            .field("phase", &self.phase)
            .field("sigma", &self.sigma.is_some())
            .field("strategy", &self.strategy)
            .finish()
    }
}

impl TransformedBasis {
    /// A named family with recurrence coefficients b_0..b_{len−1}, so
    /// φ_0..φ_{len−1} are available (and, for MT, φ_{−len}..φ_{−1}).
    pub fn new(family: Family, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidArgument("basis needs at least one function".into()));
        }
        let (measure, jacobi, fast) = match &family {
            Family::Hermite => (MeasureSpec::hermite(), JacobiMatrix::hermite(len), Fast::Hermite),
            Family::GeneralizedHermite { eta } => {
                (MeasureSpec::generalized_hermite(*eta)?, JacobiMatrix::generalized_hermite(*eta, len)?, Fast::None)
            }
            Family::Legendre => (MeasureSpec::legendre(), JacobiMatrix::legendre(len), Fast::Legendre),
            Family::Ultraspherical { alpha } => {
                (MeasureSpec::jacobi(*alpha, *alpha)?, JacobiMatrix::ultraspherical(*alpha, len)?, Fast::None)
            }
            Family::Jacobi { alpha, beta } => (
                MeasureSpec::jacobi(*alpha, *beta)?,
                recurrence::jacobi_poly_coeffs(*alpha, *beta, len)?,
                Fast::None,
            ),
            Family::Laguerre { alpha } => {
                (MeasureSpec::laguerre(*alpha)?, JacobiMatrix::laguerre(*alpha, len)?, Fast::None)
            }
            Family::MalmquistTakenaka => (MeasureSpec::laguerre(0.0)?, JacobiMatrix::laguerre(0.0, len)?, Fast::Mt),
            Family::ContinuousHahn { a, b } => {
                let m = MeasureSpec::continuous_hahn(*a, *b)?;
                let j = recurrence::stieltjes(&m, len, (40 * len).max(400))?;
                (m, j, Fast::None)
            }
            Family::TanhJacobi { a, b } => {
                let m = MeasureSpec::continuous_hahn_scaled(*a, *b, 2.0)?;
                let j = recurrence::stieltjes(&m, len, (40 * len).max(400))?;
                (m, j, Fast::TanhJacobi(Arc::new(TanhJacobi::new(*a, *b, len)?)))
            }
            Family::Custom { name } => {
                return Err(Error::InvalidArgument(format!("custom family '{name}' needs a measure; use from_measure")))
            }
        };
        Ok(Self::assemble(family, measure, jacobi, fast))
    }

    /// The canonical system of an arbitrary continuous measure, with
    /// coefficients from the Stieltjes procedure.
    pub fn from_measure(measure: MeasureSpec, len: usize) -> Result<Self> {
        if measure.as_continuous().is_none() {
            return Err(Error::InvalidArgument("transformed bases need a continuous measure".into()));
        }
        let jacobi = recurrence::stieltjes(&measure, len, (40 * len).max(400))?;
        let family = Family::Custom { name: measure.name().to_string() };
        Ok(Self::assemble(family, measure, jacobi, Fast::None))
    }

    fn assemble(family: Family, measure: MeasureSpec, jacobi: JacobiMatrix, fast: Fast) -> Self {
        Self {
            family,
            measure,
            jacobi,
            phase: Phase::Canonical,
            sigma: None,
            strategy: Strategy::Auto,
            tol: 1e-12,
            fast,
            range: Arc::new(OnceLock::new()),
        }
    }

    /// Recurrence coefficients for the same measure, `len` of them.
    pub fn extended_jacobi(&self, len: usize) -> Result<JacobiMatrix> {
        if len <= self.len() {
            return self.jacobi.truncate(len);
        }
        match self.family {
            Family::Custom { .. } => recurrence::stieltjes(&self.measure, len, (40 * len).max(400)),
            _ => Ok(Self::new(self.family.clone(), len)?.jacobi),
        }
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Multiplies the Fourier-side integrand by e^{iσ(ξ)}.
    pub fn with_sigma(mut self, sigma: PhaseFn) -> Self {
        self.sigma = Some(sigma);
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn len(&self) -> usize {
        self.jacobi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jacobi.is_empty()
    }

    pub fn is_bilateral(&self) -> bool {
        self.family == Family::MalmquistTakenaka
    }

    /// Valid indices: 0..len, or −len..len for MT.
    pub fn index_range(&self) -> std::ops::Range<i64> {
        let n = self.len() as i64;
        if self.is_bilateral() {
            -n..n
        } else {
            0..n
        }
    }

    fn check_index(&self, n: i64) -> Result<()> {
        if self.index_range().contains(&n) {
            Ok(())
        } else {
            Err(Error::Index { index: n, len: self.len() })
        }
    }

    /// Ω, the closed hull of the Fourier support.
    pub fn pw_support(&self) -> Support {
        self.measure.support()
    }

    pub fn has_closed_form(&self) -> bool {
        !matches!(self.fast, Fast::None)
    }

    /// Symmetric measure, canonical phase and no σ: φ_n is real.
    pub fn is_real(&self) -> bool {
        self.sigma.is_none() && self.phase == Phase::Canonical && self.jacobi.is_symmetric(1e-10) && !self.is_bilateral()
    }

    /// θ_n.
    pub fn theta(&self, n: i64) -> Result<f64> {
        match &self.phase {
            Phase::Canonical => Ok(n as f64 * std::f64::consts::FRAC_PI_2),
            Phase::Explicit(t) => usize::try_from(n)
                .ok()
                .and_then(|k| t.get(k).copied())
                .ok_or(Error::Index { index: n, len: t.len() }),
        }
    }

    /// e^{iθ_n} / iⁿ, the factor relating this basis to the canonical one.
    fn phase_ratio(&self, n: i64) -> Result<Complex64> {
        match self.phase {
            Phase::Canonical => Ok(Complex64::new(1.0, 0.0)),
            Phase::Explicit(_) => Ok(Complex64::from_polar(1.0, self.theta(n)?) / i_pow(n)),
        }
    }

    fn continuous(&self) -> &ContinuousMeasure {
        self.measure.as_continuous().expect("transformed bases are built from continuous measures")
    }

    /// Window outside which every p_n√w (n < len) is negligible.
    fn range(&self) -> Result<(f64, f64)> {
        if let Some(r) = self.range.get() {
            return Ok(*r);
        }
        let r = self.continuous().truncation(self.len(), 1e-36)?;
        Ok(*self.range.get_or_init(|| r))
    }

    fn sigma_freq(&self, sigma: Option<&PhaseFn>) -> Result<f64> {
        let Some(s) = sigma else { return Ok(0.0) };
        let (lo, hi) = self.range()?;
        let h = (hi - lo) / 4000.0;
        let mut f = 0.0f64;
        for k in 0..4000 {
            let a = lo + k as f64 * h;
            f = f.max(((s(a + h) - s(a)) / h).abs());
        }
        Ok(f)
    }

    /// φ_n(x).
    pub fn phi(&self, n: i64, x: f64) -> Result<Complex64> {
        self.check_index(n)?;
        if self.sigma.is_none() && self.strategy == Strategy::Auto {
            if let Some(v) = self.closed_canonical(n, x)? {
                return Ok(self.phase_ratio(n)? * v);
            }
        }
        self.phi_quadrature_with(self.sigma.as_ref(), n, x)
    }

    /// φ_n(x) through the oscillatory quadrature regardless of strategy.
    pub fn phi_quadrature(&self, n: i64, x: f64) -> Result<Complex64> {
        self.check_index(n)?;
        self.phi_quadrature_with(self.sigma.as_ref(), n, x)
    }

    /// φ_n(x) with an extra phase e^{iσ(ξ)} inside the transform.
    pub fn phi_with_phase(&self, sigma: &PhaseFn, n: i64, x: f64) -> Result<Complex64> {
        self.check_index(n)?;
        self.phi_quadrature_with(Some(sigma), n, x)
    }

    fn closed_canonical(&self, n: i64, x: f64) -> Result<Option<Complex64>> {
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        Ok(match &self.fast {
            Fast::None => None,
            Fast::Hermite => Some(hermite_function(n as usize, x).into()),
            Fast::Legendre => Some((sign * transformed_legendre(n as usize, x)).into()),
            Fast::Mt => Some(malmquist_takenaka(n, x)),
            Fast::TanhJacobi(t) => Some((sign * t.eval(n as usize, x)?).into()),
        })
    }

    fn phi_quadrature_with(&self, sigma: Option<&PhaseFn>, n: i64, x: f64) -> Result<Complex64> {
        if n < 0 {
            // φ_{−m−1} = −i·conj(φ_m), with σ reflected to σ̃(ξ) = −σ(−ξ)
            let m = (-n - 1) as usize;
            let v = match sigma {
                None => self.canonical_quadrature(None, m, x)?,
                Some(s) => self.canonical_quadrature(Some(&reflect(s)), m, x)?,
            };
            return Ok(self.phase_ratio(n)? * Complex64::new(0.0, -1.0) * v.conj());
        }
        Ok(self.phase_ratio(n)? * self.canonical_quadrature(sigma, n as usize, x)?)
    }

    fn canonical_quadrature(&self, sigma: Option<&PhaseFn>, n: usize, x: f64) -> Result<Complex64> {
        let m = self.continuous();
        let j = &self.jacobi;
        let g = |node: &Node| -> Complex64 {
            let w = m.density_at(node);
            if w <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let p = j.eval_poly(n, node.x).unwrap_or(f64::NAN);
            let amp = p * w.sqrt();
            match sigma {
                None => amp.into(),
                Some(s) => Complex64::from_polar(amp, s(node.x)),
            }
        };
        let freq = self.sigma_freq(sigma)?;
        let (v, _) =
            quadrature::oscillatory_on(&g, m.support, &m.breakpoints, self.range()?, x, freq, self.tol)?;
        Ok(i_pow(n as i64) * v)
    }

    /// `table[k][i] = φ_{ns[k]}(xs[i])`.
    pub fn phi_table(&self, ns: &[i64], xs: &[f64]) -> Result<Vec<Vec<Complex64>>> {
        for &n in ns {
            self.check_index(n)?;
        }
        if self.sigma.is_none() && self.strategy == Strategy::Auto && self.has_closed_form() {
            return ns.iter().map(|&n| xs.iter().map(|&x| self.phi(n, x)).collect()).collect();
        }
        self.quadrature_table(self.sigma.as_ref(), ns, xs)
    }

    /// Batch quadrature path with e^{iσ} inside the transform.
    pub fn phi_table_with_phase(&self, sigma: &PhaseFn, ns: &[i64], xs: &[f64]) -> Result<Vec<Vec<Complex64>>> {
        for &n in ns {
            self.check_index(n)?;
        }
        self.quadrature_table(Some(sigma), ns, xs)
    }

    fn quadrature_table(&self, sigma: Option<&PhaseFn>, ns: &[i64], xs: &[f64]) -> Result<Vec<Vec<Complex64>>> {
        let pos: Vec<usize> = ns.iter().filter(|&&n| n >= 0).map(|&n| n as usize).collect();
        let neg: Vec<usize> = ns.iter().filter(|&&n| n < 0).map(|&n| (-n - 1) as usize).collect();
        let tp = if pos.is_empty() { vec![] } else { self.canonical_table(sigma, &pos, xs)? };
        let tn = if neg.is_empty() {
            vec![]
        } else {
            let r = sigma.map(reflect);
            self.canonical_table(r.as_ref(), &neg, xs)?
        };
        let (mut ip, mut ineg) = (0, 0);
        let mut out = Vec::with_capacity(ns.len());
        for &n in ns {
            let ratio = self.phase_ratio(n)?;
            if n >= 0 {
                out.push(tp[ip].iter().map(|v| ratio * v).collect());
                ip += 1;
            } else {
                out.push(tn[ineg].iter().map(|v| ratio * Complex64::new(0.0, -1.0) * v.conj()).collect());
                ineg += 1;
            }
        }
        Ok(out)
    }

    /// Canonical φ_d on `xs` for each degree in `degrees`, from one shared
    /// node set resolving the largest |x| at half the pointwise panel width.
    fn canonical_table(&self, sigma: Option<&PhaseFn>, degrees: &[usize], xs: &[f64]) -> Result<Vec<Vec<Complex64>>> {
        let m = self.continuous();
        let xmax = xs.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let freq = self.sigma_freq(sigma)?;
        let (lo, hi) = self.range()?;
        let width = (std::f64::consts::PI / (1.0 + xmax + freq)).min(1.0) * 0.5;
        let nodes = panels::support_nodes(m.support, lo, hi, &m.breakpoints, width);
        let top = degrees.iter().copied().max().unwrap_or(0) + 1;
        // a[k][j] = ω_j √w(ξ_j) p_k(ξ_j) e^{iσ(ξ_j)}
        let mut a = vec![Vec::with_capacity(nodes.len()); top];
        let mut p = vec![0.0; top];
        for node in &nodes {
            let w = m.density_at(node);
            let s = w.max(0.0).sqrt() * node.w;
            self.jacobi.eval_all_into(node.x, &mut p);
            let ph = sigma.map_or(Complex64::new(1.0, 0.0), |f| Complex64::from_polar(1.0, f(node.x)));
            for k in 0..top {
                let v = if s == 0.0 { Complex64::new(0.0, 0.0) } else { ph * (s * p[k]) };
                if !v.is_finite() {
                    return Err(Error::Evaluation { node: node.x, value: v.norm() });
                }
                a[k].push(v);
            }
        }
        let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let columns: Vec<Vec<Complex64>> = par::map(xs, |&x| {
            let e: Vec<Complex64> = nodes.iter().map(|nd| Complex64::from_polar(norm, x * nd.x)).collect();
            degrees.iter().map(|&d| i_pow(d as i64) * a[d].iter().zip(&e).map(|(a, e)| a * e).sum::<Complex64>()).collect()
        });
        Ok((0..degrees.len()).map(|k| columns.iter().map(|c| c[k]).collect()).collect())
    }
}

fn reflect(s: &PhaseFn) -> PhaseFn {
    let s = s.clone();
    Arc::new(move |xi| -s(-xi))
}
