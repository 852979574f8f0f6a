use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::panels::{self, Node};
use crate::specfun;

/// A non-negative weight function.
pub trait Weight: Send + Sync {
    fn eval(&self, x: f64) -> f64;

    /// Evaluate given the exact distances from the ends of a finite
    /// support. Weights with endpoint singularities override this.
    fn eval_near(&self, x: f64, _from_lo: f64, _from_hi: f64) -> f64 {
        self.eval(x)
    }
}

impl<F> Weight for F
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// (1-ξ)^α (1+ξ)^β on (-1, 1).
#[derive(Debug, Clone, Copy)]
pub struct JacobiWeight {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiWeight {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(Error::domain("jacobi", format!("(alpha, beta) = ({alpha}, {beta}) must exceed -1")));
        }
        Ok(Self { alpha, beta })
    }

    /// ∫(1-ξ)^α(1+ξ)^β dξ = 2^{α+β+1} B(α+1, β+1).
    pub fn mass(&self) -> Result<f64> {
        Ok(2f64.powf(self.alpha + self.beta + 1.0) * specfun::beta(self.alpha + 1.0, self.beta + 1.0)?)
    }
}

impl Weight for JacobiWeight {
    fn eval(&self, x: f64) -> f64 {
        self.eval_near(x, x + 1.0, 1.0 - x)
    }

    fn eval_near(&self, _x: f64, from_lo: f64, from_hi: f64) -> f64 {
        if from_lo <= 0.0 || from_hi <= 0.0 {
            return 0.0;
        }
        from_hi.powf(self.alpha) * from_lo.powf(self.beta)
    }
}

/// Closed interval hull of a support; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidArgument(format!("empty support [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn is_compact(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// An absolutely continuous measure w(ξ)dξ normalized to unit mass.
#[derive(Clone)]
pub struct ContinuousMeasure {
    pub name: String,
    pub support: Support,
    weight: Arc<dyn Weight>,
    inv_mass: f64,
    /// Interior points where the weight may be non-smooth.
    pub breakpoints: Vec<f64>,
}

impl ContinuousMeasure {
    /// Normalized density at `x`.
    pub fn density(&self, x: f64) -> f64 {
        if !self.support.contains(x) {
            return 0.0;
        }
        self.weight.eval(x) * self.inv_mass
    }

    pub fn density_at(&self, node: &Node) -> f64 {
        self.weight.eval_near(node.x, node.from_lo, node.from_hi) * self.inv_mass
    }

    /// Composite nodes over the support, truncated to [lo, hi] where the
    /// support is unbounded.
    pub fn nodes(&self, lo: f64, hi: f64, max_width: f64) -> Vec<Node> {
        panels::support_nodes(self.support, lo, hi, &self.breakpoints, max_width)
    }

    /// Smallest symmetric truncation (about the support) such that
    /// w(ξ)(1+|ξ|)^{2·degree} falls below `rel` times its peak beyond it.
    pub fn truncation(&self, degree: usize, rel: f64) -> Result<(f64, f64)> {
        let score = |x: f64| {
            let w = self.density(x);
            if w <= 0.0 {
                return f64::NEG_INFINITY;
            }
            w.ln() + 2.0 * degree as f64 * (1.0 + x.abs()).ln()
        };
        let scan = |dir: f64, start: f64| -> Result<f64> {
            let mut x = start;
            let mut peak = f64::NEG_INFINITY;
            let mut last_bad = start;
            let mut quiet = 0;
            while x.abs() < 1e5 {
                let s = score(x);
                if s.is_finite() {
                    peak = peak.max(s);
                }
                if s.is_finite() && s > peak + rel.ln() {
                    last_bad = x;
                    quiet = 0;
                } else {
                    quiet += 1;
                    if quiet > 40 && (x - last_bad).abs() > 2.0 {
                        return Ok(last_bad + dir * 0.5);
                    }
                }
                x += dir * (0.25 + 0.02 * x.abs());
            }
            Err(Error::Contract(format!("weight of '{}' does not decay fast enough to truncate", self.name)))
        };
        let centre = if self.support.contains(0.0) {
            0.0
        } else if self.support.lo.is_finite() {
            self.support.lo
        } else {
            self.support.hi
        };
        let lo = if self.support.lo.is_finite() { self.support.lo } else { scan(-1.0, centre)?.min(centre) };
        let hi = if self.support.hi.is_finite() { self.support.hi } else { scan(1.0, centre)?.max(centre) };
        Ok((lo, hi))
    }
}

impl fmt::Debug for ContinuousMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuousMeasure")
            .field("name", &self.name)
            .field("support", &self.support)
            .field("mass", &(1.0 / self.inv_mass))
            .finish()
    }
}

/// Point masses σ_k at points ξ_k, summing to one.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    pub name: String,
    pub points: Vec<f64>,
    pub masses: Vec<f64>,
}

impl DiscreteMeasure {
    /// Normalizes `masses` to unit total.
    pub fn new_normalized(name: impl Into<String>, points: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if points.len() != masses.len() {
            return Err(Error::LengthMismatch { expected: points.len(), got: masses.len() });
        }
        if masses.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidArgument("point masses must be positive".into()));
        }
        let total: f64 = masses.iter().sum();
        let masses = masses.into_iter().map(|m| m / total).collect();
        Ok(Self { name: name.into(), points, masses })
    }
}

#[derive(Debug, Clone)]
pub enum MeasureSpec {
    Continuous(ContinuousMeasure),
    Discrete(DiscreteMeasure),
}

impl MeasureSpec {
    /// A continuous measure whose raw total mass is known in closed form.
    pub fn continuous_with_mass(
        name: impl Into<String>,
        support: Support,
        weight: Arc<dyn Weight>,
        mass: f64,
        breakpoints: Vec<f64>,
    ) -> Self {
        MeasureSpec::Continuous(ContinuousMeasure {
            name: name.into(),
            support,
            weight,
            inv_mass: 1.0 / mass,
            breakpoints,
        })
    }

    /// A continuous measure normalized by numerical quadrature.
    pub fn continuous(
        name: impl Into<String>,
        support: Support,
        weight: Arc<dyn Weight>,
        breakpoints: Vec<f64>,
    ) -> Result<Self> {
        let mut m = ContinuousMeasure { name: name.into(), support, weight, inv_mass: 1.0, breakpoints };
        let (lo, hi) = m.truncation(0, 1e-20)?;
        let mut mass = 0.0;
        for node in m.nodes(lo, hi, 0.5) {
            let w = m.density_at(&node);
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Evaluation { node: node.x, value: w });
            }
            mass += node.w * w;
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidArgument(format!("weight of '{}' has mass {mass}", m.name)));
        }
        m.inv_mass = 1.0 / mass;
        Ok(MeasureSpec::Continuous(m))
    }

    pub fn name(&self) -> &str {
        match self {
            MeasureSpec::Continuous(m) => &m.name,
            MeasureSpec::Discrete(m) => &m.name,
        }
    }

    pub fn support(&self) -> Support {
        match self {
            MeasureSpec::Continuous(m) => m.support,
            MeasureSpec::Discrete(m) => {
                let lo = m.points.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = m.points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Support { lo, hi }
            }
        }
    }

    pub fn as_continuous(&self) -> Option<&ContinuousMeasure> {
        match self {
            MeasureSpec::Continuous(m) => Some(m),
            MeasureSpec::Discrete(_) => None,
        }
    }
}
