//! Family specifications as strings, e.g. `jacobi:0.5,-0.5` or
//! `custom-weight:exp(-x^4)@-inf,inf`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::basis::{Family, TransformedBasis};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::periodic::PeriodicBasis;
use crate::recurrence::{self, JacobiMatrix, MeasureSpec, Support};

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Transformed(Family),
    /// An expression weight on a support, built by Stieltjes.
    CustomWeight { weight: Expr, support: Support },
    /// Bilateral Charlier masses on ℤ, for the periodic systems.
    Charlier { a: f64 },
}

impl FamilySpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (head, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = |k: usize| -> Result<Vec<f64>> {
            let v: Vec<f64> = args
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad(s)))
                .collect::<Result<_>>()?;
            if v.len() != k || v.iter().any(|x| !x.is_finite()) {
                return Err(bad(s));
            }
            Ok(v)
        };
        Ok(match head.trim() {
            "hermite" => Self::Transformed(Family::Hermite),
            "legendre" => Self::Transformed(Family::Legendre),
            "mt" => Self::Transformed(Family::MalmquistTakenaka),
            "genhermite" => Self::Transformed(Family::GeneralizedHermite { eta: nums(1)?[0] }),
            "ultraspherical" => Self::Transformed(Family::Ultraspherical { alpha: nums(1)?[0] }),
            "laguerre" => Self::Transformed(Family::Laguerre { alpha: nums(1)?[0] }),
            "jacobi" => {
                let v = nums(2)?;
                Self::Transformed(Family::Jacobi { alpha: v[0], beta: v[1] })
            }
            "conthahn" => {
                let v = nums(2)?;
                Self::Transformed(Family::ContinuousHahn { a: v[0], b: v[1] })
            }
            "tanhjacobi" => {
                let v = nums(2)?;
                Self::Transformed(Family::TanhJacobi { a: v[0], b: v[1] })
            }
            "charlier" => Self::Charlier { a: nums(1)?[0] },
            "custom-weight" => {
                let (body, sup) = match args.rsplit_once('@') {
                    Some((b, r)) => (b, Some(r)),
                    None => (args, None),
                };
                let support = match sup {
                    None => Support::real_line(),
                    Some(r) => {
                        let (lo, hi) = r.split_once(',').ok_or_else(|| bad(s))?;
                        Support::new(bound(lo).ok_or_else(|| bad(s))?, bound(hi).ok_or_else(|| bad(s))?)?
                    }
                };
                Self::CustomWeight { weight: Expr::parse(body)?, support }
            }
            _ => return Err(bad(s)),
        })
    }

    /// Transformed system with `len` recurrence pairs.
    pub fn basis(&self, len: usize) -> Result<TransformedBasis> {
        match self {
            Self::Transformed(f) => TransformedBasis::new(f.clone(), len),
            Self::CustomWeight { .. } => TransformedBasis::from_measure(self.measure()?, len),
            Self::Charlier { .. } => {
                Err(Error::InvalidArgument("charlier is a discrete measure; use the periodic system".into()))
            }
        }
    }

    pub fn periodic(&self, len: usize) -> Result<PeriodicBasis> {
        match self {
            Self::Charlier { a } => PeriodicBasis::charlier(*a, len),
            _ => Err(Error::InvalidArgument(format!("{self} has no periodic system"))),
        }
    }

    pub fn measure(&self) -> Result<MeasureSpec> {
        match self {
            Self::Transformed(f) => Ok(TransformedBasis::new(f.clone(), 1)?.measure),
            Self::CustomWeight { weight, support } => {
                let w = weight.clone();
                MeasureSpec::continuous(self.to_string(), *support, Arc::new(move |x: f64| w.eval_or_nan(x)), vec![])
            }
            Self::Charlier { a } => Ok(PeriodicBasis::charlier(*a, 1)?.measure),
        }
    }

    /// Recurrence coefficients, closed form where the family has one.
    pub fn jacobi(&self, len: usize) -> Result<JacobiMatrix> {
        match self {
            Self::Charlier { .. } => Ok(self.periodic(len)?.jacobi),
            _ => Ok(self.basis(len)?.jacobi),
        }
    }

    /// Coefficients from the Stieltjes procedure regardless of family.
    pub fn jacobi_stieltjes(&self, len: usize) -> Result<JacobiMatrix> {
        recurrence::stieltjes(&self.measure()?, len, (40 * len).max(400))
    }
}

fn bad(s: &str) -> Error {
    Error::InvalidArgument(format!("unknown family '{s}'"))
}

fn bound(t: &str) -> Option<f64> {
    match t.trim() {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        v => v.parse().ok(),
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Transformed(fam) => write!(f, "{fam}"),
            Self::Charlier { a } => write!(f, "charlier:{a}"),
            Self::CustomWeight { weight, support } => {
                let b = |v: f64| if v.is_infinite() { if v > 0.0 { "inf".into() } else { "-inf".into() } } else { v.to_string() };
                write!(f, "custom-weight:{weight}@{},{}", b(support.lo), b(support.hi))
            }
        }
    }
}
