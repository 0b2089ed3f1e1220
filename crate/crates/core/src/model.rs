//! Analytic laws: density or atoms, closed-form log-Laplace transform, moments.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{cumulants_from_moments, CumulantVector};
use crate::trig::TrigPoly;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ComplexFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum Law {
    /// Density with the points where it jumps or kinks (cells there are integrated, not sampled).
    Density { pdf: RealFn, breakpoints: Vec<f64> },
    /// Finitely many atoms (location, mass).
    Atoms(Vec<(f64, f64)>),
    /// Only the transform is known.
    Unavailable,
}

/// How A(t) = σ²t²/2 − K(t) behaves as |t| → ∞ (σ² the variance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailBehavior {
    /// A(t) → ∞.
    Decaying,
    /// A is periodic with this period (ψ = 1 − cP).
    Periodic { period: f64 },
    /// A ≡ 0 (the standard normal).
    Flat,
    /// Not classified.
    Other,
}

/// Closed-form log-Laplace transform K(t) = ln E e^{tX} with two derivatives.
#[derive(Clone)]
pub struct LogLaplace {
    pub k: RealFn,
    pub dk: RealFn,
    pub d2k: RealFn,
    /// A = σ²t²/2 − K(t) (σ² the variance) with A′, A″, evaluated without cancellation.
    pub deficit: Option<[RealFn; 3]>,
    pub tail: TailBehavior,
}

/// Gaussian envelope p(x) ≤ c·e^{−x²/(2s²)} on the whole line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub c: f64,
    pub s: f64,
}

/// The trigonometric part of a periodic-ψ model: ψ(t) = 1 − c·P(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPart {
    pub p: TrigPoly,
    pub c: f64,
    pub c_max: f64,
}

#[derive(Clone)]
pub struct AnalyticModel {
    pub name: String,
    pub law: Law,
    pub laplace: Option<LogLaplace>,
    pub char_fn: Option<ComplexFn>,
    /// Exact raw moments m_0, m_1, … (as many as are known).
    pub raw_moments: Vec<f64>,
    pub support: Option<(f64, f64)>,
    pub envelope: Option<Envelope>,
    pub periodic: Option<PeriodicPart>,
}

impl fmt::Debug for AnalyticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticModel")
            .field("name", &self.name)
            .field("moments", &self.raw_moments.len())
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl AnalyticModel {
    pub fn pdf(&self, x: f64) -> Option<f64> {
        match &self.law {
            Law::Density { pdf, .. } => Some(pdf(x)),
            _ => None,
        }
    }

    pub fn has_density(&self) -> bool {
        matches!(self.law, Law::Density { .. })
    }

    pub fn mean(&self) -> f64 {
        self.raw_moments.get(1).copied().unwrap_or(0.0)
    }

    pub fn variance(&self) -> f64 {
        let m1 = self.mean();
        self.raw_moments.get(2).map(|m2| m2 - m1 * m1).unwrap_or(f64::NAN)
    }

    /// Cumulants from the exact raw moments (orders up to the number known).
    pub fn cumulants(&self) -> Result<CumulantVector> {
        if self.raw_moments.len() < 4 {
            return Err(Error::Unsupported(format!(
                "model {} has fewer than three known moments",
                self.name
            )));
        }
        Ok(CumulantVector::from_kappas(&cumulants_from_moments(&self.raw_moments)))
    }

    pub fn laplace(&self) -> Result<&LogLaplace> {
        self.laplace
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("model {} has no closed-form Laplace transform", self.name)))
    }

    /// Law of cX.
    pub fn scaled(&self, c: f64) -> Self {
        assert!(c > 0.0, "scale must be positive");
        if c == 1.0 {
            return self.clone();
        }
        let law = match &self.law {
            Law::Density { pdf, breakpoints } => {
                let pdf = pdf.clone();
                Law::Density {
                    pdf: Arc::new(move |x| pdf(x / c) / c),
                    breakpoints: breakpoints.iter().map(|b| b * c).collect(),
                }
            }
            Law::Atoms(a) => Law::Atoms(a.iter().map(|(x, w)| (x * c, *w)).collect()),
            Law::Unavailable => Law::Unavailable,
        };
        let laplace = self.laplace.as_ref().map(|l| {
            let (k, dk, d2k) = (l.k.clone(), l.dk.clone(), l.d2k.clone());
            // σ²t²/2 − K(t) rescales with t, so only periodicity is lost
            let tail = match l.tail {
                TailBehavior::Periodic { .. } => TailBehavior::Other,
                other => other,
            };
            LogLaplace {
                k: Arc::new(move |t| k(c * t)),
                dk: Arc::new(move |t| c * dk(c * t)),
                d2k: Arc::new(move |t| c * c * d2k(c * t)),
                deficit: None,
                tail,
            }
        });
        let char_fn = self.char_fn.clone().map(|f| Arc::new(move |t| f(c * t)) as ComplexFn);
        Self {
            name: format!("{}*{c}", self.name),
            law,
            laplace,
            char_fn,
            raw_moments: self
                .raw_moments
                .iter()
                .enumerate()
                .map(|(k, m)| m * c.powi(k as i32))
                .collect(),
            support: self.support.map(|(a, b)| (a * c, b * c)),
            envelope: self.envelope.map(|e| Envelope { c: e.c / c, s: e.s * c }),
            periodic: None,
        }
    }

    /// Law of X/σ.
    pub fn standardized(&self) -> Self {
        let v = self.variance();
        if (v - 1.0).abs() < 1e-14 {
            self.clone()
        } else {
            self.scaled(1.0 / v.sqrt())
        }
    }
}
