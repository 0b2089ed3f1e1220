//! Moment ↔ cumulant conversion and the cumulant vector used by the Edgeworth machinery.
//!
//! κ_n = m_n − Σ_{k=1}^{n−1} C(n−1, k−1) κ_k m_{n−k}

use serde::{Deserialize, Serialize};

use crate::special::binomial;

/// Cumulants of a law: mean, variance and γ_3, γ_4, … (γ_r = κ_r).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulantVector {
    pub mean: f64,
    pub variance: f64,
    /// `higher[0]` is γ_3.
    pub higher: Vec<f64>,
}

impl CumulantVector {
    pub fn new(mean: f64, variance: f64, higher: Vec<f64>) -> Self {
        Self { mean, variance, higher }
    }

    /// Cumulants κ_1..κ_K, as returned by [`cumulants_from_moments`].
    pub fn from_kappas(k: &[f64]) -> Self {
        Self {
            mean: k.first().copied().unwrap_or(0.0),
            variance: k.get(1).copied().unwrap_or(1.0),
            higher: k.iter().skip(2).copied().collect(),
        }
    }

    /// γ_r for r ≥ 3; zero beyond the stored order.
    pub fn gamma(&self, r: usize) -> f64 {
        assert!(r >= 3, "γ_r is defined here for r ≥ 3");
        self.higher.get(r - 3).copied().unwrap_or(0.0)
    }

    /// Highest stored order s.
    pub fn order(&self) -> usize {
        self.higher.len() + 2
    }

    /// Cumulants of (X − mean)/σ.
    pub fn standardized(&self) -> Self {
        let sd = self.variance.sqrt();
        let higher = self
            .higher
            .iter()
            .enumerate()
            .map(|(i, g)| g / sd.powi(i as i32 + 3))
            .collect();
        Self {
            mean: 0.0,
            variance: 1.0,
            higher,
        }
    }

    pub fn kappas(&self) -> Vec<f64> {
        let mut v = vec![self.mean, self.variance];
        v.extend(&self.higher);
        v
    }

    /// Raw moments m_0..m_K of the law.
    pub fn raw_moments(&self) -> Vec<f64> {
        moments_from_cumulants(&self.kappas())
    }
}

/// Cumulants κ_1..κ_K from raw moments m_0 = 1, m_1, …, m_K.
pub fn cumulants_from_moments(m: &[f64]) -> Vec<f64> {
    let kmax = m.len().saturating_sub(1);
    let mut k = vec![0.0; kmax + 1];
    for n in 1..=kmax {
        let mut s = m[n];
        for j in 1..n {
            s -= binomial(n - 1, j - 1) * k[j] * m[n - j];
        }
        k[n] = s;
    }
    k.remove(0);
    k
}

/// Raw moments m_0..m_K from cumulants κ_1..κ_K.
pub fn moments_from_cumulants(kappa: &[f64]) -> Vec<f64> {
    let kmax = kappa.len();
    let mut m = vec![0.0; kmax + 1];
    m[0] = 1.0;
    for n in 1..=kmax {
        let mut s = 0.0;
        for j in 1..=n {
            s += binomial(n - 1, j - 1) * kappa[j - 1] * m[n - j];
        }
        m[n] = s;
    }
    m
}

/// Central moments from raw moments.
pub fn central_moments(m: &[f64]) -> Vec<f64> {
    let mu = m.get(1).copied().unwrap_or(0.0);
    (0..m.len())
        .map(|n| {
            (0..=n)
                .map(|j| binomial(n, j) * m[j] * (-mu).powi((n - j) as i32))
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_has_no_higher_cumulants() {
        let m = [1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0];
        let k = cumulants_from_moments(&m);
        assert_eq!(k.len(), 8);
        assert!((k[1] - 1.0).abs() < 1e-15);
        for (i, v) in k.iter().enumerate().skip(2) {
            assert!(v.abs() < 1e-12, "κ_{} = {v}", i + 1);
        }
    }

    #[test]
    fn exponential_cumulants_are_factorials() {
        // Exp(1): m_n = n!, κ_n = (n−1)!
        let m: Vec<f64> = (0..10).map(crate::special::factorial).collect();
        let k = cumulants_from_moments(&m);
        for (i, v) in k.iter().enumerate() {
            let exact = crate::special::factorial(i);
            assert!((v - exact).abs() < 1e-9 * exact, "{i} {v}");
        }
    }
}
