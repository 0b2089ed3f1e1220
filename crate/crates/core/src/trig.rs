//! Real trigonometric polynomials P(t) = a_0 + Σ_k (a_k cos kt + b_k sin kt).
//!
//! Used for periodic ψ-profiles: a density (1 − c Q(x)) φ(x) has
//! e^{−t²/2} E e^{tX} = 1 − c P(t), where Q carries the same coefficients
//! scaled by e^{k²/2}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    /// a_0, a_1, …
    pub cos: Vec<f64>,
    /// b_0 (ignored), b_1, …
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn new(mut cos: Vec<f64>, mut sin: Vec<f64>) -> Self {
        let n = cos.len().max(sin.len()).max(1);
        cos.resize(n, 0.0);
        sin.resize(n, 0.0);
        sin[0] = 0.0;
        Self { cos, sin }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c], vec![0.0])
    }

    pub fn sin_t() -> Self {
        Self::new(vec![0.0, 0.0], vec![0.0, 1.0])
    }

    pub fn cos_t() -> Self {
        Self::new(vec![0.0, 1.0], vec![0.0, 0.0])
    }

    /// sin^m t.
    pub fn sin_power(m: usize) -> Self {
        Self::sin_t().pow(m)
    }

    pub fn degree(&self) -> usize {
        (0..self.cos.len())
            .rev()
            .find(|&k| self.cos[k] != 0.0 || self.sin[k] != 0.0)
            .unwrap_or(0)
    }

    fn to_complex(&self) -> Vec<Complex64> {
        // index k + N holds the coefficient of e^{ikt}
        let n = self.cos.len() - 1;
        let mut c = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        c[n] = Complex64::new(self.cos[0], 0.0);
        for k in 1..=n {
            let z = Complex64::new(self.cos[k], -self.sin[k]) * 0.5;
            c[n + k] = z;
            c[n - k] = z.conj();
        }
        c
    }

    fn from_complex(c: &[Complex64]) -> Self {
        let n = (c.len() - 1) / 2;
        let mut cos = vec![0.0; n + 1];
        let mut sin = vec![0.0; n + 1];
        cos[0] = c[n].re;
        for k in 1..=n {
            let z = c[n + k] + c[n - k].conj();
            cos[k] = z.re;
            sin[k] = -z.im;
        }
        Self::new(cos, sin)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = self.to_complex();
        let b = other.to_complex();
        let mut c = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Self::from_complex(&c)
    }

    pub fn pow(&self, m: usize) -> Self {
        (0..m).fold(Self::constant(1.0), |acc, _| acc.mul(self))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.cos.len().max(other.cos.len());
        let get = |v: &Vec<f64>, k: usize| v.get(k).copied().unwrap_or(0.0);
        Self::new(
            (0..n).map(|k| get(&self.cos, k) + get(&other.cos, k)).collect(),
            (0..n).map(|k| get(&self.sin, k) + get(&other.sin, k)).collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(
            self.cos.iter().map(|v| v * s).collect(),
            self.sin.iter().map(|v| v * s).collect(),
        )
    }

    /// d-th derivative.
    pub fn derivative(&self, d: usize) -> Self {
        let mut cos = self.cos.clone();
        let mut sin = self.sin.clone();
        for _ in 0..d {
            for k in 0..cos.len() {
                let kf = k as f64;
                let (a, b) = (cos[k], sin[k]);
                cos[k] = kf * b;
                sin[k] = -kf * a;
            }
        }
        Self::new(cos, sin)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut s = self.cos[0];
        for k in 1..self.cos.len() {
            if self.cos[k] != 0.0 || self.sin[k] != 0.0 {
                let (sn, cs) = (k as f64 * t).sin_cos();
                s += self.cos[k] * cs + self.sin[k] * sn;
            }
        }
        s
    }

    /// Q(x) = a_0 + Σ e^{k²/2}(a_k cos kx + b_k sin kx).
    pub fn eval_q(&self, x: f64) -> f64 {
        let mut s = self.cos[0];
        for k in 1..self.cos.len() {
            if self.cos[k] != 0.0 || self.sin[k] != 0.0 {
                let (sn, cs) = (k as f64 * x).sin_cos();
                s += (0.5 * (k * k) as f64).exp() * (self.cos[k] * cs + self.sin[k] * sn);
            }
        }
        s
    }

    /// Smallest period: 2π / gcd of the active frequencies.
    pub fn period(&self) -> f64 {
        let mut g = 0usize;
        for k in 1..self.cos.len() {
            if self.cos[k] != 0.0 || self.sin[k] != 0.0 {
                g = gcd(g, k);
            }
        }
        if g == 0 {
            f64::INFINITY
        } else {
            2.0 * std::f64::consts::PI / g as f64
        }
    }

    /// Largest |coefficient| weighted by k^d, a scale for derivative tolerances.
    pub fn coefficient_scale(&self, d: i32) -> f64 {
        (0..self.cos.len())
            .map(|k| (self.cos[k].abs() + self.sin[k].abs()) * (k.max(1) as f64).powi(d))
            .fold(0.0, f64::max)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin4_expansion() {
        // sin⁴ t = (3 − 4 cos 2t + cos 4t)/8
        let p = TrigPoly::sin_power(4);
        assert!((p.cos[0] - 3.0 / 8.0).abs() < 1e-15);
        assert!((p.cos[2] + 0.5).abs() < 1e-15);
        assert!((p.cos[4] - 1.0 / 8.0).abs() < 1e-15);
        assert!((p.period() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = TrigPoly::new(vec![0.1, 0.2, -0.3], vec![0.0, 0.5, 0.7]);
        let d = p.derivative(1);
        let h = 1e-6;
        for &t in &[0.3, 1.7, -2.2] {
            let fd = (p.eval(t + h) - p.eval(t - h)) / (2.0 * h);
            assert!((d.eval(t) - fd).abs() < 1e-8);
        }
    }
}
