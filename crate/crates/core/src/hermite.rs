//! Chebyshev–Hermite polynomials H_k (probabilists'), normal moments c_k = E H_k(X),
//! and the Parseval form χ²(X, Z) = Σ_{k≥1} c_k²/k!.
//!
//! H_{k+1}(x) = x H_k(x) − k H_{k−1}(x), H_0 = 1, H_1 = x.

use serde::Serialize;

use crate::density::{GridDensity, MomentSummary};
use crate::error::{Error, Result};
use crate::model::{AnalyticModel, Law};
use crate::special::{binomial, factorial, integrate, ln_factorial, std_normal_pdf};

/// Default number of normal moments.
pub const DEFAULT_K: usize = 40;

pub fn hermite_eval(k: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, x);
    if k == 0 {
        return h0;
    }
    for j in 1..k {
        let h2 = x * h1 - j as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// H_0(x), …, H_kmax(x).
pub fn hermite_all(kmax: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(kmax + 1);
    h.push(1.0);
    if kmax >= 1 {
        h.push(x);
    }
    for j in 1..kmax {
        h.push(x * h[j] - j as f64 * h[j - 1]);
    }
    h
}

/// Monomial coefficients of H_k (index = power).
pub fn hermite_coeffs(k: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for j in 1..k {
        let mut next = vec![0.0; j + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= j as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// c_0, …, c_K with c_k = E H_k(X).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalMomentVector {
    pub values: Vec<f64>,
}

impl NormalMomentVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    /// The standard normal law: c = (1, 0, 0, …).
    pub fn gaussian(k: usize) -> Self {
        let mut v = vec![0.0; k + 1];
        v[0] = 1.0;
        Self { values: v }
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }
}

/// c_k = h Σ H_k(x_i) p_i; the integrand must have decayed at the grid ends.
pub fn normal_moments_grid(p: &GridDensity, k: usize) -> Result<NormalMomentVector> {
    let mut c = vec![0.0; k + 1];
    let n = p.len();
    let mut peak: f64 = 0.0;
    let mut edge: f64 = 0.0;
    for (i, &v) in p.values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let h = hermite_all(k, p.x(i));
        for (ck, hk) in c.iter_mut().zip(&h) {
            *ck += hk * v;
        }
        let m = h.iter().fold(0.0f64, |m, x| m.max(x.abs())) * v;
        peak = peak.max(m);
        if i == 0 || i == n - 1 {
            edge = edge.max(m);
        }
    }
    if edge > 1e-12 * peak.max(1.0) {
        return Err(Error::Unsupported(format!(
            "H_k p has not decayed at the grid boundary ({edge:e}); widen the grid or lower K"
        )));
    }
    let m0 = c[0] * p.step;
    Ok(NormalMomentVector {
        values: c.iter().map(|v| v * p.step / m0).collect(),
    })
}

/// c_k for an analytic model: exact sums for atoms, piecewise Gauss–Legendre for densities,
/// and the raw moments otherwise.
pub fn normal_moments_model(model: &AnalyticModel, k: usize) -> Result<NormalMomentVector> {
    match &model.law {
        Law::Atoms(atoms) => {
            let mut c = vec![0.0; k + 1];
            for &(x, w) in atoms {
                for (ck, hk) in c.iter_mut().zip(hermite_all(k, x)) {
                    *ck += w * hk;
                }
            }
            Ok(NormalMomentVector { values: c })
        }
        Law::Density { pdf, breakpoints } => {
            let sd = model.variance().sqrt();
            let (lo, hi) = model
                .support
                .unwrap_or((model.mean() - 40.0 * sd, model.mean() + 40.0 * sd));
            let mut cuts = vec![lo];
            cuts.extend(breakpoints.iter().copied().filter(|&b| b > lo && b < hi));
            cuts.push(hi);
            let mut c = vec![0.0; k + 1];
            for w in cuts.windows(2) {
                let panels = ((w[1] - w[0]) / 0.05).ceil().max(1.0) as usize;
                for (j, cj) in c.iter_mut().enumerate() {
                    *cj += integrate(|x| hermite_eval(j, x) * pdf(x), w[0], w[1], panels);
                }
            }
            Ok(NormalMomentVector { values: c })
        }
        Law::Unavailable => {
            let m = &model.raw_moments;
            if m.len() <= k {
                return Err(Error::Unsupported(format!(
                    "{} has only {} known moments",
                    model.name,
                    m.len() - 1
                )));
            }
            let c = (0..=k)
                .map(|j| hermite_coeffs(j).iter().zip(m).map(|(a, b)| a * b).sum())
                .collect();
            Ok(NormalMomentVector { values: c })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    /// Geometric estimate of the omitted terms.
    pub tail_estimate: f64,
    pub terms: usize,
}

/// Σ_{k≥1} t^k c_k²/k!; at t = 1 this is χ²(X, Z). Terms are formed in log space.
/// Converged when the last five nonzero terms shrink with ratio < 0.9.
pub fn chi2_from_normal_moments(c: &NormalMomentVector, t: f64) -> Result<SeriesSum> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("t must lie in [0, 1], got {t}")));
    }
    let terms: Vec<f64> = c
        .values
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| {
            if ck == 0.0 || t == 0.0 {
                0.0
            } else {
                (k as f64 * t.ln() + 2.0 * ck.abs().ln() - ln_factorial(k)).exp()
            }
        })
        .collect();
    let value: f64 = terms.iter().sum();
    let scale = terms.iter().fold(0.0f64, |m, v| m.max(*v));
    // terms that are zero to round-off do not count
    let nz: Vec<f64> = terms
        .iter()
        .copied()
        .filter(|v| *v > 1e-28 * scale.max(1e-300))
        .collect();
    let k_max = c.values.len().saturating_sub(1);
    // two or more vanishing trailing terms: the coefficient sequence is finite
    let last_nz = terms
        .iter()
        .rposition(|v| *v > 1e-28 * scale.max(1e-300))
        .map(|i| i + 1);
    if last_nz.is_none_or(|k| k + 2 <= k_max) {
        return Ok(SeriesSum {
            value,
            tail_estimate: 0.0,
            terms: k_max,
        });
    }
    if nz.len() < 6 {
        return Err(Error::NoConvergence(
            "too few nonzero terms to judge convergence; increase K".into(),
        ));
    }
    let tail = &nz[nz.len() - 6..];
    let ratio = tail.windows(2).map(|w| w[1] / w[0]).fold(0.0f64, f64::max);
    if ratio >= 0.9 {
        return Err(Error::NoConvergence(format!(
            "normal-moment series not converging (term ratio {ratio:.3}): increase K or χ² infinite"
        )));
    }
    let last = tail[5];
    Ok(SeriesSum {
        value,
        tail_estimate: last * ratio / (1.0 - ratio),
        terms: k_max,
    })
}

/// Raw moments from normal moments: E X^k = k! Σ_j c_{k−2j}/((k−2j)! j! 2^j).
pub fn moments_from_normal_moments(c: &NormalMomentVector) -> Result<MomentSummary> {
    let k = c.order();
    if k < 4 {
        return Err(Error::InvalidParameter("need normal moments up to order 4".into()));
    }
    let m = (0..=k)
        .map(|n| {
            (0..=n / 2)
                .map(|j| {
                    let r = n - 2 * j;
                    (ln_factorial(n) - ln_factorial(r) - ln_factorial(j) - j as f64 * std::f64::consts::LN_2).exp()
                        * c.values[r]
                })
                .sum()
        })
        .collect();
    Ok(MomentSummary::from_raw(m))
}

/// φ(x) Σ c_k H_k(x)/k!, provided the partial sums have settled.
pub fn exponential_series_eval(c: &NormalMomentVector, x: f64) -> Result<f64> {
    let last_nz = c.values.iter().rposition(|v| *v != 0.0).unwrap_or(0);
    let h = hermite_all(c.order(), x);
    let terms: Vec<f64> = c
        .values
        .iter()
        .zip(&h)
        .enumerate()
        .map(|(k, (ck, hk))| ck * hk / factorial(k))
        .collect();
    let s: f64 = terms.iter().sum();
    let recent = terms.iter().rev().take(6).fold(0.0f64, |m, v| m.max(v.abs()));
    let size = terms.iter().fold(s.abs(), |m, v| m.max(v.abs()));
    if last_nz + 2 > c.order() && recent > 1e-6 * size.max(1e-12) {
        return Err(Error::NoConvergence(format!(
            "series not pointwise convergent here: last terms of size {recent:e} against a sum of {s:e}"
        )));
    }
    Ok(std_normal_pdf(x) * s)
}

/// max over `points` of |H_k(ax + by) − Σ_i C(k,i) a^i b^{k−i} H_i(x) H_{k−i}(y)| for a² + b² = 1.
pub fn hermite_binomial_check(a: f64, b: f64, k: usize, points: &[(f64, f64)]) -> Result<f64> {
    if (a * a + b * b - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "need a² + b² = 1, got {}",
            a * a + b * b
        )));
    }
    let mut worst: f64 = 0.0;
    for &(x, y) in points {
        let (hx, hy) = (hermite_all(k, x), hermite_all(k, y));
        let rhs: f64 = (0..=k)
            .map(|i| binomial(k, i) * a.powi(i as i32) * b.powi((k - i) as i32) * hx[i] * hy[k - i])
            .sum();
        worst = worst.max((hermite_eval(k, a * x + b * y) - rhs).abs());
    }
    Ok(worst)
}
