//! Edgeworth corrections for the density of Z_n:
//!
//! φ_m(x) = φ(x)[1 + Σ_{ν=1}^{m−2} q_ν(x) n^{−ν/2}],
//! q_ν = Σ H_{ν+2l} Π_r (γ_{r+2}/(r+2)!)^{k_r}/k_r!,
//!
//! the sum running over k_1 + 2k_2 + … + νk_ν = ν with l = Σ k_r. Also the leading
//! constants of the χ² and entropy expansions, Lyapunov ratios, truncated Tsallis
//! integrals and the Richardson fit used by the rate experiments.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::density::{GridDensity, MomentSummary};
use crate::error::{Error, Result};
use crate::hermite::hermite_coeffs;
use crate::moments::{cumulants_from_moments, CumulantVector};
use crate::special::{factorial, std_normal_pdf, std_normal_sf};

/// Highest supported order ν.
pub const MAX_NU: usize = 8;

/// q_ν in the monomial basis, together with its Hermite-basis form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeworthPolynomial {
    pub nu: usize,
    /// Coefficient of x^j at index j.
    pub coefficients: Vec<f64>,
    /// Coefficient of H_k keyed by k.
    pub hermite: BTreeMap<usize, f64>,
}

impl EdgeworthPolynomial {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }
}

/// Cumulants κ_1..κ_order from the raw moments of a summary.
pub fn cumulants(m: &MomentSummary, order: usize) -> Result<CumulantVector> {
    if m.higher_moments.len() <= order {
        return Err(Error::InvalidParameter(format!(
            "cumulant order {order} needs moments up to {order}, have {}",
            m.higher_moments.len().saturating_sub(1)
        )));
    }
    Ok(CumulantVector::from_kappas(&cumulants_from_moments(
        &m.higher_moments[..=order],
    )))
}

/// All (k_1, …, k_ν) ≥ 0 with Σ r·k_r = ν.
fn partitions(nu: usize) -> Vec<Vec<usize>> {
    fn rec(r: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let nu = cur.len();
        if r > nu {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=left / r {
            cur[r - 1] = k;
            rec(r + 1, left - k * r, cur, out);
        }
        cur[r - 1] = 0;
    }
    let mut out = Vec::new();
    rec(1, nu, &mut vec![0; nu], &mut out);
    out
}

/// q_ν for standardized cumulants γ (γ_3, …, γ_{ν+2} required).
pub fn q_polynomial(nu: usize, gamma: &CumulantVector) -> Result<EdgeworthPolynomial> {
    if nu == 0 || nu > MAX_NU {
        return Err(Error::InvalidParameter(format!("ν must lie in 1..={MAX_NU}, got {nu}")));
    }
    if gamma.order() < nu + 2 {
        return Err(Error::InvalidParameter(format!(
            "q_{nu} needs cumulants up to order {}, have {}",
            nu + 2,
            gamma.order()
        )));
    }
    let mut hermite: BTreeMap<usize, f64> = BTreeMap::new();
    for ks in partitions(nu) {
        let mut w = 1.0;
        let mut l = 0;
        for (i, &k) in ks.iter().enumerate() {
            let r = i + 1;
            if k > 0 {
                w *= (gamma.gamma(r + 2) / factorial(r + 2)).powi(k as i32) / factorial(k);
                l += k;
            }
        }
        if w != 0.0 {
            *hermite.entry(nu + 2 * l).or_insert(0.0) += w;
        }
    }
    let mut coefficients = vec![0.0; 3 * nu + 1];
    for (&k, &w) in &hermite {
        for (j, c) in hermite_coeffs(k).iter().enumerate() {
            coefficients[j] += w * c;
        }
    }
    Ok(EdgeworthPolynomial {
        nu,
        coefficients,
        hermite,
    })
}

/// φ_m with its correction polynomials precomputed.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeworthExpansion {
    pub m: usize,
    pub polys: Vec<EdgeworthPolynomial>,
}

impl EdgeworthExpansion {
    pub fn new(gamma: &CumulantVector, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("m must be ≥ 2, got {m}")));
        }
        let polys = (1..=m - 2).map(|nu| q_polynomial(nu, gamma)).collect::<Result<_>>()?;
        Ok(Self { m, polys })
    }

    /// φ_m(x) for sample size n; may be negative in the far tails.
    pub fn density(&self, x: f64, n: usize) -> f64 {
        let nf = n as f64;
        let corr: f64 = self
            .polys
            .iter()
            .map(|q| q.eval(x) * nf.powf(-(q.nu as f64) / 2.0))
            .sum();
        std_normal_pdf(x) * (1.0 + corr)
    }
}

/// φ_m(x) = φ(x)[1 + Σ_{ν ≤ m−2} q_ν(x) n^{−ν/2}].
pub fn edgeworth_density(x: f64, n: usize, gamma: &CumulantVector, m: usize) -> Result<f64> {
    Ok(EdgeworthExpansion::new(gamma, m)?.density(x, n))
}

/// Leading constants of D(Z_n‖Z) and χ²(Z_n, Z).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionConstants {
    /// D ~ entropy_c1/n
    pub entropy_c1: f64,
    /// D ~ entropy_c2/n² when γ_3 = 0
    pub entropy_c2: f64,
    pub entropy_c2_valid: bool,
    /// χ² ~ chi2_c1/n
    pub chi2_c1: f64,
    /// χ² ~ chi2_c2/n² when α_3 = 0
    pub chi2_c2: f64,
    pub chi2_c2_valid: bool,
}

/// |γ_3| below this counts as a symmetric law.
pub const SKEW_TOL: f64 = 1e-12;

/// γ_3²/12, γ_4²/48, α_3²/6, (α_4 − 3)²/24 for standardized cumulants.
pub fn expansion_constants(gamma: &CumulantVector) -> Result<ExpansionConstants> {
    if gamma.order() < 4 {
        return Err(Error::InvalidParameter("γ_3 and γ_4 are required".into()));
    }
    let g = gamma.standardized();
    let (g3, g4) = (g.gamma(3), g.gamma(4));
    // for unit variance α_3 = γ_3 and α_4 − 3 = γ_4
    Ok(ExpansionConstants {
        entropy_c1: g3 * g3 / 12.0,
        entropy_c2: g4 * g4 / 48.0,
        entropy_c2_valid: g3.abs() < SKEW_TOL,
        chi2_c1: g3 * g3 / 6.0,
        chi2_c2: g4 * g4 / 24.0,
        chi2_c2_valid: g3.abs() < SKEW_TOL,
    })
}

/// Leading behaviour value ≈ constant · n^{−power} of a distance, or None if unknown.
pub fn predicted_rate(distance: &str, c: &ExpansionConstants) -> Option<(f64, f64)> {
    match distance {
        "chi2" if c.chi2_c2_valid => Some((2.0, c.chi2_c2)),
        "chi2" => Some((1.0, c.chi2_c1)),
        "kl" if c.entropy_c2_valid => Some((2.0, c.entropy_c2)),
        "kl" => Some((1.0, c.entropy_c1)),
        _ => None,
    }
}

/// L_s = B_n^{−s/2} Σ E|X_k|^s, B_n = Σ Var X_k, from pairs (E|X_k|^s, Var X_k).
pub fn lyapunov_ratio(moments: &[(f64, f64)], s: f64) -> Result<f64> {
    if !(s > 2.0) {
        return Err(Error::InvalidParameter(format!("s must exceed 2, got {s}")));
    }
    if moments.is_empty() || moments.iter().any(|m| !(m.1 > 0.0)) {
        return Err(Error::InvalidParameter("variances must be positive".into()));
    }
    let b: f64 = moments.iter().map(|m| m.1).sum();
    let a: f64 = moments.iter().map(|m| m.0).sum();
    Ok(a * b.powf(-s / 2.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct TruncatedTsallis {
    pub value: f64,
    /// M_n(s) = √(2(s − 1) ln n)
    pub window: f64,
    /// α(α − 1)γ_s²/(2·s!)·n^{−(s−2)}, valid when γ_3 … γ_{s−1} vanish.
    pub leading_term: Option<f64>,
}

/// I_α(M) = ∫_{|x| ≤ M} (p_n/φ)^α φ − 1 with M = M_n(s).
pub fn truncated_tsallis(
    p_n: &GridDensity,
    alpha: f64,
    s: usize,
    n: usize,
    gamma: Option<&CumulantVector>,
) -> Result<TruncatedTsallis> {
    if s < 2 || n < 2 {
        return Err(Error::InvalidParameter("need s ≥ 2 and n ≥ 2".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("α must be positive, got {alpha}")));
    }
    let m = (2.0 * (s as f64 - 1.0) * (n as f64).ln()).sqrt();
    let (lo, hi) = (p_n.x(0), p_n.x(p_n.len() - 1));
    if lo > -m || hi < m {
        return Err(Error::InvalidParameter(format!(
            "grid [{lo}, {hi}] does not cover |x| ≤ {m}"
        )));
    }
    // split as ∫ φ·g(p/φ) + α(P − Φ) + Φ − 1 over the window, g(r) = r^α − 1 − α(r − 1)
    let h = p_n.step;
    let (mut s_g, mut pw, mut qw) = (0.0, 0.0, 0.0);
    for (i, &p) in p_n.values.iter().enumerate() {
        let x = p_n.x(i);
        if x.abs() > m {
            continue;
        }
        // end cells only count the part inside the window
        let w = ((m - x.abs()) / h + 0.5).clamp(0.0, 1.0);
        let q = std_normal_pdf(x);
        let r = p / q;
        let g = if (r - 1.0).abs() < 1e-4 {
            let d = r - 1.0;
            alpha * (alpha - 1.0) / 2.0 * d * d * (1.0 + (alpha - 2.0) / 3.0 * d)
        } else {
            (alpha * r.ln()).exp_m1() - alpha * (r - 1.0)
        };
        s_g += w * q * g;
        pw += w * p;
        qw += w * q;
    }
    // ∫_{|x|≤M} φ − 1 exactly, the cell sum of φ only enters through P − Φ
    let value = h * s_g + alpha * h * (pw - qw) - 2.0 * std_normal_sf(m);
    let leading_term = gamma.and_then(|g| {
        let g = g.standardized();
        let lower_vanish = (3..s).all(|r| g.gamma(r).abs() < 1e-12);
        (s >= 3 && lower_vanish && g.order() >= s).then(|| {
            alpha * (alpha - 1.0) * g.gamma(s).powi(2) / (2.0 * factorial(s)) * (n as f64).powi(-(s as i32 - 2))
        })
    });
    Ok(TruncatedTsallis {
        value,
        window: m,
        leading_term,
    })
}

/// Limit C of y(n) = C + a_1/n + … + a_{k−1}/n^{k−1} through k points (exact polynomial
/// extrapolation in 1/n to 1/n = 0).
pub fn richardson(ns: &[f64], ys: &[f64]) -> Result<f64> {
    if ns.len() != ys.len() || ns.is_empty() {
        return Err(Error::InvalidParameter("need matching, nonempty n and y lists".into()));
    }
    // Lagrange interpolation in u = 1/n evaluated at u = 0
    let us: Vec<f64> = ns.iter().map(|n| 1.0 / n).collect();
    let mut c = 0.0;
    for i in 0..us.len() {
        let mut w = 1.0;
        for j in 0..us.len() {
            if i != j {
                if us[i] == us[j] {
                    return Err(Error::InvalidParameter("n values must be distinct".into()));
                }
                w *= us[j] / (us[j] - us[i]);
            }
        }
        c += w * ys[i];
    }
    Ok(c)
}
