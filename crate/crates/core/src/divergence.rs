//! Distances between a grid density p and a reference q (usually φ) on the same grid.
//!
//! Integrals of the form ∫ (p/q)^α q are written as
//! ∫ q·g(p/q) + α(P − 1) + (1 − α)(Q − 1) with g(r) = r^α − 1 − α(r − 1),
//! which is O((r − 1)²) near r = 1 and keeps small divergences from being
//! swamped by cancellation.
//!
//! For α > 1 only nodes where p exceeds its noise floor are summed; the
//! dropped part is covered by `tail_bound`, computed from a Gaussian envelope
//! of p when one is attached (the part beyond the grid assumes q = φ).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::density::{GridDensity, LOG_FLOOR};
use crate::error::{Error, Result};
use crate::model::Envelope;
use crate::special::{std_normal_sf, LN_SQRT_2PI};

/// Integrand values above this are reported as +∞.
pub const OVERFLOW: f64 = 1e290;

/// A divergence value with a typed +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivValue {
    Finite(f64),
    Infinite,
}

impl DivValue {
    pub fn value(self) -> f64 {
        match self {
            DivValue::Finite(v) => v,
            DivValue::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, DivValue::Finite(_))
    }
}

impl fmt::Display for DivValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivValue::Finite(v) => write!(f, "{v}"),
            DivValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for DivValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DivValue::Finite(v) => s.serialize_f64(*v),
            DivValue::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceResult {
    pub value: DivValue,
    /// Estimated error from the truncated part of the integral (∞ if unknown).
    pub tail_bound: f64,
    /// |x| beyond which nothing was integrated.
    pub truncated_at: f64,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RenyiResult {
    pub alpha: f64,
    pub d: DivValue,
    pub t: DivValue,
    /// Bound on the truncation error of T_α.
    pub tail_bound: f64,
    pub truncated_at: f64,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfiniteOrderResult {
    pub d_inf: DivValue,
    pub t_inf: DivValue,
    /// Node where the grid supremum of p/q is attained.
    pub argmax: f64,
    /// Upper bound for ln(p/q) on the nodes and tails not inspected (from the envelope of p).
    pub tail_log_ratio: Option<f64>,
    pub diagnostic: Option<String>,
}

fn half_width(p: &GridDensity) -> f64 {
    p.x(0).abs().min(p.x(p.len() - 1).abs())
}

/// r^α − 1 − α(r − 1), accurate near r = 1.
fn g_alpha(r: f64, a: f64) -> f64 {
    let d = r - 1.0;
    if d.abs() < 1e-3 {
        // binomial series from the quadratic term on
        let mut c = a * (a - 1.0) / 2.0;
        let mut s = 0.0;
        let mut dk = d * d;
        for k in 2..8 {
            s += c * dk;
            c *= (a - k as f64) / (k as f64 + 1.0);
            dk *= d;
        }
        s
    } else {
        (a * r.ln()).exp_m1() - a * d
    }
}

/// r ln r − r + 1, accurate near r = 1.
fn kl_kernel(p: f64, q: f64) -> f64 {
    let d = p / q - 1.0;
    if d.abs() < 1e-3 {
        let mut s = 0.0;
        let mut dk = d * d;
        for k in 2..9 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * dk / (k * (k - 1)) as f64;
            dk *= d;
        }
        q * s
    } else {
        p * (p.ln() - q.ln()) - p + q
    }
}

/// ∫_{|x|>R} (env)^α φ^{1−α}.
fn envelope_tail(env: &Envelope, alpha: f64, r: f64) -> f64 {
    let kappa = alpha / (env.s * env.s) - (alpha - 1.0);
    if kappa <= 0.0 {
        return f64::INFINITY;
    }
    let ln_c = alpha * env.c.ln() + (alpha - 1.0) * LN_SQRT_2PI;
    ln_c.exp() * 2.0 * (2.0 * std::f64::consts::PI / kappa).sqrt() * std_normal_sf(r * kappa.sqrt())
}

fn envelope_at(env: &Envelope, x: f64) -> f64 {
    env.c * (-x * x / (2.0 * env.s * env.s)).exp()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) || alpha == 1.0 {
        return Err(Error::InvalidParameter(format!(
            "α must be positive, finite and ≠ 1, got {alpha}"
        )));
    }
    Ok(())
}

/// Rényi divergence D_α(p‖q) and Tsallis distance T_α(p‖q).
pub fn renyi_tsallis(p: &GridDensity, q: &GridDensity, alpha: f64) -> Result<RenyiResult> {
    check_alpha(alpha)?;
    p.check_aligned(q)?;
    let h = p.step;
    let r_max = half_width(p);
    let infinite = |why: String| RenyiResult {
        alpha,
        d: DivValue::Infinite,
        t: DivValue::Infinite,
        tail_bound: 0.0,
        truncated_at: r_max,
        diagnostic: Some(why),
    };
    let ln_over = OVERFLOW.ln();
    let n = p.len();
    let (mut s, mut pw, mut qw, mut dropped) = (0.0, 0.0, 0.0, 0.0);
    let mut first_last = (usize::MAX, 0usize);
    for i in 0..n {
        let (pi, qi) = (p.values[i], q.values[i]);
        let in_window = if alpha > 1.0 {
            pi > p.noise_floor && pi > 0.0
        } else {
            true
        };
        if !in_window {
            if pi > 0.0 && qi > 0.0 {
                let bound = match &p.envelope {
                    Some(e) => envelope_at(e, p.x(i)).min(p.noise_floor),
                    None => pi,
                };
                dropped += h * (alpha * bound.ln() + (1.0 - alpha) * qi.ln()).exp();
            }
            continue;
        }
        if qi <= 0.0 {
            if alpha > 1.0 {
                return Ok(infinite(format!("p > 0 where q = 0 (x = {})", p.x(i))));
            }
            // p^α q^{1−α} = 0 here
            s -= alpha * pi;
            pw += pi;
            continue;
        }
        if pi > 0.0 {
            let lg = alpha * pi.ln() + (1.0 - alpha) * qi.ln();
            if lg > ln_over {
                return Ok(infinite(format!("integrand exceeds {OVERFLOW:e} at x = {}", p.x(i))));
            }
            first_last = (first_last.0.min(i), i);
        }
        s += qi * g_alpha(pi / qi, alpha);
        pw += pi;
        qw += qi;
    }
    let (s, pw, qw) = (s * h, pw * h, qw * h);
    let mut diagnostic = None;
    if alpha > 1.0 && first_last.0 != usize::MAX {
        // the integrand must have decayed where the window meets the grid edge
        let at = |i: usize| (alpha * p.values[i].ln() + (1.0 - alpha) * q.values[i].ln()).exp();
        let edge_val = [first_last.0, first_last.1]
            .iter()
            .filter(|&&i| i == 0 || i == n - 1)
            .map(|&i| at(i))
            .fold(0.0, f64::max);
        if edge_val > 1e-12 {
            return Ok(infinite(format!(
                "integrand not decayed at the cutoff |x| = {r_max} (value {edge_val:e}); divergent or grid too narrow"
            )));
        }
    }
    let integral_minus_one = s + alpha * (pw - 1.0) + (1.0 - alpha) * (qw - 1.0);
    let am1 = alpha - 1.0;
    let t = (integral_minus_one / am1).max(0.0);
    let d = (am1 * t).ln_1p() / am1;
    let beyond = match &p.envelope {
        Some(e) => envelope_tail(e, alpha, r_max),
        None => {
            if p.values[0] > 0.0 || p.values[n - 1] > 0.0 {
                diagnostic = Some("no envelope for p: tail beyond the grid not certified".into());
            }
            0.0
        }
    };
    let tail_bound = if alpha > 1.0 {
        (dropped + beyond) / am1
    } else {
        beyond / am1.abs()
    };
    Ok(RenyiResult {
        alpha,
        d: DivValue::Finite(d.max(0.0)),
        t: DivValue::Finite(t),
        tail_bound,
        truncated_at: r_max,
        diagnostic,
    })
}

/// Relative entropy D(p‖q) = ∫ p ln(p/q).
pub fn kl(p: &GridDensity, q: &GridDensity) -> Result<DivergenceResult> {
    p.check_aligned(q)?;
    let h = p.step;
    let r_max = half_width(p);
    let (mut s, mut pw, mut qw, mut dropped) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..p.len() {
        let (pi, qi) = (p.values[i], q.values[i]);
        if !(pi > p.noise_floor && pi > LOG_FLOOR) {
            if pi > 0.0 && qi > 0.0 {
                dropped += h * (pi * (pi.ln() - qi.ln())).abs();
            }
            continue;
        }
        if qi <= 0.0 {
            return Ok(DivergenceResult {
                value: DivValue::Infinite,
                tail_bound: 0.0,
                truncated_at: r_max,
                diagnostic: Some(format!("p > 0 where q = 0 (x = {})", p.x(i))),
            });
        }
        s += kl_kernel(pi, qi);
        pw += pi;
        qw += qi;
    }
    let value = h * (s + pw - qw);
    let beyond = match &p.envelope {
        Some(e) => {
            // p ln(p/φ) ≤ env·(ln(c√2π) + x²/2)⁺ beyond R
            let a = (e.c.ln() + LN_SQRT_2PI).max(0.0);
            let (s, r) = (e.s, r_max);
            let z = r / s;
            let m0 = 2.0 * s * (2.0 * std::f64::consts::PI).sqrt() * std_normal_sf(z);
            let m2 = 2.0
                * (s * s * r * (-z * z / 2.0).exp()
                    + s.powi(3) * (2.0 * std::f64::consts::PI).sqrt() * std_normal_sf(z));
            e.c * (a * m0 + 0.5 * m2)
        }
        None => 0.0,
    };
    Ok(DivergenceResult {
        value: if value > OVERFLOW {
            DivValue::Infinite
        } else {
            DivValue::Finite(value.max(0.0))
        },
        tail_bound: dropped + beyond,
        truncated_at: r_max,
        diagnostic: None,
    })
}

/// Total variation ∫|p − q| ∈ [0, 2] and Hellinger H with H² = ½T_{1/2} ∈ [0, 1].
pub fn tv_hellinger(p: &GridDensity, q: &GridDensity) -> Result<(f64, f64)> {
    p.check_aligned(q)?;
    let mut tv = 0.0;
    let mut sq = 0.0;
    let (mut pm, mut qm) = (0.0, 0.0);
    for (&a, &b) in p.values.iter().zip(&q.values) {
        tv += (a - b).abs();
        let d = a.sqrt() - b.sqrt();
        sq += d * d;
        pm += a;
        qm += b;
    }
    let h = p.step;
    let h2 = (0.5 * h * sq + 1.0 - 0.5 * h * (pm + qm)).clamp(0.0, 1.0);
    Ok(((tv * h).min(2.0), h2.sqrt()))
}

/// Pearson–Vajda distance χ_α = ∫ |p/q − 1|^α q for α ≥ 1.
pub fn pearson_vajda(p: &GridDensity, q: &GridDensity, alpha: f64) -> Result<DivergenceResult> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("χ_α needs α ≥ 1, got {alpha}")));
    }
    p.check_aligned(q)?;
    let h = p.step;
    let r_max = half_width(p);
    let ln_over = OVERFLOW.ln();
    let mut s = 0.0;
    for i in 0..p.len() {
        let qi = q.values[i];
        // below the noise floor p is indistinguishable from 0
        let pi = if p.values[i] > p.noise_floor { p.values[i] } else { 0.0 };
        if qi <= 0.0 {
            if pi > 0.0 && alpha > 1.0 {
                return Ok(DivergenceResult {
                    value: DivValue::Infinite,
                    tail_bound: 0.0,
                    truncated_at: r_max,
                    diagnostic: Some(format!("p > 0 where q = 0 (x = {})", p.x(i))),
                });
            }
            s += pi;
            continue;
        }
        let d = (pi - qi).abs();
        if d == 0.0 {
            continue;
        }
        let lg = alpha * d.ln() + (1.0 - alpha) * qi.ln();
        if lg > ln_over {
            return Ok(DivergenceResult {
                value: DivValue::Infinite,
                tail_bound: 0.0,
                truncated_at: r_max,
                diagnostic: Some(format!("integrand exceeds {OVERFLOW:e} at x = {}", p.x(i))),
            });
        }
        s += lg.exp();
    }
    let tail_bound = match &p.envelope {
        // |p − q|^α q^{1−α} ≤ 2^{α−1}(p^α q^{1−α} + q)
        Some(e) => 2f64.powf(alpha - 1.0) * (envelope_tail(e, alpha, r_max) + 2.0 * std_normal_sf(r_max)),
        None => 0.0,
    };
    Ok(DivergenceResult {
        value: DivValue::Finite(s * h),
        tail_bound,
        truncated_at: r_max,
        diagnostic: None,
    })
}

/// Nodes enter the D_∞ supremum only where the noise floor is below this fraction of p.
pub const RATIO_RESOLUTION: f64 = 1e-6;

/// D_∞ = ln sup p/q and T_∞ = sup (p − q)/q over the grid nodes where p is resolved
/// to [`RATIO_RESOLUTION`].
///
/// The supremum is grid-restricted; `tail_log_ratio` bounds ln(p/q) on everything not inspected.
pub fn infinite_order(p: &GridDensity, q: &GridDensity) -> Result<InfiniteOrderResult> {
    p.check_aligned(q)?;
    let mut best = f64::NEG_INFINITY;
    let mut argmax = f64::NAN;
    let mut unseen = f64::NEG_INFINITY;
    for i in 0..p.len() {
        let (pi, qi) = (p.values[i], q.values[i]);
        if !(pi * RATIO_RESOLUTION > p.noise_floor && pi > 0.0) {
            if let (Some(e), true) = (&p.envelope, qi > 0.0) {
                unseen = unseen.max(envelope_at(e, p.x(i)).min(pi.max(0.0) + p.noise_floor).ln() - qi.ln());
            }
            continue;
        }
        if qi <= 0.0 {
            return Ok(InfiniteOrderResult {
                d_inf: DivValue::Infinite,
                t_inf: DivValue::Infinite,
                argmax: p.x(i),
                tail_log_ratio: None,
                diagnostic: Some(format!("p > 0 where q = 0 (x = {})", p.x(i))),
            });
        }
        let l = pi.ln() - qi.ln();
        if l > best {
            best = l;
            argmax = p.x(i);
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(Error::InvalidParameter("p vanishes on the whole grid".into()));
    }
    let tail_log_ratio = p.envelope.map(|e| {
        // env/φ = c√2π·exp(x²(1 − 1/s²)/2) beyond R
        let r = half_width(p);
        let beyond = if e.s <= 1.0 {
            e.c.ln() + LN_SQRT_2PI + 0.5 * r * r * (1.0 - 1.0 / (e.s * e.s))
        } else {
            f64::INFINITY
        };
        beyond.max(unseen)
    });
    let d = best.max(0.0);
    let diagnostic = match tail_log_ratio {
        Some(b) if b > d => Some(format!(
            "grid-restricted: the envelope allows ln(p/q) up to {b} off the inspected nodes"
        )),
        None => Some("grid-restricted: no envelope to certify the tails".into()),
        _ => None,
    };
    Ok(InfiniteOrderResult {
        d_inf: DivValue::Finite(d),
        t_inf: DivValue::Finite(d.exp_m1()),
        argmax,
        tail_log_ratio,
        diagnostic,
    })
}

/// Young function r ↦ |r| ln(1 + |r|).
pub fn entropy_young(r: f64) -> f64 {
    let a = r.abs();
    a * a.ln_1p()
}

/// Orlicz norm inf{λ > 0 : ∫ Ψ(u/λ) ≤ 1} of grid values u with spacing `step`.
pub fn orlicz_norm<F: Fn(f64) -> f64>(values: &[f64], step: f64, young: F) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let umax = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if umax == 0.0 {
        return Ok(0.0);
    }
    let f = |lam: f64| values.iter().map(|&u| young(u / lam)).sum::<f64>() * step - 1.0;
    let (mut lo, mut hi) = (umax, umax);
    for _ in 0..2000 {
        if f(hi) <= 0.0 {
            break;
        }
        hi *= 2.0;
    }
    for _ in 0..2000 {
        if f(lo) > 0.0 {
            break;
        }
        lo *= 0.5;
    }
    if !(f(hi) <= 0.0 && f(lo) > 0.0) {
        return Err(Error::NoConvergence("could not bracket the Orlicz norm".into()));
    }
    while hi / lo - 1.0 > 1e-10 {
        let mid = (lo * hi).sqrt();
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Relative Fisher information ∫ |(ln p − ln q)′|² p via fourth-order central differences.
///
/// Fails when the derivative is not resolved (the estimate at spacing 2h disagrees
/// by more than 1e−3) or when p is cut off sharply inside the grid.
pub fn relative_fisher(p: &GridDensity, q: &GridDensity) -> Result<f64> {
    p.check_aligned(q)?;
    let n = p.len();
    let h = p.step;
    let floor = (1e3 * p.noise_floor).max(1e-280);
    let pmax = p.max_value();
    let ok: Vec<bool> = (0..n).map(|i| p.values[i] > floor && q.values[i] > 0.0).collect();
    let ell: Vec<f64> = (0..n)
        .map(|i| {
            if ok[i] {
                p.values[i].ln() - q.values[i].ln()
            } else {
                0.0
            }
        })
        .collect();
    for i in 0..n {
        let boundary = ok[i] && ((i > 0 && !ok[i - 1]) || (i + 1 < n && !ok[i + 1]));
        if boundary && p.values[i] > 1e-6 * pmax {
            return Err(Error::Unsupported(format!(
                "p is cut off at x = {} (value {:e}); relative Fisher information is not defined",
                p.x(i),
                p.values[i]
            )));
        }
    }
    let valid = |i: usize, r: usize| i >= r && i + r < n && (i - r..=i + r).all(|j| ok[j]);
    let d = |i: usize, k: usize| {
        (-ell[i + 2 * k] + 8.0 * ell[i + k] - 8.0 * ell[i - k] + ell[i - 2 * k]) / (12.0 * k as f64 * h)
    };
    let (mut fine, mut coarse, mut full) = (0.0, 0.0, 0.0);
    for i in 0..n {
        if !valid(i, 2) {
            continue;
        }
        let a = d(i, 1);
        full += a * a * p.values[i];
        if valid(i, 4) {
            let b = d(i, 2);
            fine += a * a * p.values[i];
            coarse += b * b * p.values[i];
        }
    }
    if (fine - coarse).abs() > 1e-3 * fine.max(coarse) + 1e-12 / h {
        return Err(Error::NoConvergence(format!(
            "derivative of ln(p/q) not resolved on the grid (estimates {} vs {})",
            fine * h,
            coarse * h
        )));
    }
    Ok(full * h)
}

/// D(N(a, λ) ‖ N(0, 1)) = a²/2 + (λ − ln λ − 1)/2.
pub fn gaussian_relative_entropy(a: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "variance must be positive, got {lambda}"
        )));
    }
    Ok(0.5 * a * a + 0.5 * (lambda - lambda.ln() - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{discretize, GridConfig};
    use crate::special::normal_pdf;
    use crate::zoo::{make_model, ModelSpec};

    fn cfg() -> GridConfig {
        GridConfig::new(12.0, 1 << 13).unwrap()
    }

    fn phi() -> GridDensity {
        GridDensity::standard_normal(&cfg())
    }

    fn gauss(mean: f64, var: f64) -> GridDensity {
        let mut g = phi().same_grid(|x| normal_pdf(x, mean, var));
        g.envelope = Some(Envelope {
            c: 1.0 / (2.0 * std::f64::consts::PI * var).sqrt(),
            s: var.sqrt(),
        });
        g
    }

    fn uniform() -> GridDensity {
        discretize(&make_model(&ModelSpec::named("uniform")).unwrap(), &cfg()).unwrap()
    }

    #[test]
    fn identical_densities_are_at_distance_zero() {
        let f = phi();
        for a in [0.5, 2.0, 3.0] {
            let r = renyi_tsallis(&f, &f, a).unwrap();
            assert!(r.d.value().abs() < 1e-14 && r.t.value().abs() < 1e-14);
        }
        assert!(kl(&f, &f).unwrap().value.value().abs() < 1e-14);
        let (tv, h) = tv_hellinger(&f, &f).unwrap();
        assert!(tv == 0.0 && h < 1e-7);
        assert!(infinite_order(&f, &f).unwrap().t_inf.value().abs() < 1e-14);
        assert!(relative_fisher(&f, &f).unwrap().abs() < 1e-20);
    }

    #[test]
    fn gaussian_chi2() {
        let p = gauss(0.0, 0.5);
        let want = 1.0 / (0.5f64.sqrt() * 1.5f64.sqrt()) - 1.0;
        let r = renyi_tsallis(&p, &phi(), 2.0).unwrap();
        assert!((r.t.value() - want).abs() < 1e-10, "{}", r.t.value());
        assert!((want - 0.154701).abs() < 1e-6);
        assert!(r.tail_bound < 1e-20);
        let rel = (((r.alpha - 1.0) * r.d.value()).exp() - 1.0) / (r.alpha - 1.0);
        assert!((rel - r.t.value()).abs() < 1e-10);
        let pv = pearson_vajda(&p, &phi(), 2.0).unwrap();
        assert!((pv.value.value() - want).abs() < 1e-10);
    }

    #[test]
    fn kl_closed_forms() {
        let v = kl(&gauss(1.0, 1.0), &phi()).unwrap().value.value();
        assert!((v - 0.5).abs() < 1e-10);
        let v = kl(&gauss(0.0, 2.0), &phi()).unwrap().value.value();
        assert!((v - gaussian_relative_entropy(0.0, 2.0).unwrap()).abs() < 1e-10);
        assert!((v - 0.153426).abs() < 1e-6);
        let v = kl(&uniform(), &phi()).unwrap().value.value();
        let want = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln() - (2.0 * 3f64.sqrt()).ln();
        // jump cells contribute an O(h) error
        assert!((v - want).abs() < cfg().step(), "{v} vs {want}");
    }

    #[test]
    fn kl_is_the_alpha_limit() {
        let (u, f) = (uniform(), phi());
        let d = kl(&u, &f).unwrap().value.value();
        let lo = renyi_tsallis(&u, &f, 1.0 - 1e-3).unwrap().d.value();
        let hi = renyi_tsallis(&u, &f, 1.0 + 1e-3).unwrap().d.value();
        assert!(lo <= d && d <= hi);
        assert!(hi - lo < 1e-3);
    }

    #[test]
    fn hellinger_is_half_tsallis() {
        let (u, f) = (uniform(), phi());
        let (_, h) = tv_hellinger(&u, &f).unwrap();
        let t = renyi_tsallis(&u, &f, 0.5).unwrap().t.value();
        assert!((h * h - 0.5 * t).abs() < 1e-10);
    }

    #[test]
    fn disjoint_supports_have_tv_two() {
        let f = phi();
        let a = f.same_grid(|x| if (-3.0..-1.0).contains(&x) { 0.5 } else { 0.0 });
        let b = f.same_grid(|x| if (1.0..3.0).contains(&x) { 0.5 } else { 0.0 });
        let (tv, h) = tv_hellinger(&a, &b).unwrap();
        assert!((tv - (a.mass() + b.mass()).min(2.0)).abs() < 1e-12);
        assert!((h - 1.0).abs() < 1e-3);
        assert!(matches!(kl(&a, &b).unwrap().value, DivValue::Infinite));
        assert!(matches!(renyi_tsallis(&a, &b, 2.0).unwrap().t, DivValue::Infinite));
    }

    #[test]
    fn uniform_tv_matches_cdf_oracle() {
        // the densities cross where φ(x) = 1/(2√3); TV = 2 sup_A |P(A) − Q(A)|
        let (u, f) = (uniform(), phi());
        let (tv, _) = tv_hellinger(&u, &f).unwrap();
        let x0 = (2.0 * (2.0 * 3f64.sqrt() / (2.0 * std::f64::consts::PI).sqrt()).ln()).sqrt();
        // u > φ on x0 < |x| < √3
        let s3 = 3f64.sqrt();
        let want = 2.0 * (2.0 * (s3 - x0) / (2.0 * s3) - 2.0 * (std_normal_sf(x0) - std_normal_sf(s3)));
        assert!((tv - want).abs() < cfg().step(), "{tv} vs {want}");
    }

    #[test]
    fn divergent_chi2_is_infinite() {
        let p = gauss(0.0, 2.5);
        let r = renyi_tsallis(&p, &phi(), 2.0).unwrap();
        assert_eq!(r.t, DivValue::Infinite);
        assert!(r.diagnostic.is_some());
    }

    #[test]
    fn infinite_order_of_compact_support() {
        let r = infinite_order(&uniform(), &phi()).unwrap();
        let want = (3f64.sqrt().powi(2) / 2.0).exp() / (2.0 * 3f64.sqrt()) * (2.0 * std::f64::consts::PI).sqrt();
        assert!(r.argmax.abs() <= 3f64.sqrt() + 1e-2);
        assert!(
            (r.d_inf.value() - want.ln()).abs() < 1e-2,
            "{} vs {}",
            r.d_inf.value(),
            want.ln()
        );
        assert!((r.t_inf.value() - r.d_inf.value().exp_m1()).abs() < 1e-12);
    }

    #[test]
    fn orlicz_norms() {
        let f = phi();
        let l2 = orlicz_norm(&f.values, f.step, |r| r * r).unwrap();
        assert!((l2 - (2.0 * std::f64::consts::PI.sqrt()).powf(-0.5)).abs() < 1e-8);
        let l1 = orlicz_norm(&f.values, f.step, f64::abs).unwrap();
        let doubled: Vec<f64> = f.values.iter().map(|v| 2.0 * v).collect();
        let l1d = orlicz_norm(&doubled, f.step, f64::abs).unwrap();
        assert!((l1d - 2.0 * l1).abs() < 1e-8 * l1);
        assert_eq!(orlicz_norm(&[0.0; 4], 1.0, entropy_young).unwrap(), 0.0);
    }

    #[test]
    fn fisher_of_shifted_normal() {
        let i = relative_fisher(&gauss(0.7, 1.0), &phi()).unwrap();
        assert!((i - 0.49).abs() < 1e-8, "{i}");
        assert!(relative_fisher(&uniform(), &phi()).is_err());
    }

    #[test]
    fn gaussian_relative_entropy_values() {
        assert_eq!(gaussian_relative_entropy(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(gaussian_relative_entropy(1.0, 1.0).unwrap(), 0.5);
        assert!(gaussian_relative_entropy(0.0, 0.0).is_err());
    }

    #[test]
    fn series_kernels_match_direct_forms() {
        for &r in &[1.0f64 + 9e-4, 1.0 - 9e-4, 1.0 + 1.1e-3] {
            for &a in &[0.5, 2.0, 3.7] {
                let d = r - 1.0;
                let direct = (a * d.ln_1p()).exp_m1() - a * d;
                assert!((g_alpha(r, a) - direct).abs() < 1e-9 * direct.abs());
            }
            let direct = r * r.ln() - r + 1.0;
            assert!((kl_kernel(r, 1.0) - direct).abs() < 1e-9 * direct);
        }
    }
}
