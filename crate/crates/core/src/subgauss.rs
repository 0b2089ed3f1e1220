//! Log-Laplace profiles K, A = σ²t²/2 − K, ψ = e^{−A}, and the checkers built on them:
//! strict subgaussianity, the separation property, the D_∞ CLT conditions
//! (zeros of A must be flat: A = 0 ⇒ A″ = 0), their trigonometric form for
//! periodic ψ = 1 − cP, Esscher tilting, and the quartic family 1 − αt² + βt⁴.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::density::{discretize, log_laplace_eval, GridConfig, GridDensity};
use crate::error::{Error, Result};
use crate::model::{AnalyticModel, LogLaplace, PeriodicPart, TailBehavior};
use crate::report::{CheckReport, Verdict, Witness};
use crate::special::{bisect, golden_min};
use crate::trig::TrigPoly;
use crate::zoo::check_moment_constraints;

/// A(t) counts as zero when below ZERO_TOL·(1 + t²), relative to the scale of A.
pub const ZERO_TOL: f64 = 1e-8;
/// |A″| at a zero of A counts as zero when below DERIV_TOL, relative to the scale of A″.
pub const DERIV_TOL: f64 = 1e-4;

#[derive(Clone)]
enum Source {
    Closed(LogLaplace),
    /// K, K′, K″ sampled at equally spaced t.
    Table {
        t0: f64,
        dt: f64,
        k: Vec<f64>,
        k1: Vec<f64>,
        k2: Vec<f64>,
    },
}

/// K(t) = ln E e^{tX} with derived A(t) = σ²t²/2 − K(t) and ψ(t) = e^{−A(t)},
/// where σ² is the variance. For standardized laws this is the usual A = t²/2 − K.
#[derive(Clone)]
pub struct LogLaplaceProfile {
    pub name: String,
    pub variance: f64,
    /// Scan range for t used by the checkers.
    pub range: (f64, f64),
    pub samples: usize,
    pub tail: TailBehavior,
    /// Absolute accuracy of A relative to 1 + σ²t².
    pub accuracy: f64,
    raw_moments: Vec<f64>,
    /// Trigonometric part of ψ for periodic models.
    pub periodic: Option<PeriodicPart>,
    source: Source,
}

impl std::fmt::Debug for LogLaplaceProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LogLaplaceProfile")
            .field("name", &self.name)
            .field("variance", &self.variance)
            .field("range", &self.range)
            .field("tail", &self.tail)
            .field("closed_form", &self.is_closed_form())
            .finish()
    }
}

/// Profile of `model` over t ∈ [t_min, t_max]: closed form when the model has one,
/// otherwise tabulated from the discretized density.
pub fn profile(model: &AnalyticModel, range: (f64, f64), samples: usize) -> Result<LogLaplaceProfile> {
    check_range(range, samples)?;
    match &model.laplace {
        Some(l) => Ok(LogLaplaceProfile {
            name: model.name.clone(),
            variance: model.variance(),
            range,
            samples,
            tail: l.tail,
            accuracy: 1e-13,
            raw_moments: model.raw_moments.clone(),
            periodic: model.periodic.clone(),
            source: Source::Closed(l.clone()),
        }),
        None => {
            let g = discretize(model, &GridConfig::default())?;
            let mut p = profile_from_grid(&g, range, samples, &model.name)?;
            p.raw_moments = model.raw_moments.clone();
            Ok(p)
        }
    }
}

/// Tabulated profile of a grid density; K′ and K″ are the mean and variance of the tilted density.
/// The behaviour of A beyond the range is unknown, so the tail is classified as `Other`.
pub fn profile_from_grid(p: &GridDensity, range: (f64, f64), samples: usize, name: &str) -> Result<LogLaplaceProfile> {
    check_range(range, samples)?;
    // the table must include both signs of t for separation and zero checks
    let (lo, hi) = (range.0.min(-range.1.abs()), range.1.max(-range.0));
    let n = 4 * samples + 1;
    let dt = (hi - lo) / (n - 1) as f64;
    let mut k = Vec::with_capacity(n);
    let mut k1 = Vec::with_capacity(n);
    let mut k2 = Vec::with_capacity(n);
    for i in 0..n {
        let t = lo + i as f64 * dt;
        let lk = log_laplace_eval(p, t).map_err(|_| {
            Error::Unsupported(format!(
                "{name}: Laplace transform not resolved at t = {t}; not subgaussian on range"
            ))
        })?;
        let (mut m1, mut m2) = (0.0, 0.0);
        for (j, &v) in p.values.iter().enumerate() {
            if v > p.noise_floor && v > 0.0 {
                let x = p.x(j);
                let w = (t * x + v.ln() - lk).exp() * p.step;
                m1 += w * x;
                m2 += w * x * x;
            }
        }
        k.push(lk);
        k1.push(m1);
        k2.push(m2 - m1 * m1);
    }
    let m = p.raw_moments(4);
    Ok(LogLaplaceProfile {
        name: name.to_string(),
        variance: m[2] / m[0] - (m[1] / m[0]).powi(2),
        range,
        samples,
        tail: TailBehavior::Other,
        accuracy: 1e-9,
        raw_moments: m,
        periodic: None,
        source: Source::Table { t0: lo, dt, k, k1, k2 },
    })
}

fn check_range(range: (f64, f64), samples: usize) -> Result<()> {
    if !(range.0 < range.1 && range.0.is_finite() && range.1.is_finite()) || samples < 8 {
        return Err(Error::InvalidParameter(format!(
            "bad t-range {range:?} or too few samples ({samples})"
        )));
    }
    Ok(())
}

impl LogLaplaceProfile {
    pub fn is_closed_form(&self) -> bool {
        matches!(self.source, Source::Closed(_))
    }

    /// Same profile with a different scan range.
    pub fn with_range(mut self, range: (f64, f64)) -> Self {
        self.range = range;
        self
    }

    /// Cubic Hermite interpolation of (f, f′) from the table; NaN outside it.
    fn table(&self, t: f64, which: usize) -> f64 {
        let Source::Table { t0, dt, k, k1, k2 } = &self.source else {
            unreachable!()
        };
        let r = (t - t0) / dt;
        if r < 0.0 || r > (k.len() - 1) as f64 {
            return f64::NAN;
        }
        let i = (r.floor() as usize).min(k.len() - 2);
        let s = r - i as f64;
        let (f, d) = match which {
            0 => (k, k1),
            1 => (k1, k2),
            _ => return k2[i] + s * (k2[i + 1] - k2[i]),
        };
        let (h00, h10, h01, h11) = (
            2.0 * s.powi(3) - 3.0 * s * s + 1.0,
            s.powi(3) - 2.0 * s * s + s,
            -2.0 * s.powi(3) + 3.0 * s * s,
            s.powi(3) - s * s,
        );
        h00 * f[i] + h10 * dt * d[i] + h01 * f[i + 1] + h11 * dt * d[i + 1]
    }

    pub fn k(&self, t: f64) -> f64 {
        match &self.source {
            Source::Closed(l) => (l.k)(t),
            Source::Table { .. } => self.table(t, 0),
        }
    }

    pub fn k1(&self, t: f64) -> f64 {
        match &self.source {
            Source::Closed(l) => (l.dk)(t),
            Source::Table { .. } => self.table(t, 1),
        }
    }

    pub fn k2(&self, t: f64) -> f64 {
        match &self.source {
            Source::Closed(l) => (l.d2k)(t),
            Source::Table { .. } => self.table(t, 2),
        }
    }

    fn deficit(&self) -> Option<&[crate::model::RealFn; 3]> {
        match &self.source {
            Source::Closed(l) => l.deficit.as_ref(),
            Source::Table { .. } => None,
        }
    }

    pub fn a(&self, t: f64) -> f64 {
        match self.deficit() {
            Some(d) => d[0](t),
            None => 0.5 * self.variance * t * t - self.k(t),
        }
    }

    pub fn a1(&self, t: f64) -> f64 {
        match self.deficit() {
            Some(d) => d[1](t),
            None => self.variance * t - self.k1(t),
        }
    }

    pub fn a2(&self, t: f64) -> f64 {
        match self.deficit() {
            Some(d) => d[2](t),
            None => self.variance - self.k2(t),
        }
    }

    pub fn psi(&self, t: f64) -> f64 {
        (-self.a(t)).exp()
    }

    pub fn psi1(&self, t: f64) -> f64 {
        -self.a1(t) * self.psi(t)
    }

    pub fn psi2(&self, t: f64) -> f64 {
        let a1 = self.a1(t);
        (a1 * a1 - self.a2(t)) * self.psi(t)
    }

    fn tol(&self, t: f64) -> f64 {
        self.accuracy * (1.0 + self.variance * t * t)
    }

    fn scan(&self, lo: f64, hi: f64) -> Vec<f64> {
        let n = self.samples;
        (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
    }

    /// Local minima of A on [lo, hi], refined by bisection on A′ (or golden section).
    pub fn local_minima(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let ts = self.scan(lo, hi);
        let av: Vec<f64> = ts.iter().map(|&t| self.a(t)).collect();
        let noise = 8.0 * f64::EPSILON * av.iter().filter(|v| v.is_finite()).fold(0.0f64, |m, v| m.max(v.abs()));
        let mut out: Vec<(f64, f64)> = Vec::new();
        for i in 0..ts.len() {
            let left = if i == 0 { f64::INFINITY } else { av[i - 1] };
            let right = if i + 1 == ts.len() { f64::INFINITY } else { av[i + 1] };
            if !(av[i] <= left && av[i] <= right) {
                continue;
            }
            let (a, b) = (ts[i.saturating_sub(1)], ts[(i + 1).min(ts.len() - 1)]);
            let (da, db) = (self.a1(a), self.a1(b));
            let t = if da < 0.0 && db > 0.0 {
                bisect(|t| self.a1(t), a, b, 200)
            } else {
                golden_min(|t| self.a(t), a, b, 1e-12 * (1.0 + ts[i].abs()))
            };
            // a refinement that gains only round-off keeps the scan node (flat zeros)
            let gain = av[i] - self.a(t);
            let (t, v) = if gain > noise { (t, self.a(t)) } else { (ts[i], av[i]) };
            if out.last().is_none_or(|&(u, _)| (t - u).abs() > 1e-9 * (1.0 + t.abs())) {
                out.push((t, v));
            }
        }
        out
    }

    /// ψ(t + period) − ψ(t) over `periods` periods; None if ψ is not classified periodic.
    pub fn periodicity_defect(&self, periods: usize) -> Option<f64> {
        let TailBehavior::Periodic { period } = self.tail else {
            return None;
        };
        let n = 200 * periods;
        let mut worst: f64 = 0.0;
        for i in 0..=n {
            let t = period * periods as f64 * i as f64 / n as f64;
            worst = worst.max((self.psi(t + period) - self.psi(t)).abs());
        }
        Some(worst)
    }
}

/// Definition of strict subgaussianity: K(t) ≤ σ²t²/2 on the sampled range.
/// Also checks the implied moment facts E(X − EX)³ = 0 and E(X − EX)⁴ ≤ 3σ⁴.
pub fn strict_subgauss_check(profile: &LogLaplaceProfile, sigma2: f64) -> CheckReport {
    let mut rep = CheckReport::new("strict_subgauss")
        .tol("abs_tol_per_1_plus_sigma2_t2", profile.accuracy)
        .tol("sigma2", sigma2);
    let same = (sigma2 - profile.variance).abs() <= 1e-14 * profile.variance;
    let margin = |t: f64| {
        if same {
            profile.a(t)
        } else {
            0.5 * sigma2 * t * t - profile.k(t)
        }
    };
    let (lo, hi) = profile.range;
    let (lo, hi) = (lo.min(-hi), hi.max(-lo));
    let mut worst = Witness {
        t: f64::NAN,
        margin: f64::INFINITY,
    };
    for t in profile.scan(lo, hi) {
        let m = margin(t);
        if m < worst.margin {
            worst = Witness { t, margin: m };
        }
    }
    // sharpen the worst point
    let h = (hi - lo) / profile.samples as f64;
    let t = golden_min(margin, worst.t - h, worst.t + h, 1e-12 * (1.0 + worst.t.abs()));
    if margin(t) < worst.margin {
        worst = Witness { t, margin: margin(t) };
    }
    let tol = profile.accuracy * (1.0 + sigma2 * worst.t * worst.t);
    rep.witnesses.push(worst);
    if worst.margin < -10.0 * tol {
        rep.verdict = Verdict::Fails;
        rep.note(format!("K(t) exceeds σ²t²/2 by {} at t = {}", -worst.margin, worst.t));
    } else if worst.margin < -tol {
        rep.verdict = Verdict::Inconclusive;
        rep.note("largest violation lies within the tolerance band");
    }
    if same {
        rep.zero_set = zeros(profile, lo, hi);
    }
    // necessary moment conditions
    let m = &profile.raw_moments;
    if m.len() >= 5 {
        let mu = m[1];
        let c3 = m[3] - 3.0 * mu * m[2] + 2.0 * mu.powi(3);
        let c4 = m[4] - 4.0 * mu * m[3] + 6.0 * mu * mu * m[2] - 3.0 * mu.powi(4);
        let s = sigma2.sqrt();
        if c3.abs() > 1e-9 * s.powi(3) {
            rep.merge_verdict(Verdict::Fails);
            rep.witnesses.push(Witness {
                t: 0.0,
                margin: -c3.abs(),
            });
            rep.note(format!("third central moment {c3} ≠ 0"));
        }
        let excess = c4 - 3.0 * sigma2 * sigma2;
        if excess > 1e-9 * sigma2 * sigma2 {
            rep.merge_verdict(Verdict::Fails);
            rep.witnesses.push(Witness {
                t: 0.0,
                margin: -excess,
            });
            rep.note(format!("fourth central moment exceeds 3σ⁴ by {excess}"));
        }
    } else {
        rep.note("moments unavailable: E X³ and E X⁴ conditions not checked");
    }
    rep
}

fn zeros(profile: &LogLaplaceProfile, lo: f64, hi: f64) -> Vec<f64> {
    let scale = zero_scale(profile, lo, hi);
    profile
        .local_minima(lo, hi)
        .into_iter()
        .filter(|&(t, a)| a <= ZERO_TOL * (1.0 + t * t) * scale)
        .map(|(t, _)| t)
        .collect()
}

fn zero_scale(profile: &LogLaplaceProfile, lo: f64, hi: f64) -> f64 {
    let amax = profile
        .scan(lo, hi)
        .into_iter()
        .map(|t| profile.a(t))
        .fold(0.0, f64::max);
    amax.min(1.0)
}

/// Separation property: sup_{|t| ≥ t₀} ψ(t) < 1 for each t₀.
pub fn separation_check(profile: &LogLaplaceProfile, t0_list: &[f64]) -> CheckReport {
    let mut rep = CheckReport::new("separation").tol("zero_tol", profile.accuracy);
    if matches!(profile.tail, TailBehavior::Flat) {
        rep.verdict = Verdict::Inconclusive;
        rep.note("ψ ≡ 1 (normal law): excluded by the precondition");
        return rep;
    }
    let hi = profile.range.1.abs().max(profile.range.0.abs());
    for &t0 in t0_list {
        let t0 = t0.abs();
        if t0 >= hi {
            rep.merge_verdict(Verdict::Inconclusive);
            rep.note(format!("t₀ = {t0} lies beyond the scanned range"));
            continue;
        }
        let mut best = (f64::NAN, f64::INFINITY);
        for (a, b) in [(t0, hi), (-hi, -t0)] {
            for (t, v) in profile.local_minima(a, b) {
                if v < best.1 {
                    best = (t, v);
                }
            }
        }
        // margin 1 − sup ψ
        let margin = -(-best.1).exp_m1();
        rep.witnesses.push(Witness { t: best.0, margin });
        if best.1 <= profile.tol(best.0) {
            rep.merge_verdict(Verdict::Fails);
            rep.zero_set.push(best.0);
            rep.note(format!("ψ({}) = 1 beyond t₀ = {t0}", best.0));
        }
    }
    match profile.tail {
        TailBehavior::Decaying => rep.note("tail: ψ → 0, the scanned range is conclusive"),
        TailBehavior::Periodic { period } => {
            rep.merge_verdict(Verdict::Fails);
            rep.zero_set.push(period);
            rep.note(format!(
                "tail: ψ is periodic with period {period}, so ψ(k·{period}) = 1"
            ));
        }
        _ => {
            rep.merge_verdict(Verdict::Inconclusive);
            rep.note("tail of ψ not classified: the property beyond the range is undecided");
        }
    }
    rep
}

/// Conditions for T_∞(p_n‖φ) → 0: (a) A″ = 0 wherever A = 0, and (b) the same along
/// sequences t → ±∞ with A → 0. The range is read as |t| ∈ [lo, hi]; periodic profiles
/// are checked on one period and the result propagates.
pub fn dinf_clt_check(profile: &LogLaplaceProfile) -> CheckReport {
    let mut rep = CheckReport::new("dinf_clt")
        .tol("zero_tol", ZERO_TOL)
        .tol("deriv_tol", DERIV_TOL);
    let (lo, hi) = match profile.tail {
        TailBehavior::Periodic { period } => {
            rep.note(format!("ψ is periodic with period {period}: one period checked"));
            (0.0, period)
        }
        _ => {
            let hi = profile.range.1.abs().max(profile.range.0.abs());
            (-hi, hi)
        }
    };
    let amin = profile
        .local_minima(lo, hi)
        .into_iter()
        .map(|m| m.1)
        .fold(f64::INFINITY, f64::min);
    if amin < -10.0 * profile.accuracy * (1.0 + hi * hi) {
        rep.verdict = Verdict::Inconclusive;
        rep.note(format!(
            "not strictly subgaussian (min A = {amin}); the criterion does not apply"
        ));
        return rep;
    }
    let a2max = profile
        .scan(lo, hi)
        .into_iter()
        .map(|t| profile.a2(t).abs())
        .fold(0.0, f64::max);
    let dtol = DERIV_TOL * a2max.clamp(f64::MIN_POSITIVE, 1.0);
    for t in zeros(profile, lo, hi) {
        let a2 = profile.a2(t);
        rep.zero_set.push(t);
        let margin = dtol - a2.abs();
        rep.witnesses.push(Witness { t, margin });
        if margin < 0.0 {
            rep.merge_verdict(Verdict::Fails);
            rep.note(format!("A({t}) = 0 but A″({t}) = {a2}"));
        }
    }
    match profile.tail {
        TailBehavior::Decaying => rep.note("A → ∞ in both tails: condition (b) is void"),
        TailBehavior::Flat => rep.note("A ≡ 0 and A″ ≡ 0 (normal law)"),
        TailBehavior::Periodic { .. } => {}
        TailBehavior::Other => {
            rep.merge_verdict(Verdict::Inconclusive);
            rep.note("tail of A not classified: condition at ±∞ undecidable from finite data");
        }
    }
    rep
}

/// Outcome of the trigonometric criterion for ψ = 1 − cP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodicClass {
    /// P > 0 on (0, h): convergence with rate (log n)³/n.
    ConvergesWithRate,
    /// every interior zero of P has P″ = 0.
    Converges,
    /// some interior zero has P″ ≠ 0.
    Fails,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicCltReport {
    pub class: PeriodicClass,
    #[serde(flatten)]
    pub report: CheckReport,
}

/// Periodic criterion: T_∞(p_n‖φ) → 0 iff P(t) = 0 ⇒ P″(t) = 0 for 0 < t < h.
/// `period` defaults to the smallest period of P.
pub fn periodic_clt_check(p: &TrigPoly, period: Option<f64>) -> Result<PeriodicCltReport> {
    check_moment_constraints(p)?;
    let h = period.unwrap_or_else(|| p.period());
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(
            "P must be non-constant with a finite period".into(),
        ));
    }
    let (p1, p2) = (p.derivative(1), p.derivative(2));
    let scale = p.coefficient_scale(0).max(1e-300);
    let d2scale = p.coefficient_scale(2).max(1e-300);
    let n = 4096 * p.degree().max(1);
    let ts: Vec<f64> = (0..=n).map(|i| h * i as f64 / n as f64).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| p.eval(t)).collect();
    let zero_tol = 1e-10 * scale;
    let mut rep = CheckReport::new("periodic_clt")
        .tol("zero_tol", zero_tol)
        .tol("deriv_tol", DERIV_TOL * d2scale);
    let mut class = PeriodicClass::ConvergesWithRate;
    // near a high-order zero round-off creates spurious minima; a zero only counts if P
    // rises clearly above the zero level between it and the previous zero (or the ends)
    let hump = 1e3 * zero_tol;
    let max_of = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(*v));
    let mut last = 0;
    for i in 1..n {
        if !(vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1]) {
            continue;
        }
        if vals[i] <= zero_tol && (max_of(&vals[last..=i]) < hump || max_of(&vals[i..]) < hump) {
            continue;
        }
        let (a, b) = (ts[i - 1], ts[i + 1]);
        let t = if p1.eval(a) < 0.0 && p1.eval(b) > 0.0 {
            bisect(|t| p1.eval(t), a, b, 200)
        } else {
            golden_min(|t| p.eval(t), a, b, 1e-14)
        };
        let v = p.eval(t);
        if v < -zero_tol {
            return Err(Error::InvalidParameter(format!(
                "P({t}) = {v} < 0: P must be nonnegative on (0, h)"
            )));
        }
        if v > zero_tol || t <= 1e-9 * h || t >= h * (1.0 - 1e-9) {
            continue;
        }
        last = i;
        let d2 = p2.eval(t);
        rep.zero_set.push(t);
        let margin = DERIV_TOL * d2scale - d2.abs();
        rep.witnesses.push(Witness { t, margin });
        if margin < 0.0 {
            class = PeriodicClass::Fails;
            rep.note(format!("P({t}) = 0 with P″ = {d2}"));
        } else if class == PeriodicClass::ConvergesWithRate {
            class = PeriodicClass::Converges;
        }
    }
    rep.verdict = if class == PeriodicClass::Fails {
        Verdict::Fails
    } else {
        Verdict::Holds
    };
    Ok(PeriodicCltReport { class, report: rep })
}

/// Esscher transform Q_h p = e^{hx} p(x)/L(h), renormalized on the grid.
/// Fails if the tilted density carries more than 1e−10 of mass at the grid boundary.
pub fn esscher(p: &GridDensity, h: f64) -> Result<GridDensity> {
    if h == 0.0 {
        return Ok(p.clone());
    }
    let ll = log_laplace_eval(p, h)?;
    let mut values: Vec<f64> = p
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| if v > 0.0 { (v.ln() + h * p.x(i) - ll).exp() } else { 0.0 })
        .collect();
    let edge = (values[0] + values[values.len() - 1]) * p.step;
    if edge > 1e-10 {
        return Err(Error::Unsupported(format!(
            "tilted density has boundary mass {edge:e} at h = {h}"
        )));
    }
    let x_far = p.x(0).abs().max(p.x(p.len() - 1).abs());
    let noise = p.noise_floor * (h.abs() * x_far - ll).exp();
    // values that were pure noise stay noise after tilting
    for (i, v) in values.iter_mut().enumerate() {
        if p.values[i] <= p.noise_floor {
            *v = v.min(noise);
        }
    }
    let mut out = GridDensity {
        origin: p.origin,
        step: p.step,
        values,
        noise_floor: noise,
        renormalization: 1.0,
        envelope: None,
    };
    out.renormalize();
    Ok(out)
}

/// Mean and variance (K′(h), K″(h)) of the tilted law.
pub fn esscher_stats(profile: &LogLaplaceProfile, h: f64) -> (f64, f64) {
    (profile.k1(h), profile.k2(h))
}

/// Lower bound (π/(6c²)) e^{−2A(h)} for the tilted variance, c = 1 + T_∞(p‖φ).
pub fn esscher_variance_lower_bound(profile: &LogLaplaceProfile, h: f64, c: f64) -> f64 {
    std::f64::consts::PI / (6.0 * c * c) * (-2.0 * profile.a(h)).exp()
}

/// Intervals of t in the range where A(t) ≤ a/(n − 1).
pub fn critical_zone(profile: &LogLaplaceProfile, n: usize, a: f64) -> Result<Vec<(f64, f64)>> {
    if n < 2 || !(a > 0.0) {
        return Err(Error::InvalidParameter("critical zone needs n ≥ 2 and a > 0".into()));
    }
    let level = a / (n - 1) as f64;
    let (lo, hi) = profile.range;
    let ts = profile.scan(lo, hi);
    let f = |t: f64| profile.a(t) - level;
    let mut out = Vec::new();
    let mut start: Option<f64> = if f(ts[0]) <= 0.0 { Some(ts[0]) } else { None };
    for w in ts.windows(2) {
        let (fa, fb) = (f(w[0]), f(w[1]));
        if fa > 0.0 && fb <= 0.0 {
            start = Some(bisect(f, w[0], w[1], 100));
        } else if fa <= 0.0 && fb > 0.0 {
            out.push((start.take().unwrap_or(w[0]), bisect(f, w[0], w[1], 100)));
        }
    }
    if let Some(s) = start {
        out.push((s, hi));
    }
    Ok(out)
}

/// Subgaussian constant of the Bernoulli law: (p − q)/(2(ln p − ln q)), ¼ at p = ½.
pub fn bernoulli_subgauss_constant(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
    }
    let q = 1.0 - p;
    let d = p - q;
    if d.abs() < 1e-4 {
        // d/(4 artanh d) with artanh d = d(1 + d²/3 + d⁴/5 + d⁶/7 + …)
        let d2 = d * d;
        return Ok(0.25 / (1.0 + d2 / 3.0 + d2 * d2 / 5.0 + d2 * d2 * d2 / 7.0));
    }
    Ok(d / (2.0 * (p.ln() - q.ln())))
}

/// sup_{t ≠ 0} 2K(t)/t² over |t| ≤ t_max, by scan and golden-section refinement.
pub fn numeric_subgauss_constant<F: Fn(f64) -> f64>(k: F, t_max: f64, samples: usize) -> f64 {
    let g = |t: f64| {
        if t == 0.0 {
            f64::NEG_INFINITY
        } else {
            2.0 * k(t) / (t * t)
        }
    };
    let h = 2.0 * t_max / samples as f64;
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=samples {
        let t = -t_max + i as f64 * h;
        let v = g(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    let t = golden_min(|t| -g(t), best.0 - h, best.0 + h, 1e-12);
    g(t).max(best.1)
}

/// Constant B = (1 + (α − 1)T_α)^{1/α} in E e^{tX} ≤ B e^{α* t²/2}, α* = α/(α − 1).
pub fn laplace_bound_constant(alpha: f64, t_alpha: f64) -> f64 {
    (1.0 + (alpha - 1.0) * t_alpha).powf(1.0 / alpha)
}

#[derive(Debug, Clone, Serialize)]
pub struct QuarticClass {
    pub alpha: f64,
    pub beta: f64,
    pub is_characteristic_function: bool,
    pub is_strictly_subgaussian: bool,
    /// Zeros of 1 − αz² + βz⁴ as (re, im).
    pub zeros: Vec<(f64, f64)>,
    /// Arg of each zero.
    pub angles: Vec<f64>,
}

/// Classify f(t) = e^{−t²/2}(1 − αt² + βt⁴).
pub fn quartic_classify(alpha: f64, beta: f64) -> QuarticClass {
    let r = if beta >= 0.0 {
        (beta * (1.0 - 2.0 * beta)).max(0.0).sqrt()
    } else {
        0.0
    };
    let cf = if beta == 0.0 {
        (0.0..=1.0).contains(&alpha)
    } else if (0.0..=1.0 / 3.0).contains(&beta) {
        4.0 * beta - 2.0 * r <= alpha && alpha <= 3.0 * beta + 1.0
    } else if (1.0 / 3.0..=0.5).contains(&beta) {
        4.0 * beta - 2.0 * r <= alpha && alpha <= 4.0 * beta + 2.0 * r
    } else {
        false
    };
    let sub = cf && alpha >= (2.0 * beta).sqrt();
    // z² = (α ± √(α² − 4β))/(2β), or z² = 1/α when β = 0
    let squares: Vec<Complex64> = if beta == 0.0 {
        if alpha == 0.0 {
            vec![]
        } else {
            vec![Complex64::new(1.0 / alpha, 0.0)]
        }
    } else {
        let disc = Complex64::new(alpha * alpha - 4.0 * beta, 0.0).sqrt();
        vec![(alpha + disc) / (2.0 * beta), (alpha - disc) / (2.0 * beta)]
    };
    let mut zeros = Vec::new();
    for s in squares {
        let z = s.sqrt();
        zeros.push(z);
        zeros.push(-z);
    }
    QuarticClass {
        alpha,
        beta,
        is_characteristic_function: cf,
        is_strictly_subgaussian: sub,
        angles: zeros.iter().map(|z| z.arg()).collect(),
        zeros: zeros.iter().map(|z| (z.re, z.im)).collect(),
    }
}

/// Profile of aX + bY from the profiles of independent X and Y.
pub fn combine(x: &LogLaplaceProfile, a: f64, y: &LogLaplaceProfile, b: f64) -> LogLaplaceProfile {
    let (x0, x1, x2) = (x.clone(), x.clone(), x.clone());
    let (y0, y1, y2) = (y.clone(), y.clone(), y.clone());
    let tail = match (x.tail, y.tail) {
        (TailBehavior::Decaying, _) | (_, TailBehavior::Decaying) => TailBehavior::Decaying,
        (TailBehavior::Flat, TailBehavior::Flat) => TailBehavior::Flat,
        _ => TailBehavior::Other,
    };
    let m1 = |m: &[f64], k: usize| m.get(k).copied().unwrap_or(0.0);
    LogLaplaceProfile {
        name: format!("{a}·{} + {b}·{}", x.name, y.name),
        variance: a * a * x.variance + b * b * y.variance,
        range: x.range,
        samples: x.samples,
        tail,
        accuracy: x.accuracy.max(y.accuracy),
        raw_moments: if x.raw_moments.len() >= 3 && y.raw_moments.len() >= 3 {
            let mean = a * m1(&x.raw_moments, 1) + b * m1(&y.raw_moments, 1);
            let var = a * a * x.variance + b * b * y.variance;
            vec![1.0, mean, var + mean * mean]
        } else {
            vec![]
        },
        periodic: None,
        source: Source::Closed(LogLaplace {
            k: Arc::new(move |t| x0.k(a * t) + y0.k(b * t)),
            dk: Arc::new(move |t| a * x1.k1(a * t) + b * y1.k1(b * t)),
            d2k: Arc::new(move |t| a * a * x2.k2(a * t) + b * b * y2.k2(b * t)),
            deficit: None,
            tail,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{counterexample_poly, make_model, ModelSpec};
    use std::f64::consts::PI;

    fn prof(kind: &str) -> LogLaplaceProfile {
        profile(&make_model(&ModelSpec::named(kind)).unwrap(), (0.0, 50.0), 20000).unwrap()
    }

    #[test]
    fn normal_profile_is_flat() {
        let p = prof("normal");
        for t in [-3.0, 0.0, 5.0] {
            assert_eq!(p.a(t), 0.0);
            assert_eq!(p.psi(t), 1.0);
        }
        assert!(strict_subgauss_check(&p, 1.0).holds());
        assert_eq!(separation_check(&p, &[1.0]).verdict, Verdict::Inconclusive);
        assert!(dinf_clt_check(&p).holds());
    }

    #[test]
    fn uniform_is_strictly_subgaussian_and_separated() {
        let p = prof("uniform");
        let k = (2.0 * 3f64.sqrt()).sinh() / (2.0 * 3f64.sqrt());
        assert!((p.k(2.0) - k.ln()).abs() < 1e-13);
        assert!(p.a(2.0) > 0.0);
        let r = strict_subgauss_check(&p, 1.0);
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.zero_set.len(), 1);
        assert!(r.zero_set[0].abs() < 1e-6);
        assert!(separation_check(&p, &[0.1, 1.0, 5.0]).holds());
        let d = dinf_clt_check(&p);
        assert!(d.holds(), "{d:?}");
    }

    #[test]
    fn sin4_profile_is_periodic() {
        let p = prof("sin_power");
        let per = p.periodicity_defect(3).unwrap();
        assert!(per < 1e-9);
        let c = match &p.periodic {
            Some(pp) => pp.c,
            None => unreachable!(),
        };
        assert!((p.psi(1.0) - (1.0 - c * 1f64.sin().powi(4))).abs() < 1e-14);
        let s = separation_check(&p, &[0.5]);
        assert_eq!(s.verdict, Verdict::Fails);
        assert!(strict_subgauss_check(&p, 1.0).holds());
        let d = dinf_clt_check(&p);
        assert!(d.holds(), "{d:?}");
    }

    #[test]
    fn counterexample_fails_at_pi_over_6() {
        let d = dinf_clt_check(&prof("counterexample"));
        assert_eq!(d.verdict, Verdict::Fails);
        let w = d.worst().unwrap();
        assert!(
            (w.t - PI / 6.0).abs() < 1e-8 || (w.t - 5.0 * PI / 6.0).abs() < 1e-8,
            "{w:?}"
        );
    }

    #[test]
    fn periodic_criterion() {
        let r = periodic_clt_check(&TrigPoly::sin_power(4), None).unwrap();
        assert_eq!(r.class, PeriodicClass::ConvergesWithRate);
        let r = periodic_clt_check(&TrigPoly::sin_power(6), None).unwrap();
        assert_eq!(r.class, PeriodicClass::ConvergesWithRate);
        let cp = counterexample_poly();
        let r = periodic_clt_check(&cp, None).unwrap();
        assert_eq!(r.class, PeriodicClass::Fails);
        let t0 = r.report.zero_set[0];
        assert!((t0 - PI / 6.0).abs() < 1e-10);
        // P = Q² with Q′(π/6) = −√3/2, so P″(π/6) = 2Q′² = 3/2
        assert!((cp.derivative(2).eval(t0) - 1.5).abs() < 1e-9);
        assert!(periodic_clt_check(&TrigPoly::sin_power(2), None).is_err());
    }

    #[test]
    fn bernoulli_constant() {
        assert_eq!(bernoulli_subgauss_constant(0.5).unwrap(), 0.25);
        assert!((bernoulli_subgauss_constant(0.1).unwrap() - 0.8 / (2.0 * 9f64.ln())).abs() < 1e-15);
        let a = bernoulli_subgauss_constant(0.5 + 4e-5).unwrap();
        let b = bernoulli_subgauss_constant(0.5 + 6e-5).unwrap();
        assert!(a > b && (a - 0.25).abs() < 1e-8);
        assert!(bernoulli_subgauss_constant(1.0).is_err());
    }

    #[test]
    fn quartic_examples() {
        let q = quartic_classify(0.5, 0.0);
        assert!(q.is_characteristic_function && q.is_strictly_subgaussian);
        let q = quartic_classify((2.0f64 / 3.0).sqrt(), 1.0 / 3.0);
        assert!(q.is_characteristic_function && q.is_strictly_subgaussian);
        let mut angles: Vec<f64> = q.angles.iter().map(|a| a.abs()).collect();
        angles.sort_by(f64::total_cmp);
        assert!((angles[0] - PI / 8.0).abs() < 1e-12 && (angles[1] - PI / 8.0).abs() < 1e-12);
        assert!((angles[3] - 7.0 * PI / 8.0).abs() < 1e-12);
        assert!(!quartic_classify(1.0, 0.6).is_characteristic_function);
    }

    #[test]
    fn esscher_of_normal_shifts() {
        let cfg = GridConfig::new(12.0, 1 << 12).unwrap();
        let f = GridDensity::standard_normal(&cfg);
        let q = esscher(&f, 1.0).unwrap();
        for i in (0..q.len()).step_by(97) {
            let x = q.x(i);
            assert!((q.values[i] - crate::special::std_normal_pdf(x - 1.0)).abs() < 1e-10);
        }
        assert_eq!(esscher(&f, 0.0).unwrap(), f);
    }

    #[test]
    fn critical_zone_of_uniform_is_around_zero() {
        let p = prof("uniform").with_range((-5.0, 5.0));
        let z = critical_zone(&p, 10, 0.1).unwrap();
        assert_eq!(z.len(), 1);
        assert!(z[0].0 < 0.0 && z[0].1 > 0.0);
        // A(t) ≈ t⁴/20 near 0
        let edge = (20.0 * 0.1 / 9.0f64).powf(0.25);
        assert!((z[0].1 - edge).abs() < 0.05);
    }
}
