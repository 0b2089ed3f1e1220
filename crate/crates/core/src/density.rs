//! Densities on uniform grids: discretization, FFT self-convolution for the
//! normalized sums Z_n = (X_1 + … + X_n)/√n, transforms, moments, entropy and W₂.
//!
//! | quantity | grid formula |
//! |----------|--------------|
//! | mass     | h Σ p_i |
//! | entropy  | −h Σ p_i ln p_i |
//! | L(t)     | h Σ e^{t x_i} p_i |
//! | p_n(x)   | √n · p^{*n}(x√n) |
//!
//! Grid nodes are x_i = −w + i·h with h = 2w/(N − 1), so the grid is
//! symmetric and never contains 0 when N is even.

use std::io::{BufRead, Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AnalyticModel, Envelope, Law, TailBehavior};
use crate::report::{CheckReport, Verdict, Witness};
use crate::special::{gl16, std_normal_pdf};

/// Largest tolerated value of p_n at the grid boundary.
pub const ALIAS_TOL: f64 = 1e-14;
/// Largest tolerated mass deficit before renormalization.
pub const MAX_MASS_DEFICIT: f64 = 1e-3;
/// Densities below this are treated as exactly zero in logarithms.
pub const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub half_width: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            points: 1 << 14,
        }
    }
}

impl GridConfig {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        let c = Self { half_width, points };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "half_width must be positive, got {}",
                self.half_width
            )));
        }
        if self.points < 16 || !self.points.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "points must be a power of two ≥ 16, got {}",
                self.points
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.step()
    }
}

/// Nonnegative values on x_i = origin + i·step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDensity {
    pub origin: f64,
    pub step: f64,
    pub values: Vec<f64>,
    /// Values at or below this level carry no information (FFT round-off); 0 for sampled densities.
    pub noise_floor: f64,
    /// Factor applied by the last renormalization (1 = none).
    pub renormalization: f64,
    /// Gaussian bound on the underlying density, used to certify truncated tails.
    #[serde(default)]
    pub envelope: Option<Envelope>,
}

/// Moments of a grid density about zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    /// E X³
    pub alpha3: f64,
    /// E X⁴
    pub alpha4: f64,
    /// m_0, m_1, …, m_K
    pub higher_moments: Vec<f64>,
}

impl MomentSummary {
    pub fn from_raw(m: Vec<f64>) -> Self {
        let g = |k: usize| m.get(k).copied().unwrap_or(f64::NAN);
        Self {
            mean: g(1),
            variance: g(2) - g(1) * g(1),
            alpha3: g(3),
            alpha4: g(4),
            higher_moments: m,
        }
    }
}

impl GridDensity {
    /// Samples f at the nodes of `cfg` without renormalizing.
    pub fn from_fn<F: Fn(f64) -> f64 + Sync>(cfg: &GridConfig, f: F) -> Self {
        let h = cfg.step();
        let values = (0..cfg.points)
            .into_par_iter()
            .map(|i| f(-cfg.half_width + i as f64 * h))
            .collect();
        Self {
            origin: -cfg.half_width,
            step: h,
            values,
            noise_floor: 0.0,
            renormalization: 1.0,
            envelope: None,
        }
    }

    /// φ sampled on the grid of `cfg`.
    pub fn standard_normal(cfg: &GridConfig) -> Self {
        Self::from_fn(cfg, std_normal_pdf)
    }

    /// f sampled on the same nodes as `self`.
    pub fn same_grid<F: Fn(f64) -> f64 + Sync>(&self, f: F) -> Self {
        let values = (0..self.len()).into_par_iter().map(|i| f(self.x(i))).collect();
        Self {
            origin: self.origin,
            step: self.step,
            values,
            noise_floor: 0.0,
            renormalization: 1.0,
            envelope: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.step
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.step
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Same origin, step and length up to round-off.
    pub fn is_aligned(&self, other: &Self) -> bool {
        self.len() == other.len()
            && (self.step - other.step).abs() <= 1e-12 * self.step
            && (self.origin - other.origin).abs() <= 1e-9 * self.step.max(self.origin.abs() * 1e-3)
    }

    pub fn check_aligned(&self, other: &Self) -> Result<()> {
        if self.is_aligned(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "({}, {}, {}) vs ({}, {}, {})",
                self.origin,
                self.step,
                self.len(),
                other.origin,
                other.step,
                other.len()
            )))
        }
    }

    /// Rescale to unit mass; records the factor.
    pub fn renormalize(&mut self) {
        let m = self.mass();
        if m > 0.0 {
            let f = 1.0 / m;
            self.values.iter_mut().for_each(|v| *v *= f);
            self.noise_floor *= f;
            self.renormalization = f;
        }
    }

    pub fn raw_moments(&self, kmax: usize) -> Vec<f64> {
        let mut m = vec![0.0; kmax + 1];
        for (i, &p) in self.values.iter().enumerate() {
            let x = self.x(i);
            let mut xp = p;
            for mk in m.iter_mut() {
                *mk += xp;
                xp *= x;
            }
        }
        m.iter_mut().for_each(|v| *v *= self.step);
        m
    }

    pub fn moments(&self, kmax: usize) -> MomentSummary {
        MomentSummary::from_raw(self.raw_moments(kmax.max(4)))
    }

    pub fn mean(&self) -> f64 {
        self.raw_moments(1)[1] / self.mass()
    }

    pub fn variance(&self) -> f64 {
        let m = self.raw_moments(2);
        m[2] / m[0] - (m[1] / m[0]).powi(2)
    }

    /// Four-point Lagrange interpolation; zero outside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        let r = (x - self.origin) / self.step;
        let n = self.len() as isize;
        if r < -1.0 || r > n as f64 {
            return 0.0;
        }
        let j = r.floor() as isize;
        let s = r - j as f64;
        let at = |k: isize| if k >= 0 && k < n { self.values[k as usize] } else { 0.0 };
        let (p0, p1, p2, p3) = (at(j - 1), at(j), at(j + 1), at(j + 2));
        // weights of the cubic through nodes −1, 0, 1, 2
        let w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3
    }

    /// Drop leading and trailing values at or below `level`.
    fn trimmed(mut self, level: f64) -> Self {
        let first = self.values.iter().position(|&v| v > level);
        let Some(first) = first else { return self };
        let last = self.values.iter().rposition(|&v| v > level).unwrap_or(first);
        self.values.truncate(last + 1);
        self.values.drain(..first);
        self.origin += first as f64 * self.step;
        self
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", csv_float(self.x(i)), csv_float(*v))?;
        }
        Ok(())
    }

    /// Reads the `x,value` format written by [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (ln, line) in r.lines().enumerate() {
            let line = line?;
            if ln == 0 || line.trim().is_empty() {
                continue;
            }
            let mut it = line.split(',');
            let mut next = || -> Result<f64> {
                it.next()
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: expected x,value", ln + 1)))
            };
            xs.push(next()?);
            vs.push(next()?);
        }
        if xs.len() < 2 {
            return Err(Error::Parse("grid needs at least two rows".into()));
        }
        let step = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        Ok(Self {
            origin: xs[0],
            step,
            values: vs,
            noise_floor: 0.0,
            renormalization: 1.0,
            envelope: None,
        })
    }

    /// origin, step, then the values; all little-endian f64.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.origin.to_le_bytes())?;
        w.write_all(&self.step.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() < 16 || buf.len() % 8 != 0 {
            return Err(Error::Parse(format!("binary grid has {} bytes", buf.len())));
        }
        let f: Vec<f64> = buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        Ok(Self {
            origin: f[0],
            step: f[1],
            values: f[2..].to_vec(),
            noise_floor: 0.0,
            renormalization: 1.0,
            envelope: None,
        })
    }
}

/// 12 significant digits, fixed layout.
pub fn csv_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.11e}")
    }
}

/// Cell average (1/h)∫ pdf over [a, b] split at the breakpoints inside it.
fn cell_average(pdf: &(dyn Fn(f64) -> f64 + Send + Sync), a: f64, b: f64, breaks: &[f64]) -> f64 {
    let (gx, gw) = gl16();
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|&t| t > a && t < b));
    cuts.push(b);
    let mut s = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (x, wt) in gx.iter().zip(gw) {
            s += wt * half * pdf(mid + half * x);
        }
    }
    s / (b - a)
}

/// Sample the model density on the grid of `cfg` and renormalize to unit mass.
///
/// Nodes are sampled pointwise (spectrally accurate for smooth densities);
/// cells containing a breakpoint of the model get the exact cell average so
/// jumps keep the mass and second moment accurate.
pub fn discretize(model: &AnalyticModel, cfg: &GridConfig) -> Result<GridDensity> {
    cfg.validate()?;
    let Law::Density { pdf, breakpoints } = &model.law else {
        return Err(Error::NoDensity(model.name.clone()));
    };
    let h = cfg.step();
    let values: Vec<f64> = (0..cfg.points)
        .into_par_iter()
        .map(|i| {
            let x = cfg.node(i);
            let (a, b) = (x - 0.5 * h, x + 0.5 * h);
            if breakpoints.iter().any(|&t| t >= a && t <= b) {
                cell_average(pdf.as_ref(), a, b, breakpoints)
            } else {
                pdf(x)
            }
        })
        .collect();
    if let Some(i) = values.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "model {} has density {} at x = {}",
            model.name,
            values[i],
            cfg.node(i)
        )));
    }
    let mut g = GridDensity {
        origin: -cfg.half_width,
        step: h,
        values,
        noise_floor: 0.0,
        renormalization: 1.0,
        envelope: None,
    };
    let deficit = 1.0 - g.mass();
    if deficit.abs() > MAX_MASS_DEFICIT {
        return Err(Error::MassError {
            model: model.name.clone(),
            mass_error: deficit,
        });
    }
    g.renormalize();
    g.envelope = model.envelope;
    Ok(g)
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Lattice convolution (p * q)(x) on the merged grid, via FFT.
/// Negative round-off is clamped, the result renormalized and its noise-only tails trimmed.
pub fn convolve(p: &GridDensity, q: &GridDensity) -> Result<GridDensity> {
    if (p.step - q.step).abs() > 1e-12 * p.step {
        return Err(Error::GridMismatch(format!("steps {} and {}", p.step, q.step)));
    }
    let n = p.len() + q.len() - 1;
    let size = n.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let load = |v: &[f64]| {
        let mut b = vec![Complex64::new(0.0, 0.0); size];
        for (dst, &src) in b.iter_mut().zip(v) {
            dst.re = src;
        }
        b
    };
    let mut a = load(&p.values);
    let mut b = load(&q.values);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inv.process(&mut a);
    let scale = p.step / size as f64;
    let values: Vec<f64> = a[..n].iter().map(|z| (z.re * scale).max(0.0)).collect();
    let roundoff = 4.0 * f64::EPSILON * (size as f64).log2() * p.step * l2(&p.values) * l2(&q.values);
    let noise = roundoff + p.noise_floor * q.mass() + q.noise_floor * p.mass();
    let mut out = GridDensity {
        origin: p.origin + q.origin,
        step: p.step,
        values,
        noise_floor: noise,
        renormalization: 1.0,
        envelope: None,
    };
    out.renormalize();
    let level = 1e-3 * out.noise_floor;
    Ok(out.trimmed(level))
}

/// p^{*n} on the lattice, by repeated squaring.
pub fn self_convolve(p: &GridDensity, n: usize) -> Result<GridDensity> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be ≥ 1".into()));
    }
    let mut result: Option<GridDensity> = None;
    let mut power = p.clone();
    let mut k = n;
    loop {
        if k & 1 == 1 {
            result = Some(match result {
                None => power.clone(),
                Some(r) => convolve(&r, &power)?,
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        power = convolve(&power, &power)?;
    }
    Ok(result.expect("n ≥ 1"))
}

/// Density p_n of Z_n = (X_1 + … + X_n)/√n on the grid of `cfg`.
pub fn normalized_sum_density(model: &AnalyticModel, n: usize, cfg: &GridConfig) -> Result<GridDensity> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be ≥ 1".into()));
    }
    let base = discretize(model, cfg)?;
    if n == 1 {
        return Ok(base);
    }
    let sd = base.variance().sqrt();
    if base.mean().abs() > 1e-8 * sd.max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "normalized sums need a centered model; {} has mean {}",
            model.name,
            base.mean()
        )));
    }
    let sum = self_convolve(&base.clone().trimmed(LOG_FLOOR), n)?;
    let mut pn = resample_scaled(&sum, (n as f64).sqrt(), cfg)?;
    pn.envelope = sum_envelope(model, &base, n);
    Ok(pn)
}

/// Pointwise bound p_n(x) ≤ e^{1/2} M exp{−(n−1)x²/(2nσ²)} as an envelope, with σ² the
/// subgaussian constant sup 2K(t)/t² (scanned on |t| ≤ 40) and M the largest sampled value of p.
fn sum_envelope(model: &AnalyticModel, base: &GridDensity, n: usize) -> Option<Envelope> {
    let l = model.laplace.as_ref()?;
    if matches!(l.tail, TailBehavior::Other) {
        return None;
    }
    let mut s2 = model.variance();
    for k in 1..=4000 {
        let t = 0.01 * k as f64;
        for t in [t, -t] {
            let v = 2.0 * (l.k)(t) / (t * t);
            if v.is_finite() {
                s2 = s2.max(v);
            }
        }
    }
    let nf = n as f64;
    Some(Envelope {
        c: 0.5f64.exp() * base.max_value() * (1.0 + 1e-3),
        s: (nf * s2 * (1.0 + 1e-9) / (nf - 1.0)).sqrt(),
    })
}

/// Density of S/c on the grid of `cfg`, given the lattice density of S.
fn resample_scaled(s: &GridDensity, c: f64, cfg: &GridConfig) -> Result<GridDensity> {
    let h = cfg.step();
    let mut values: Vec<f64> = (0..cfg.points)
        .into_par_iter()
        .map(|i| (c * s.interpolate(c * (-cfg.half_width + i as f64 * h))).max(0.0))
        .collect();
    let edge = values[0].max(values[cfg.points - 1]);
    if edge > ALIAS_TOL.max(c * s.noise_floor) {
        return Err(Error::Aliasing { edge });
    }
    // support ends that fall between lattice nodes leave cubic overshoot below the noise
    let floor = c * s.noise_floor;
    values.iter_mut().for_each(|v| {
        if *v <= 1e-3 * floor {
            *v = 0.0
        }
    });
    let mut g = GridDensity {
        origin: -cfg.half_width,
        step: h,
        values,
        noise_floor: floor,
        renormalization: 1.0,
        envelope: None,
    };
    g.renormalize();
    Ok(g)
}

/// Differential entropy −∫ p ln p.
pub fn entropy(p: &GridDensity) -> f64 {
    -p.values
        .iter()
        .filter(|&&v| v > LOG_FLOOR)
        .map(|&v| v * v.ln())
        .sum::<f64>()
        * p.step
}

/// ln ∫ e^{tx} p(x) dx, ignoring values below the noise floor.
pub fn log_laplace_eval(p: &GridDensity, t: f64) -> Result<f64> {
    let terms: Vec<(usize, f64)> = p
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > p.noise_floor && v > LOG_FLOOR)
        .map(|(i, &v)| (i, t * p.x(i) + v.ln()))
        .collect();
    let (Some(first), Some(last)) = (terms.first(), terms.last()) else {
        return Err(Error::InvalidParameter("empty density".into()));
    };
    let m = terms.iter().map(|(_, l)| *l).fold(f64::NEG_INFINITY, f64::max);
    // integrand must have decayed where the data ends (unless that is the grid edge of a compact support)
    let edge = first.1.max(last.1);
    let touches = first.0 == 0 || last.0 == p.len() - 1;
    if touches && edge - m > -(1e-12f64).ln().abs() {
        return Err(Error::Unsupported(format!(
            "e^{{tx}} p(x) has not decayed at the grid boundary for t = {t}"
        )));
    }
    let s: f64 = terms.iter().map(|(_, l)| (l - m).exp()).sum();
    Ok(m + (s * p.step).ln())
}

/// L(t) = ∫ e^{tx} p(x) dx.
pub fn laplace_eval(p: &GridDensity, t: f64) -> Result<f64> {
    log_laplace_eval(p, t).map(f64::exp)
}

/// ∫ e^{itx} p(x) dx by direct summation.
pub fn char_eval(p: &GridDensity, t: f64) -> Complex64 {
    let s: Complex64 = p
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| Complex64::from_polar(v, t * p.x(i)))
        .sum();
    s * p.step
}

/// W₂ between two grid densities, each read as piecewise constant on its cells.
///
/// Both quantile functions are then piecewise linear; the squared difference
/// is integrated exactly over the merged breakpoints.
pub fn wasserstein2(p: &GridDensity, q: &GridDensity) -> f64 {
    // segments (u0, u1, x0, x1) of the quantile function
    fn segments(g: &GridDensity) -> Vec<(f64, f64, f64, f64)> {
        let total: f64 = g.values.iter().sum();
        let mut u = 0.0;
        let mut out = Vec::with_capacity(g.len());
        for (i, &v) in g.values.iter().enumerate() {
            if v <= 0.0 {
                continue;
            }
            let du = v / total;
            let x0 = g.x(i) - 0.5 * g.step;
            out.push((u, u + du, x0, x0 + g.step));
            u += du;
        }
        if let Some(last) = out.last_mut() {
            last.1 = 1.0;
        }
        out
    }
    let (sp, sq) = (segments(p), segments(q));
    let at = |s: &(f64, f64, f64, f64), u: f64| {
        let w = if s.1 > s.0 { (u - s.0) / (s.1 - s.0) } else { 0.0 };
        s.2 + w * (s.3 - s.2)
    };
    let (mut i, mut j) = (0, 0);
    let mut u = 0.0;
    let mut acc = 0.0;
    while i < sp.len() && j < sq.len() {
        let end = sp[i].1.min(sq[j].1);
        if end > u {
            let da = at(&sp[i], u) - at(&sq[j], u);
            let db = at(&sp[i], end) - at(&sq[j], end);
            acc += (end - u) * (da * da + da * db + db * db) / 3.0;
            u = end;
        }
        if sp[i].1 <= end {
            i += 1;
        }
        if sq[j].1 <= end {
            j += 1;
        }
    }
    acc.max(0.0).sqrt()
}

/// Checks p_n(x) ≤ e^{1/2} M exp{−(n−1)x²/(2nσ²)} at every node of p_n,
/// for a model that is subgaussian with constant σ² and has density bounded by M.
pub fn pointwise_density_bound_check(
    model: &AnalyticModel,
    n: usize,
    sigma2: f64,
    m_bound: f64,
    cfg: &GridConfig,
) -> Result<CheckReport> {
    if !(sigma2 > 0.0 && m_bound > 0.0) {
        return Err(Error::InvalidParameter("σ² and M must be positive".into()));
    }
    let pn = normalized_sum_density(model, n, cfg)?;
    let tol = 1e-9 * m_bound + 10.0 * pn.noise_floor;
    let nf = n as f64;
    let mut rep = CheckReport::new("pointwise_density_bound").tol("abs_tol", tol);
    let mut worst = Witness {
        t: f64::NAN,
        margin: f64::INFINITY,
    };
    for (i, &v) in pn.values.iter().enumerate() {
        let x = pn.x(i);
        let bound = 0.5f64.exp() * m_bound * (-(nf - 1.0) * x * x / (2.0 * nf * sigma2)).exp();
        let margin = bound - v;
        if margin < worst.margin {
            worst = Witness { t: x, margin };
        }
    }
    rep.witnesses.push(worst);
    rep.verdict = if worst.margin < -tol {
        Verdict::Fails
    } else {
        Verdict::Holds
    };
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{make_model, ModelSpec};

    fn uniform() -> AnalyticModel {
        make_model(&ModelSpec::named("uniform")).unwrap()
    }

    #[test]
    fn normal_mass_deficit_is_negligible() {
        let m = make_model(&ModelSpec::named("normal")).unwrap();
        let g = discretize(&m, &GridConfig::new(10.0, 4096).unwrap()).unwrap();
        assert!((g.renormalization - 1.0).abs() < 1e-14);
    }

    #[test]
    fn uniform_cell_averages_keep_mass_and_variance() {
        let g = discretize(&uniform(), &GridConfig::new(4.0, 4096).unwrap()).unwrap();
        assert!((g.renormalization - 1.0).abs() < 1e-13, "{}", g.renormalization);
        assert!((g.variance() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn power_density_second_moment() {
        let m = make_model(&ModelSpec::named("power_density")).unwrap();
        let g = discretize(&m, &GridConfig::new(10.0, 4096).unwrap()).unwrap();
        assert!((g.raw_moments(2)[2] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_grids_and_atoms() {
        assert!(GridConfig::new(12.0, 1000).is_err());
        assert!(GridConfig::new(-1.0, 1024).is_err());
        let b = make_model(&ModelSpec::named("bernoulli_sym")).unwrap();
        assert!(matches!(
            discretize(&b, &GridConfig::default()),
            Err(Error::NoDensity(_))
        ));
        let wide = make_model(&ModelSpec::with("normal", serde_json::json!({"variance": 25.0}))).unwrap();
        assert!(matches!(
            discretize(&wide, &GridConfig::new(4.0, 1024).unwrap()),
            Err(Error::MassError { .. })
        ));
    }

    #[test]
    fn gaussian_is_a_fixed_point() {
        let m = make_model(&ModelSpec::named("normal")).unwrap();
        let cfg = GridConfig::default();
        let p7 = normalized_sum_density(&m, 7, &cfg).unwrap();
        let worst = (0..p7.len())
            .map(|i| (p7.values[i] - std_normal_pdf(p7.x(i))).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "{worst:e}");
    }

    #[test]
    fn two_uniforms_make_a_triangle() {
        let cfg = GridConfig::default();
        let p2 = normalized_sum_density(&uniform(), 2, &cfg).unwrap();
        let s6 = 6f64.sqrt();
        // oracle: triangle on [−√6, √6] with peak 1/√6
        let tri = |x: f64| ((s6 - x.abs()) / 6.0).max(0.0);
        let worst = (0..p2.len())
            .map(|i| (p2.values[i] - tri(p2.x(i))).abs())
            .fold(0.0, f64::max);
        assert!(worst < 2e-3, "{worst}");
        // interpolation across the kink at 0 is first order in the step
        assert!((p2.interpolate(0.0) - 1.0 / s6).abs() < cfg.step());
    }

    #[test]
    fn aliasing_is_reported() {
        let cfg = GridConfig::new(3.0, 1024).unwrap();
        assert!(matches!(
            normalized_sum_density(&uniform(), 8, &cfg),
            Err(Error::Aliasing { .. })
        ));
    }

    #[test]
    fn entropy_closed_forms() {
        let cfg = GridConfig::default();
        let phi = GridDensity::standard_normal(&cfg);
        let e = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
        assert!((entropy(&phi) - e).abs() < 1e-12);
        let u = discretize(&uniform(), &cfg).unwrap();
        // the two cells straddling the jumps are off by O(h)
        assert!((entropy(&u) - (2.0 * 3f64.sqrt()).ln()).abs() < cfg.step());
    }

    #[test]
    fn laplace_closed_forms() {
        let cfg = GridConfig::default();
        let u = discretize(&uniform(), &cfg).unwrap();
        let s3 = 3f64.sqrt();
        assert!((laplace_eval(&u, 1.0).unwrap() - s3.sinh() / s3).abs() < 1e-6);
        assert!((laplace_eval(&u, 0.0).unwrap() - 1.0).abs() < 1e-12);
        let phi = GridDensity::standard_normal(&cfg);
        assert!((laplace_eval(&phi, 2.0).unwrap() - 2f64.exp()).abs() < 1e-10);
        assert!(laplace_eval(&phi, 40.0).is_err());
        let c = char_eval(&phi, 1.5);
        assert!((c.re - (-1.125f64).exp()).abs() < 1e-12 && c.im.abs() < 1e-12);
    }

    #[test]
    fn w2_translation_and_scale() {
        let cfg = GridConfig::default();
        let phi = GridDensity::standard_normal(&cfg);
        assert_eq!(wasserstein2(&phi, &phi), 0.0);
        let shifted = phi.same_grid(|x| std_normal_pdf(x - 0.5));
        assert!((wasserstein2(&phi, &shifted) - 0.5).abs() < 1e-6);
        let wide = phi.same_grid(|x| std_normal_pdf(x / 1.2) / 1.2);
        assert!((wasserstein2(&phi, &wide) - 0.2).abs() < 1e-6);
    }

    #[test]
    fn pointwise_bound() {
        let cfg = GridConfig::default();
        let m = 1.0 / (2.0 * 3f64.sqrt());
        assert!(pointwise_density_bound_check(&uniform(), 8, 1.0, m, &cfg)
            .unwrap()
            .holds());
        let r = pointwise_density_bound_check(&uniform(), 8, 0.5, m, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let nrm = make_model(&ModelSpec::named("normal")).unwrap();
        for n in [1, 3, 8] {
            let r = pointwise_density_bound_check(&nrm, n, 1.0, crate::special::INV_SQRT_2PI, &cfg).unwrap();
            assert!(r.holds(), "n = {n}");
        }
    }

    #[test]
    fn binary_and_csv_round_trip() {
        let g = discretize(&uniform(), &GridConfig::new(4.0, 64).unwrap()).unwrap();
        let mut buf = Vec::new();
        g.write_binary(&mut buf).unwrap();
        let back = GridDensity::read_binary(&buf[..]).unwrap();
        assert_eq!(back.values, g.values);
        assert_eq!((back.origin, back.step), (g.origin, g.step));
        let mut csv = Vec::new();
        g.write_csv(&mut csv).unwrap();
        let back = GridDensity::read_csv(&csv[..]).unwrap();
        assert!(back.is_aligned(&g));
    }
}
